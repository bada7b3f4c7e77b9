//! Named suites of checks, run concurrently and reported in `check_id` order.

use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;
use std::thread;
use std::time::Instant;

use crate::checks::{boolean, decay, gaussian, halfspaces, identities};
use crate::error::{LabError, Result};
use crate::report::CheckReport;
use crate::Context;

/// A unit of scheduling: a function producing one or more reports.
#[derive(Clone, Copy)]
pub struct Job {
    pub id: &'static str,
    /// Acceptance criterion covered, stamped on every report of the job.
    pub criterion: Option<u8>,
    pub run: fn(&Context) -> Result<Vec<CheckReport>>,
}

impl std::fmt::Debug for Job {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Job").field("id", &self.id).field("criterion", &self.criterion).finish()
    }
}

const fn job(id: &'static str, criterion: Option<u8>, run: fn(&Context) -> Result<Vec<CheckReport>>) -> Job {
    Job { id, criterion, run }
}

pub const JOBS: &[Job] = &[
    job("fourier-identities", Some(1), identities::fourier_identities),
    job("restriction-identity", Some(2), identities::restriction_identity),
    job("restriction-weight", Some(3), identities::restriction_weight),
    job("exact-m-brute-force", Some(4), halfspaces::exact_m_vs_brute_force),
    job("exact-m-fixtures", Some(4), halfspaces::exact_m_fixtures),
    job("linear-forms", Some(5), halfspaces::linear_form_bounds),
    job("boolean-restriction", Some(6), boolean::restriction_theorem_corpus),
    job("boolean-restriction-modes", None, boolean::restriction_theorem_modes),
    job("boolean-converse", None, boolean::converse_corpus),
    job("peres", Some(7), boolean::peres_majority),
    job("halfspace-closed-forms", Some(8), gaussian::halfspace_closed_forms),
    job("ball", Some(9), gaussian::ball_checks),
    job("exp-w1", Some(9), gaussian::exp_w1_checks),
    job("gaussian-converse-identity", None, gaussian::converse_identity_checks),
    job("gaussian-converse", None, gaussian::gaussian_converse_checks),
    job("counterexample-decay", Some(10), decay::counterexample_decay),
    job("mixed-example", Some(11), boolean::mixed_example_checks),
];

/// Suite names and the jobs they contain.
pub const SUITES: &[(&str, &[&str])] = &[
    (
        "identities",
        &["fourier-identities", "restriction-identity", "restriction-weight"],
    ),
    ("halfspaces", &["exact-m-brute-force", "exact-m-fixtures", "linear-forms"]),
    (
        "boolean",
        &[
            "boolean-restriction",
            "boolean-restriction-modes",
            "boolean-converse",
            "peres",
            "mixed-example",
        ],
    ),
    ("decay", &["counterexample-decay"]),
    (
        "gaussian",
        &[
            "halfspace-closed-forms",
            "ball",
            "exp-w1",
            "gaussian-converse-identity",
            "gaussian-converse",
        ],
    ),
];

pub fn suite_names() -> impl Iterator<Item = &'static str> {
    SUITES.iter().map(|(name, _)| *name).chain(std::iter::once("all"))
}

/// Jobs of a suite; `all` is every job.
pub fn suite_jobs(name: &str) -> Result<Vec<Job>> {
    if name == "all" {
        return Ok(JOBS.to_vec());
    }
    let (_, ids) = SUITES
        .iter()
        .find(|(n, _)| *n == name)
        .ok_or_else(|| LabError::UnknownSuite(name.to_string()))?;
    Ok(ids.iter().map(|id| *JOBS.iter().find(|j| j.id == *id).expect("suite lists known jobs")).collect())
}

/// Jobs covering acceptance criterion `k`.
pub fn criterion_jobs(k: u8) -> Vec<Job> {
    JOBS.iter().filter(|j| j.criterion == Some(k)).copied().collect()
}

fn run_job(job: &Job, ctx: &Context) -> Vec<CheckReport> {
    let start = Instant::now();
    let mut reports = match (job.run)(ctx) {
        Ok(r) => r,
        Err(e) => {
            let mut r = CheckReport::errored(format!("{}/error", job.id), e.to_string());
            r.runtime_ms = start.elapsed().as_secs_f64() * 1e3;
            vec![r]
        }
    };
    for r in &mut reports {
        r.criterion = job.criterion;
    }
    reports
}

/// Runs `jobs` on a pool of worker threads and returns all reports sorted by
/// `check_id`. The result does not depend on scheduling.
pub fn run_jobs(jobs: &[Job], ctx: &Context) -> Vec<CheckReport> {
    let workers = thread::available_parallelism().map_or(1, |n| n.get()).min(jobs.len().max(1));
    let next = AtomicUsize::new(0);
    let collected = Mutex::new(Vec::new());
    thread::scope(|scope| {
        for _ in 0..workers {
            scope.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                let Some(job) = jobs.get(i) else { break };
                let reports = run_job(job, ctx);
                collected.lock().expect("no worker panics while holding the lock").extend(reports);
            });
        }
    });
    let mut reports = collected.into_inner().expect("workers have finished");
    reports.sort_by(|a, b| a.check_id.cmp(&b.check_id));
    reports
}

pub fn run_suite(name: &str, ctx: &Context) -> Result<Vec<CheckReport>> {
    Ok(run_jobs(&suite_jobs(name)?, ctx))
}

/// Process exit code for a finished run: 0 when every check passes, else 1.
pub fn exit_code(reports: &[CheckReport]) -> i32 {
    if reports.iter().all(|r| r.pass) {
        0
    } else {
        1
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn registry_is_consistent() {
        for (_, ids) in SUITES {
            for id in *ids {
                assert!(JOBS.iter().any(|j| j.id == *id), "{id}");
            }
        }
        // every job belongs to some suite
        for j in JOBS {
            assert!(SUITES.iter().any(|(_, ids)| ids.contains(&j.id)), "{}", j.id);
        }
        for k in 1..=11 {
            assert!(!criterion_jobs(k).is_empty(), "criterion {k}");
        }
        assert!(matches!(suite_jobs("nope"), Err(LabError::UnknownSuite(_))));
    }
}

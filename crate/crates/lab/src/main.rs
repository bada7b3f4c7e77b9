use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use stability_lab::checks::boolean::{check_boolean_restriction_theorem, Mode, THEOREM_T};
use stability_lab::checks::decay::{decay_point, DECAY_BLOCKS, DECAY_T};
use stability_lab::report::{emit, to_json};
use stability_lab::{catalogs, resolve_function, resolve_seed, suites, table_io, Context, LabError, Result};
use stability_lab_core::gaussian::{ball_experiments, BallConfig, McConfig};
use stability_lab_core::halfspace::{exact_m_with, heuristic_m, HeuristicBudget, CATALOG_LIMIT};
use stability_lab_core::restriction::apply_restriction;
use stability_lab_core::{level1_weight, wht, Restriction};

#[derive(Parser)]
#[command(name = "stability-lab", version, about = "Noise stability and half-space correlation experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Fourier summary of a function (file path or registry name such as majority:5).
    Analyze {
        function: String,
        #[command(flatten)]
        view: AnalyzeView,
    },
    /// Largest covariance with a half-space.
    Mcorr {
        function: String,
        /// Exhaustive search over the threshold catalog (at most 5 relevant coordinates).
        #[arg(long, conflicts_with = "budget")]
        exact: bool,
        /// Number of random directions for the heuristic search.
        #[arg(long)]
        budget: Option<usize>,
    },
    /// Expected correlation of a random restriction with half-spaces.
    Restrict {
        function: String,
        #[arg(long = "t", default_value_t = THEOREM_T)]
        t: f64,
        #[arg(long, conflicts_with = "exact")]
        samples: Option<usize>,
        #[arg(long)]
        exact: bool,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Runs a verification suite and writes report.json and report.csv.
    Verify {
        /// identities, halfspaces, boolean, decay, gaussian or all.
        suite: String,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, default_value = "reports")]
        out: PathBuf,
        /// Monte-Carlo budget per estimate.
        #[arg(long)]
        samples: Option<usize>,
    },
    /// Worked examples: mixed, decay, gaussian-ball; any registry name prints
    /// its truth table in the file format.
    Example { name: String },
}

#[derive(Args)]
#[group(multiple = false)]
struct AnalyzeView {
    /// Print every nonzero Fourier coefficient.
    #[arg(long)]
    spectrum: bool,
    /// CSV of Var(P_t f) and E[f P_t f] over t0:t1:steps.
    #[arg(long, value_name = "T0:T1:STEPS")]
    stability_curve: Option<String>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn run(cmd: Command) -> Result<u8> {
    match cmd {
        Command::Analyze { function, view } => analyze(&function, &view),
        Command::Mcorr { function, exact, budget } => mcorr(&function, exact, budget),
        Command::Restrict {
            function,
            t,
            samples,
            exact,
            seed,
        } => restrict(&function, t, samples, exact, seed),
        Command::Verify {
            suite,
            seed,
            out,
            samples,
        } => verify(&suite, seed, &out, samples),
        Command::Example { name } => example(&name),
    }
}

fn parse_curve(spec: &str) -> Result<(f64, f64, usize)> {
    let bad = || LabError::Config(format!("--stability-curve expects t0:t1:steps, got {spec:?}"));
    let parts: Vec<&str> = spec.split(':').collect();
    let [t0, t1, steps] = parts.as_slice() else {
        return Err(bad());
    };
    let (t0, t1, steps): (f64, f64, usize) = (
        t0.parse().map_err(|_| bad())?,
        t1.parse().map_err(|_| bad())?,
        steps.parse().map_err(|_| bad())?,
    );
    if !(t0 >= 0.0 && t1 >= t0 && steps >= 1) {
        return Err(bad());
    }
    Ok((t0, t1, steps))
}

fn analyze(arg: &str, view: &AnalyzeView) -> Result<u8> {
    let (name, f) = resolve_function(arg)?;
    let spec = wht(&f);
    if view.spectrum {
        println!("mask,set,coefficient");
        for (s, c) in spec.coeffs().iter().enumerate() {
            if c.abs() > 1e-15 {
                let set: Vec<String> = (0..f.n()).filter(|i| s >> i & 1 == 1).map(|i| (i + 1).to_string()).collect();
                println!("{s},{{{}}},{c:.16e}", set.join(" "));
            }
        }
    } else if let Some(curve) = &view.stability_curve {
        let (t0, t1, steps) = parse_curve(curve)?;
        println!("t,var_pt,stability");
        for k in 0..=steps {
            let t = t0 + (t1 - t0) * k as f64 / steps as f64;
            println!("{t:.8e},{:.8e},{:.8e}", spec.var_pt(t), spec.stability(t));
        }
    } else {
        let summary = serde_json::json!({
            "function": name,
            "n": f.n(),
            "range": f.range(),
            "mean": f.mean(),
            "variance": f.variance(),
            "level1_weight": spec.level1_weight(),
            "level_weights": spec.level_weights(),
            "relevant_coordinates": (0..f.n()).filter(|i| f.relevant_coordinates() >> i & 1 == 1).map(|i| i + 1).collect::<Vec<_>>(),
        });
        println!("{}", to_json(&summary)?);
    }
    Ok(0)
}

fn mcorr(arg: &str, exact: bool, budget: Option<usize>) -> Result<u8> {
    let (name, f) = resolve_function(arg)?;
    let relevant = f.relevant_coordinates().count_ones() as usize;
    let use_exact = exact || (budget.is_none() && relevant <= CATALOG_LIMIT);
    let result = if use_exact {
        exact_m_with(&f, catalogs())?
    } else {
        let mut b = HeuristicBudget::default();
        if let Some(k) = budget {
            b.random_directions = k;
        }
        heuristic_m(&f, &b)?
    };
    let out = serde_json::json!({ "function": name, "n": f.n(), "m": result });
    println!("{}", to_json(&out)?);
    Ok(0)
}

fn restrict(arg: &str, t: f64, samples: Option<usize>, exact: bool, seed: Option<u64>) -> Result<u8> {
    let (name, f) = resolve_function(arg)?;
    if !(t > 0.0 && t.is_finite()) {
        return Err(LabError::Config(format!("--t must be finite and > 0, got {t}")));
    }
    let sampled = samples.is_some() || (!exact && f.n() > CATALOG_LIMIT);
    let mode = if sampled {
        let seed = resolve_seed(seed)?;
        Mode::Sampled(McConfig::new(samples.unwrap_or(10_000), seed))
    } else {
        Mode::Exact
    };
    let report = check_boolean_restriction_theorem(&name, &f, t, mode)?;
    println!("{}", to_json(&report)?);
    Ok(u8::from(!report.pass))
}

fn verify(suite: &str, seed: Option<u64>, out: &std::path::Path, samples: Option<usize>) -> Result<u8> {
    let jobs = suites::suite_jobs(suite)?;
    let mut ctx = Context::new(resolve_seed(seed)?);
    if let Some(s) = samples {
        if s < 2 {
            return Err(LabError::Config("--samples must be at least 2".into()));
        }
        ctx.samples = s;
    }
    let reports = suites::run_jobs(&jobs, &ctx);
    emit(out, &reports)?;
    for r in &reports {
        println!("{} {}", if r.pass { "PASS" } else { "FAIL" }, r.check_id);
    }
    let failed = reports.iter().filter(|r| !r.pass).count();
    println!(
        "{suite}: {} checks, {failed} failed, seed {}, reports in {}",
        reports.len(),
        ctx.seed,
        out.display()
    );
    Ok(suites::exit_code(&reports) as u8)
}

fn example(name: &str) -> Result<u8> {
    match name {
        "mixed" => {
            let (_, f) = resolve_function("mixed:5")?;
            for z1 in [1i8, -1] {
                let mut z = vec![0i8; 5];
                z[0] = z1;
                let fz = apply_restriction(&f, &Restriction::new(z)?)?;
                let m = exact_m_with(&fz.to_unit_interval(), catalogs())?.value;
                println!("z1 = {z1:+}: M = {m:.6}, w1 = {:.6}", level1_weight(&fz));
            }
        }
        "decay" => {
            println!("m,n,var_pt,best_cov,method");
            for &m in &DECAY_BLOCKS {
                let p = decay_point(m, DECAY_T)?;
                println!("{m},{},{:.8e},{:.8e},{:?}", m * m, p.var_pt, p.best_cov, p.method);
            }
        }
        "gaussian-ball" => {
            let cfg = BallConfig::new(16, McConfig::new(200_000, resolve_seed(None)?));
            println!("{}", to_json(&ball_experiments(&cfg)?)?);
        }
        other => {
            let (_, f) = resolve_function(other)?;
            print!("{}", table_io::format_table(&f));
        }
    }
    Ok(0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn curve_specs() {
        assert_eq!(parse_curve("0:1:4").unwrap(), (0.0, 1.0, 4));
        for bad in ["0:1", "1:0:3", "0:1:0", "a:b:c", "-1:1:2"] {
            assert!(parse_curve(bad).is_err(), "{bad}");
        }
    }
}

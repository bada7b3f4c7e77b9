//! Individual checks. Each function returns one or more [`CheckReport`]s and
//! draws all randomness from the [`Context`](crate::Context) seed.

pub mod boolean;
pub mod decay;
pub mod gaussian;
pub mod halfspaces;
pub mod identities;

use std::time::Instant;

use rand::Rng;
use stability_lab_core::{BooleanFunction, RangeTag};

use crate::report::CheckReport;

/// Runs `body` and stamps the elapsed time on the report it returns.
pub(crate) fn timed(body: impl FnOnce() -> CheckReport) -> CheckReport {
    let start = Instant::now();
    let mut r = body();
    r.runtime_ms = start.elapsed().as_secs_f64() * 1e3;
    r
}

/// Either a random 0/1 table or a random table with values spread over the
/// whole range, alternating with `k`.
pub(crate) fn random_function(n: usize, k: usize, rng: &mut impl Rng) -> BooleanFunction {
    if k.is_multiple_of(2) {
        BooleanFunction::indicator(n, |_| rng.random::<bool>()).expect("dimension is valid")
    } else {
        BooleanFunction::from_index_fn(n, RangeTag::Signed, |_| rng.random_range(-1.0..=1.0))
            .expect("dimension is valid")
    }
}

/// `s` with `e^{-s} = 1 - e^{-t}`.
pub fn restriction_time(t: f64) -> f64 {
    -(-(-t).exp()).ln_1p()
}

/// Key for the empirical distribution of a statistic.
pub(crate) fn bucket(v: f64) -> String {
    format!("{v:.12e}")
}

//! Verification suites, truth-table files, reports and the command-line
//! driver on top of `stability-lab-core`.

pub mod checks;
pub mod error;
pub mod report;
pub mod suites;
pub mod table_io;

use std::path::Path;
use std::str::FromStr;
use std::sync::OnceLock;

use stability_lab_core::corpus::Builtin;
use stability_lab_core::gaussian::McConfig;
use stability_lab_core::halfspace::{Catalogs, CATALOG_LIMIT};
use stability_lab_core::BooleanFunction;

pub use error::{LabError, Result};
pub use report::{CheckReport, Relation};

pub const SEED_ENV: &str = "STABILITY_LAB_SEED";
pub const DEFAULT_SEED: u64 = 20_050_117;
pub const DEFAULT_SAMPLES: usize = 1_000_000;

/// `--seed`, else `STABILITY_LAB_SEED`, else [`DEFAULT_SEED`].
pub fn resolve_seed(flag: Option<u64>) -> Result<u64> {
    if let Some(s) = flag {
        return Ok(s);
    }
    match std::env::var(SEED_ENV) {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| LabError::Config(format!("{SEED_ENV}={v:?} is not an unsigned integer"))),
        Err(std::env::VarError::NotPresent) => Ok(DEFAULT_SEED),
        Err(e) => Err(LabError::Config(format!("{SEED_ENV}: {e}"))),
    }
}

/// Threshold catalogs for `n <= 5`, built once per process.
pub fn catalogs() -> &'static Catalogs {
    static CATALOGS: OnceLock<Catalogs> = OnceLock::new();
    CATALOGS.get_or_init(|| Catalogs::up_to(CATALOG_LIMIT).expect("catalog dimensions are valid"))
}

/// Seed and Monte-Carlo budget shared by the checks of one run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Context {
    pub seed: u64,
    pub samples: usize,
}

impl Context {
    pub fn new(seed: u64) -> Self {
        Self {
            seed,
            samples: DEFAULT_SAMPLES,
        }
    }

    /// Independent stream for the check named `salt`; stable across runs and
    /// independent of scheduling.
    pub fn mc(&self, salt: &str) -> McConfig {
        self.mc_with(salt, self.samples)
    }

    pub fn mc_with(&self, salt: &str, samples: usize) -> McConfig {
        McConfig::new(samples, self.seed).derive(fnv1a(salt))
    }
}

fn fnv1a(s: &str) -> u64 {
    s.bytes()
        .fold(0xcbf2_9ce4_8422_2325, |h, b| (h ^ u64::from(b)).wrapping_mul(0x0100_0000_01b3))
}

/// A function argument: an existing file path, else a registry name such as
/// `majority:5` or `block-ball:2`.
pub fn resolve_function(arg: &str) -> Result<(String, BooleanFunction)> {
    let path = Path::new(arg);
    if path.is_file() {
        return Ok((arg.to_string(), table_io::load(path)?));
    }
    let b = Builtin::from_str(arg)?;
    Ok((b.to_string(), b.build()?))
}

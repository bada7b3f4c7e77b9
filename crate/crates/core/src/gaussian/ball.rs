//! Experiments on the ball of radius `sqrt(n)`: weak correlation with every
//! half-space, no preferred direction after shifting, and noise stability.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

use super::mc::{mc_measure, mc_var_pt, mean_gradient};
use super::{fill_normal, scale_of, GaussianSet};
use crate::mathx::{norm_cdf};
#[allow(unused_imports)] // std float methods shadow it when std is linked
use crate::mathx::Float;
use crate::stats::{from_batch_means, Estimate, McConfig};
use crate::{Error, Result};

/// Parameters of [`ball_experiments`].
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct BallConfig {
    pub n: usize,
    pub mc: McConfig,
    pub random_directions: usize,
    /// Offsets `b` form a uniform grid of this many points on `[-4, 4]`.
    pub offsets: usize,
    /// Shift parameter for the shifted-ball covariance.
    pub shift_t: f64,
    /// Noise parameter for `Var(P_t 1_B)`.
    pub stability_t: f64,
    /// Slack subtracted from the asymptotic stability bound.
    pub stability_slack: f64,
    /// Below this dimension the stability bound is reported, not asserted.
    pub stability_min_n: usize,
}

impl BallConfig {
    pub fn new(n: usize, mc: McConfig) -> Self {
        Self {
            n,
            mc,
            random_directions: 16,
            offsets: 41,
            shift_t: 0.5,
            stability_t: 0.05,
            stability_slack: 0.1,
            stability_min_n: 32,
        }
    }

    pub fn offset(&self, k: usize) -> f64 {
        -4.0 + 8.0 * k as f64 / (self.offsets - 1) as f64
    }
}

/// Where a candidate half-space normal came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum CandidateKind {
    Coordinate(usize),
    Random(usize),
    MeanGradient,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct BallReport {
    pub n: usize,
    pub measure: Estimate,
    /// Largest candidate covariance; the witness is `{s <u,x> <= s b}`.
    pub max_cov: Estimate,
    pub max_cov_candidate: CandidateKind,
    pub max_cov_offset: f64,
    pub max_cov_orientation: f64,
    pub cov_bound: f64,
    pub cov_pass: bool,
    /// Covariances with `{x_1 <= 1}` and `{x_2 <= 1}`.
    pub rotation: [Estimate; 2],
    pub rotation_pass: bool,
    /// `max_b E_Y Cov(g_{t,Y}, 1_{x_1 <= b})^2`.
    pub shifted_cov2: Estimate,
    pub shifted_cov2_offset: f64,
    pub shifted_cov2_bound: f64,
    pub shifted_cov2_pass: bool,
    pub stability: Estimate,
    pub stability_bound: f64,
    pub stability_asserted: bool,
    pub stability_pass: bool,
}

impl BallReport {
    pub fn pass(&self) -> bool {
        self.cov_pass && self.rotation_pass && self.shifted_cov2_pass && self.stability_pass
    }
}

/// `1/4 - arccos(e^{-2t}) / (sqrt(2) pi)`.
pub fn ball_stability_asymptote(t: f64) -> f64 {
    0.25 - (-2.0 * t).exp().acos() / (core::f64::consts::SQRT_2 * PI)
}

pub fn ball_experiments(cfg: &BallConfig) -> Result<BallReport> {
    let n = cfg.n;
    if n < 2 || cfg.offsets < 2 {
        return Err(Error::Parameter("ball experiments need n >= 2 and two offsets".into()));
    }
    let ball = GaussianSet::standard_ball(n)?;
    let measure = mc_measure(&ball, &cfg.mc.derive(10));

    // candidate normals
    let mut kinds = Vec::new();
    let mut dirs: Vec<Vec<f64>> = Vec::new();
    let mut rng = cfg.mc.derive(11).rng(0);
    for k in 0..cfg.random_directions {
        let mut u = vec![0.0; n];
        fill_normal(&mut rng, &mut u);
        normalize(&mut u);
        dirs.push(u);
        kinds.push(CandidateKind::Random(k));
    }
    let pilot = McConfig {
        samples: (cfg.mc.samples / 10).max(1000),
        ..cfg.mc.derive(12)
    };
    let mut g: Vec<f64> = mean_gradient(&ball, &pilot).iter().map(|e| e.value).collect();
    if normalize(&mut g) {
        dirs.push(g);
        kinds.push(CandidateKind::MeanGradient);
    }
    let projected = dirs.len();
    for i in 0..n {
        kinds.push(CandidateKind::Coordinate(i));
    }

    let cands = kinds.len();
    let nb = cfg.offsets;
    let phi: Vec<f64> = (0..nb).map(|k| norm_cdf(cfg.offset(k))).collect();
    let sizes = cfg.mc.batch_sizes();
    // cells[c * nb + k][batch]
    let mut cells = vec![vec![0.0; sizes.len()]; cands * nb];
    let mut x = vec![0.0; n];
    let mut hist = vec![0u32; cands * (nb + 1)];
    for (b, &size) in sizes.iter().enumerate() {
        let mut rng = cfg.mc.rng(b);
        hist.iter_mut().for_each(|h| *h = 0);
        let mut inside = 0u32;
        for _ in 0..size {
            fill_normal(&mut rng, &mut x);
            if x.iter().map(|v| v * v).sum::<f64>() > n as f64 {
                continue;
            }
            inside += 1;
            for c in 0..cands {
                let p = if c < projected {
                    dirs[c].iter().zip(&x).map(|(u, v)| u * v).sum::<f64>()
                } else {
                    x[c - projected]
                };
                hist[c * (nb + 1) + grid_slot(p, cfg)] += 1;
            }
        }
        for c in 0..cands {
            // slot j counts points first admitted at offset j
            let mut cum = 0u32;
            for k in 0..nb {
                cum += hist[c * (nb + 1) + k];
                let v = (f64::from(cum) - f64::from(inside) * phi[k]) / size as f64;
                cells[c * nb + k][b] = v;
            }
        }
    }
    let est: Vec<Estimate> = cells.iter().map(|m| from_batch_means(m, &sizes)).collect();
    let (best, _) = est
        .iter()
        .enumerate()
        .fold((0, f64::NEG_INFINITY), |acc, (i, e)| if e.value.abs() > acc.1 { (i, e.value.abs()) } else { acc });
    let orientation = if est[best].value >= 0.0 { 1.0 } else { -1.0 };
    let max_cov = Estimate {
        value: est[best].value.abs(),
        stderr: est[best].stderr,
    };
    let cov_bound = 1.0 / (n as f64).sqrt();
    let at_one = grid_index_of(1.0, cfg);
    let rotation = [est[projected * nb + at_one], est[(projected + 1) * nb + at_one]];
    let rot_slack = 3.0 * (rotation[0].stderr.powi(2) + rotation[1].stderr.powi(2)).sqrt();

    let (shifted_cov2, shifted_offset) = shifted_cov2(&ball, cfg);
    let shifted_bound = 1.0 / n as f64;

    let stability = mc_var_pt(n, |x| ball.indicator(x), cfg.stability_t, &cfg.mc.derive(13));
    let stability_bound = ball_stability_asymptote(cfg.stability_t) - cfg.stability_slack;
    let asserted = n >= cfg.stability_min_n;

    Ok(BallReport {
        n,
        measure,
        max_cov,
        max_cov_candidate: kinds[best / nb],
        max_cov_offset: cfg.offset(best % nb),
        max_cov_orientation: orientation,
        cov_bound,
        cov_pass: max_cov.value <= cov_bound + 3.0 * max_cov.stderr,
        rotation,
        rotation_pass: (rotation[0].value - rotation[1].value).abs() <= rot_slack,
        shifted_cov2,
        shifted_cov2_offset: shifted_offset,
        shifted_cov2_bound: shifted_bound,
        shifted_cov2_pass: shifted_cov2.value <= shifted_bound + 3.0 * shifted_cov2.stderr,
        stability,
        stability_bound,
        stability_asserted: asserted,
        stability_pass: !asserted || stability.value >= stability_bound - 3.0 * stability.stderr,
    })
}

fn normalize(u: &mut [f64]) -> bool {
    let norm = u.iter().map(|v| v * v).sum::<f64>().sqrt();
    if !(norm > 0.0) {
        return false;
    }
    u.iter_mut().for_each(|v| *v /= norm);
    true
}

/// Index of the first grid offset `b_k >= p`, or `offsets` if none.
fn grid_slot(p: f64, cfg: &BallConfig) -> usize {
    let step = 8.0 / (cfg.offsets - 1) as f64;
    let k = ((p + 4.0) / step).ceil();
    if k <= 0.0 {
        0
    } else if k >= cfg.offsets as f64 {
        // may still equal the last offset exactly
        if p <= 4.0 {
            cfg.offsets - 1
        } else {
            cfg.offsets
        }
    } else {
        let k = k as usize;
        // guard against rounding across a grid point
        if cfg.offset(k - 1) >= p {
            k - 1
        } else {
            k
        }
    }
}

fn grid_index_of(b: f64, cfg: &BallConfig) -> usize {
    (0..cfg.offsets)
        .min_by(|&i, &j| (cfg.offset(i) - b).abs().total_cmp(&(cfg.offset(j) - b).abs()))
        .unwrap_or(0)
}

/// `max_b E_Y Cov(g_{t,Y}, 1_{x_1 <= b})^2` with an unbiased pairwise estimate
/// of each squared covariance.
fn shifted_cov2(ball: &GaussianSet, cfg: &BallConfig) -> (Estimate, f64) {
    let n = cfg.n;
    let nb = cfg.offsets;
    let inner = ((cfg.mc.samples as f64).sqrt().ceil() as usize).max(16);
    let outer = (cfg.mc.samples / inner).max(2 * McConfig::DEFAULT_BATCHES);
    let outer_cfg = McConfig {
        samples: outer,
        ..cfg.mc.derive(14)
    };
    let phi: Vec<f64> = (0..nb).map(|k| norm_cdf(cfg.offset(k))).collect();
    let (s, d) = (scale_of(cfg.shift_t), (-cfg.shift_t).exp());

    let per_offset: Vec<Estimate> = {
        let sizes = outer_cfg.batch_sizes();
        let mut cells = vec![vec![0.0; sizes.len()]; nb];
        let (mut y, mut x, mut p) = (vec![0.0; n], vec![0.0; n], vec![0.0; n]);
        let (mut sum, mut sumsq) = (vec![0.0; nb], vec![0.0; nb]);
        let k = inner as f64;
        for (b, &size) in sizes.iter().enumerate() {
            let mut rng = outer_cfg.rng(b);
            let mut acc = vec![0.0; nb];
            for _ in 0..size {
                fill_normal(&mut rng, &mut y);
                sum.iter_mut().for_each(|v| *v = 0.0);
                sumsq.iter_mut().for_each(|v| *v = 0.0);
                for _ in 0..inner {
                    fill_normal(&mut rng, &mut x);
                    for i in 0..n {
                        p[i] = s * x[i] + d * y[i];
                    }
                    if !ball.contains(&p) {
                        continue;
                    }
                    for j in 0..nb {
                        let a = if x[0] <= cfg.offset(j) { 1.0 } else { 0.0 };
                        let v = a - phi[j];
                        sum[j] += v;
                        sumsq[j] += v * v;
                    }
                }
                for j in 0..nb {
                    acc[j] += (sum[j] * sum[j] - sumsq[j]) / (k * (k - 1.0));
                }
            }
            for j in 0..nb {
                cells[j][b] = acc[j] / size as f64;
            }
        }
        cells.iter().map(|m| from_batch_means(m, &sizes)).collect()
    };
    let (j, best) = per_offset
        .iter()
        .enumerate()
        .fold((0, per_offset[0]), |acc, (j, e)| if e.value > acc.1.value { (j, *e) } else { acc });
    (best, cfg.offset(j))
}

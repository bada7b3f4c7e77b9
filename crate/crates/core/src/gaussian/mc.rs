//! Monte Carlo estimators over correlated Gaussian pairs.

use alloc::vec;
use alloc::vec::Vec;

use super::closed::{halfspace_stability_closed, halfspace_var_pt};
use super::{fill_normal, ou_step, scale_of, GaussianSet};
#[allow(unused_imports)] // std float methods shadow it when std is linked
use crate::mathx::{norm_cdf, Float};
use crate::stats::{from_batch_means, mean_of, run_batches, Estimate, McConfig};
use crate::{Error, Result};

/// `E[1_S(X) 1_S(e^{-t} X + sqrt(1 - e^{-2t}) X')]`.
pub fn mc_noise_stability(set: &GaussianSet, t: f64, cfg: &McConfig) -> Result<Estimate> {
    if !(t >= 0.0) {
        return Err(Error::Parameter(alloc::format!("t must be >= 0, got {t}")));
    }
    let n = set.n();
    let (mut x, mut fresh, mut y) = (vec![0.0; n], vec![0.0; n], vec![0.0; n]);
    Ok(mean_of(cfg, |rng| {
        fill_normal(rng, &mut x);
        if !set.contains(&x) {
            // keep the stream layout independent of membership
            fill_normal(rng, &mut fresh);
            return 0.0;
        }
        fill_normal(rng, &mut fresh);
        ou_step(&x, &fresh, t, &mut y);
        set.indicator(&y)
    }))
}

/// `Var(P_t f) = E[f(X) f(X_rho)] - E f(U) E f(V)` with `rho = e^{-2t}`,
/// estimated from the unbiased per-sample difference.
pub fn mc_var_pt(n: usize, f: impl Fn(&[f64]) -> f64, t: f64, cfg: &McConfig) -> Estimate {
    let (mut x, mut fresh, mut y) = (vec![0.0; n], vec![0.0; n], vec![0.0; n]);
    let (mut u, mut v) = (vec![0.0; n], vec![0.0; n]);
    mean_of(cfg, |rng| {
        fill_normal(rng, &mut x);
        fill_normal(rng, &mut fresh);
        fill_normal(rng, &mut u);
        fill_normal(rng, &mut v);
        ou_step(&x, &fresh, 2.0 * t, &mut y);
        f(&x) * f(&y) - f(&u) * f(&v)
    })
}

/// `w1(f) = sum_i E[X_i f(X)]^2` from the unbiased pairwise form
/// `sum_i (S_i^2 - Q_i) / (N (N - 1))`. The error bar combines the
/// linearized batch spread with the second-order term `2 sum_i s_i^4 / N^2`.
pub fn estimate_w1(n: usize, f: impl Fn(&[f64]) -> f64, cfg: &McConfig) -> Estimate {
    let sizes = cfg.batch_sizes();
    let total: usize = sizes.iter().sum();
    let mut batch_means: Vec<Vec<f64>> = Vec::with_capacity(sizes.len());
    let mut sum = vec![0.0; n];
    let mut sumsq = vec![0.0; n];
    let mut x = vec![0.0; n];
    for (b, &size) in sizes.iter().enumerate() {
        let mut rng = cfg.rng(b);
        let mut local = vec![0.0; n];
        for _ in 0..size {
            fill_normal(&mut rng, &mut x);
            let fx = f(&x);
            if fx == 0.0 {
                continue;
            }
            for i in 0..n {
                let v = x[i] * fx;
                local[i] += v;
                sumsq[i] += v * v;
            }
        }
        for i in 0..n {
            sum[i] += local[i];
            local[i] /= size as f64;
        }
        batch_means.push(local);
    }
    let nf = total as f64;
    let mean: Vec<f64> = sum.iter().map(|s| s / nf).collect();
    let value: f64 = (0..n)
        .map(|i| (sum[i] * sum[i] - sumsq[i]) / (nf * (nf - 1.0)))
        .sum();
    let linear: Vec<f64> = batch_means
        .iter()
        .map(|m| m.iter().zip(&mean).map(|(a, b)| 2.0 * a * b).sum())
        .collect();
    let lin = from_batch_means(&linear, &sizes).stderr;
    let second: f64 = (0..n)
        .map(|i| {
            let var = sumsq[i] / nf - mean[i] * mean[i];
            2.0 * var * var / (nf * nf)
        })
        .sum();
    Estimate {
        value,
        stderr: (lin * lin + second).sqrt(),
    }
}

/// [`estimate_w1`] for `1_S`.
pub fn estimate_w1_gaussian(set: &GaussianSet, cfg: &McConfig) -> Estimate {
    estimate_w1(set.n(), |x| set.indicator(x), cfg)
}

/// Both sides of `E_Y w1(f_{t,Y}) >= (e^{2t} - 1) Var(P_t f)`.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ExpW1Report {
    pub t: f64,
    pub lhs: Estimate,
    /// Right side including the factor `e^{2t} - 1`.
    pub rhs: Estimate,
    pub rhs_closed_form: bool,
    pub outer_samples: usize,
    pub inner_samples: usize,
    pub pass: bool,
}

/// Nested estimate of `E_Y w1(f_{t,Y})` (outer `Y`, inner pairwise `w1`
/// estimate) against `(e^{2t} - 1) Var(P_t f)`, closed form for half-spaces.
/// `cfg.samples` is the total number of inner evaluations.
pub fn check_exp_w1(set: &GaussianSet, t: f64, cfg: &McConfig) -> Result<ExpW1Report> {
    if !(t > 0.0) || !t.is_finite() {
        return Err(Error::Parameter(alloc::format!("t must be finite and > 0, got {t}")));
    }
    let n = set.n();
    let inner = ((cfg.samples as f64).sqrt().ceil() as usize).max(16);
    let outer = (cfg.samples / inner).max(2 * McConfig::DEFAULT_BATCHES);
    let outer_cfg = McConfig { samples: outer, ..*cfg };
    let (s, d) = (scale_of(t), (-t).exp());

    let (mut y, mut x, mut p) = (vec![0.0; n], vec![0.0; n], vec![0.0; n]);
    let (mut sum, mut sumsq) = (vec![0.0; n], vec![0.0; n]);
    let lhs = mean_of(&outer_cfg, |rng| {
        fill_normal(rng, &mut y);
        sum.iter_mut().for_each(|v| *v = 0.0);
        sumsq.iter_mut().for_each(|v| *v = 0.0);
        for _ in 0..inner {
            fill_normal(rng, &mut x);
            for i in 0..n {
                p[i] = s * x[i] + d * y[i];
            }
            if set.contains(&p) {
                for i in 0..n {
                    sum[i] += x[i];
                    sumsq[i] += x[i] * x[i];
                }
            }
        }
        let k = inner as f64;
        (0..n).map(|i| (sum[i] * sum[i] - sumsq[i]) / (k * (k - 1.0))).sum()
    });

    let factor = (2.0 * t).exp_m1();
    let (var, closed) = match set {
        GaussianSet::HalfSpace { b, .. } => (Estimate::exact(halfspace_var_pt(*b, t)), true),
        _ => (mc_var_pt(n, |x| set.indicator(x), t, &cfg.derive(1)), false),
    };
    let rhs = Estimate {
        value: factor * var.value,
        stderr: factor * var.stderr,
    };
    let slack = 3.0 * (lhs.stderr.powi(2) + rhs.stderr.powi(2)).sqrt();
    Ok(ExpW1Report {
        t,
        lhs,
        rhs,
        rhs_closed_form: closed,
        outer_samples: outer,
        inner_samples: inner,
        pass: lhs.value >= rhs.value - slack,
    })
}

/// `r` with `e^{-2r} = e^{-2s} + e^{-2t} - e^{-2s-2t}`.
pub fn converse_r(s: f64, t: f64) -> f64 {
    let (a, b) = ((-2.0 * s).exp(), (-2.0 * t).exp());
    -0.5 * (a + b - a * b).ln()
}

/// Both sides of `E_Y E[f_{s,Y} P_{2t} f_{s,Y}] = E[f P_{2r} f]`.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ConverseIdentity {
    pub s: f64,
    pub t: f64,
    pub r: f64,
    pub lhs: Estimate,
    pub rhs: Estimate,
    pub pass: bool,
}

/// Checks the semigroup identity behind the Gaussian converse. Half-spaces use
/// the closed form on both sides with a one-dimensional outer average over
/// `<a,Y>`; other sets use paired Monte Carlo on both sides.
pub fn check_converse_identity(set: &GaussianSet, s: f64, t: f64, cfg: &McConfig) -> Result<ConverseIdentity> {
    if !(s > 0.0 && t > 0.0) {
        return Err(Error::Parameter("s and t must be > 0".into()));
    }
    let r = converse_r(s, t);
    let (sc, d) = (scale_of(s), (-s).exp());
    let (lhs, rhs) = match set {
        GaussianSet::HalfSpace { b, .. } => {
            let b = *b;
            let lhs = mean_of(cfg, |rng| {
                let mut y = [0.0];
                fill_normal(rng, &mut y);
                halfspace_stability_closed((b - d * y[0]) / sc, 2.0 * t)
            });
            (lhs, Estimate::exact(halfspace_stability_closed(b, 2.0 * r)))
        }
        _ => {
            let n = set.n();
            let (mut y, mut x, mut fresh, mut z) = (vec![0.0; n], vec![0.0; n], vec![0.0; n], vec![0.0; n]);
            let mut p = vec![0.0; n];
            let lhs = mean_of(cfg, |rng| {
                fill_normal(rng, &mut y);
                fill_normal(rng, &mut x);
                fill_normal(rng, &mut fresh);
                ou_step(&x, &fresh, 2.0 * t, &mut z);
                for i in 0..n {
                    p[i] = sc * x[i] + d * y[i];
                }
                if !set.contains(&p) {
                    return 0.0;
                }
                for i in 0..n {
                    p[i] = sc * z[i] + d * y[i];
                }
                set.indicator(&p)
            });
            let rhs = mc_noise_stability(set, 2.0 * r, &cfg.derive(2))?;
            (lhs, rhs)
        }
    };
    let slack = 3.0 * (lhs.stderr.powi(2) + rhs.stderr.powi(2)).sqrt();
    Ok(ConverseIdentity {
        s,
        t,
        r,
        lhs,
        rhs,
        pass: (lhs.value - rhs.value).abs() <= slack,
    })
}

/// `E_Y M(f_{s,Y})^2` for the shifted set.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ShiftedM2 {
    pub value: Estimate,
    /// `true` when each `M(f_{s,y})` is exact (half-spaces, where the best
    /// half-space is the set itself and `M = p(1 - p)`); otherwise `M` is the
    /// best covariance over half-spaces normal to the ball's center, offsets on
    /// a 41-point grid in `[-4, 4]`, from an inner sample.
    pub exact_m: bool,
}

/// `E_Y M^2(f_{s,Y})` for a half-space (one-dimensional outer average) or a
/// ball (nested sampling with `cfg.samples` inner evaluations in total).
pub fn expected_shifted_m2(set: &GaussianSet, s: f64, cfg: &McConfig) -> Result<ShiftedM2> {
    if !(s > 0.0) {
        return Err(Error::Parameter(alloc::format!("s must be > 0, got {s}")));
    }
    let (sc, d) = (scale_of(s), (-s).exp());
    match set {
        GaussianSet::HalfSpace { b, .. } => {
            let b = *b;
            let value = mean_of(cfg, |rng| {
                let mut y = [0.0];
                fill_normal(rng, &mut y);
                let p = norm_cdf((b - d * y[0]) / sc);
                (p * (1.0 - p)).powi(2)
            });
            Ok(ShiftedM2 { value, exact_m: true })
        }
        GaussianSet::Ball { center, radius } => {
            let n = center.len();
            let inner = ((cfg.samples as f64).sqrt().ceil() as usize).max(16);
            let outer = (cfg.samples / inner).max(2 * McConfig::DEFAULT_BATCHES);
            let outer_cfg = McConfig { samples: outer, ..*cfg };
            let offsets: Vec<f64> = (0..41).map(|k| -4.0 + 0.2 * k as f64).collect();
            let phi: Vec<f64> = offsets.iter().map(|&b| norm_cdf(b)).collect();
            let (mut y, mut x) = (vec![0.0; n], vec![0.0; n]);
            let mut acc = vec![0.0; offsets.len()];
            let value = mean_of(&outer_cfg, |rng| {
                fill_normal(rng, &mut y);
                // shifted ball: center (c - d y) / sc, radius r / sc
                let c: Vec<f64> = center.iter().zip(&y).map(|(c, y)| (c - d * y) / sc).collect();
                let r2 = (radius / sc).powi(2);
                let norm = c.iter().map(|v| v * v).sum::<f64>().sqrt();
                let u: Vec<f64> = if norm > 0.0 {
                    c.iter().map(|v| v / norm).collect()
                } else {
                    let mut e = vec![0.0; n];
                    e[0] = 1.0;
                    e
                };
                acc.iter_mut().for_each(|v| *v = 0.0);
                for _ in 0..inner {
                    fill_normal(rng, &mut x);
                    let q: f64 = x.iter().zip(&c).map(|(x, c)| (x - c) * (x - c)).sum();
                    if q > r2 {
                        continue;
                    }
                    let p: f64 = u.iter().zip(&x).map(|(u, x)| u * x).sum();
                    for (k, &b) in offsets.iter().enumerate() {
                        acc[k] += if p <= b { 1.0 - phi[k] } else { -phi[k] };
                    }
                }
                let m = acc.iter().map(|v| v.abs() / inner as f64).fold(0.0, f64::max);
                m * m
            });
            Ok(ShiftedM2 { value, exact_m: false })
        }
        _ => Err(Error::Parameter("shifted M is available for half-spaces and balls".into())),
    }
}

/// `gamma(S)` by plain sampling.
pub(crate) fn mc_measure(set: &GaussianSet, cfg: &McConfig) -> Estimate {
    if let Some(m) = set.measure_closed() {
        return Estimate::exact(m);
    }
    let mut x = vec![0.0; set.n()];
    mean_of(cfg, |rng| {
        fill_normal(rng, &mut x);
        set.indicator(&x)
    })
}

/// Per-batch estimates of `E[X 1_S(X)]`, one entry per coordinate.
pub(crate) fn mean_gradient(set: &GaussianSet, cfg: &McConfig) -> Vec<Estimate> {
    let n = set.n();
    let mut x = vec![0.0; n];
    run_batches(cfg, n, |rng, size, out| {
        for _ in 0..size {
            fill_normal(rng, &mut x);
            if set.contains(&x) {
                for (o, v) in out.iter_mut().zip(&x) {
                    *o += v;
                }
            }
        }
        out.iter_mut().for_each(|o| *o /= size as f64);
    })
}

//! Closed forms for half-spaces `{x_1 <= b}` under the Ornstein-Uhlenbeck
//! semigroup.

use core::f64::consts::PI;

use crate::mathx::{norm_cdf, norm_pdf};
#[allow(unused_imports)] // std float methods shadow it when std is linked
use crate::mathx::Float;

/// Absolute tolerance of [`integrate`].
pub const QUAD_TOL: f64 = 1e-10;

/// Integration cutoff in standard deviations.
pub const CUTOFF: f64 = 8.5;

const MAX_DEPTH: u32 = 48;

/// Adaptive Simpson quadrature of `g` over `[lo, hi]` to absolute error `tol`.
pub fn integrate(g: impl Fn(f64) -> f64, lo: f64, hi: f64, tol: f64) -> f64 {
    if hi <= lo {
        return 0.0;
    }
    let mid = 0.5 * (lo + hi);
    let (glo, gmid, ghi) = (g(lo), g(mid), g(hi));
    let whole = (hi - lo) / 6.0 * (glo + 4.0 * gmid + ghi);
    simpson(&g, lo, hi, glo, gmid, ghi, whole, tol, MAX_DEPTH)
}

#[allow(clippy::too_many_arguments)]
fn simpson(
    g: &impl Fn(f64) -> f64,
    lo: f64,
    hi: f64,
    glo: f64,
    gmid: f64,
    ghi: f64,
    whole: f64,
    tol: f64,
    depth: u32,
) -> f64 {
    let mid = 0.5 * (lo + hi);
    let (lm, rm) = (0.5 * (lo + mid), 0.5 * (mid + hi));
    let (glm, grm) = (g(lm), g(rm));
    let left = (mid - lo) / 6.0 * (glo + 4.0 * glm + gmid);
    let right = (hi - mid) / 6.0 * (gmid + 4.0 * grm + ghi);
    let diff = left + right - whole;
    if depth == 0 || diff.abs() <= 15.0 * tol {
        return left + right + diff / 15.0;
    }
    simpson(g, lo, mid, glo, glm, gmid, left, 0.5 * tol, depth - 1)
        + simpson(g, mid, hi, gmid, grm, ghi, right, 0.5 * tol, depth - 1)
}

/// `Pr(X <= b, e^{-t} X + sqrt(1 - e^{-2t}) X' <= b)` for independent standard
/// normals, i.e. `E[1_A P_t 1_A]` for `A = {x_1 <= b}`.
pub fn halfspace_stability_closed(b: f64, t: f64) -> f64 {
    assert!(t >= 0.0, "t must be nonnegative");
    let rho = (-t).exp();
    let sigma = (-(-2.0 * t).exp_m1()).sqrt();
    if sigma == 0.0 {
        return norm_cdf(b);
    }
    if rho == 0.0 {
        return norm_cdf(b) * norm_cdf(b);
    }
    if b < -CUTOFF {
        return 0.0;
    }
    integrate(
        |x| norm_pdf(x) * norm_cdf((b - rho * x) / sigma),
        -CUTOFF,
        b,
        QUAD_TOL,
    )
}

/// Sheppard's quadrant probability `1/4 + arcsin(e^{-t}) / (2 pi)`.
pub fn quadrant_probability(t: f64) -> f64 {
    0.25 + (-t).exp().asin() / (2.0 * PI)
}

/// `gamma(A) - E[1_A P_t 1_A] = E[(1 - 1_A) P_t 1_A]`.
pub fn ledoux_gap(b: f64, t: f64) -> f64 {
    norm_cdf(b) - halfspace_stability_closed(b, t)
}

/// `arccos(e^{-t}) / (2 pi)`.
pub fn ledoux_bound(t: f64) -> f64 {
    (-t).exp().acos() / (2.0 * PI)
}

/// `E[(1_A - P_t 1_A)^2] = gamma(A) - 2 E[1_A P_t 1_A] + E[1_A P_{2t} 1_A]`.
pub fn halfspace_l2_closed(b: f64, t: f64) -> f64 {
    norm_cdf(b) - 2.0 * halfspace_stability_closed(b, t) + halfspace_stability_closed(b, 2.0 * t)
}

/// `Var(P_t 1_A) = E[1_A P_{2t} 1_A] - gamma(A)^2`.
pub fn halfspace_var_pt(b: f64, t: f64) -> f64 {
    halfspace_stability_closed(b, 2.0 * t) - norm_cdf(b) * norm_cdf(b)
}

/// `w1(1_A) = phi(b)^2` for a unit-normal half-space.
pub fn halfspace_w1(b: f64) -> f64 {
    norm_pdf(b) * norm_pdf(b)
}

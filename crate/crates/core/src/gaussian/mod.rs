//! Sets in Gaussian space, the shift/scale restriction `f_{t,y}` and Monte
//! Carlo estimators under the Ornstein-Uhlenbeck semigroup.

mod ball;
pub mod closed;
mod mc;

use alloc::boxed::Box;
use alloc::format;
use alloc::vec::Vec;

use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::fourier::BooleanFunction;
use crate::mathx::{norm_cdf};
#[allow(unused_imports)] // std float methods shadow it when std is linked
use crate::mathx::Float;
use crate::{Error, Result};

pub use ball::{ball_experiments, BallConfig, BallReport, CandidateKind};
pub use closed::{
    halfspace_l2_closed, halfspace_stability_closed, halfspace_var_pt, halfspace_w1, ledoux_bound,
    ledoux_gap, quadrant_probability,
};
pub use mc::{
    check_converse_identity, check_exp_w1, converse_r, estimate_w1, estimate_w1_gaussian,
    expected_shifted_m2, mc_noise_stability, mc_var_pt, ConverseIdentity, ExpW1Report, ShiftedM2,
};

pub use crate::stats::{Estimate, McConfig};

/// A measurable subset of `R^n` given by its membership rule.
#[derive(Debug, Clone, PartialEq)]
pub enum GaussianSet {
    /// `{x : <a,x> <= b}` with `||a||_2 = 1`.
    HalfSpace { a: Vec<f64>, b: f64 },
    /// `{x : |x - center| <= radius}`.
    Ball { center: Vec<f64>, radius: f64 },
    /// `{x : sum_i (|J_i|^{-1/2} sum_{j in J_i} x_j)^2 <= threshold}` for
    /// consecutive blocks `J_i` of the given sizes.
    BlockQuadratic { blocks: Vec<usize>, threshold: f64 },
    /// `{x : f(sign x) = 1}` with `sign 0 = +1`.
    LiftedBoolean(BooleanFunction),
    /// `{x : scale x + shift in base}`.
    Affine {
        base: Box<GaussianSet>,
        scale: f64,
        shift: Vec<f64>,
    },
}

impl GaussianSet {
    pub fn halfspace(a: Vec<f64>, b: f64) -> Result<Self> {
        let norm = a.iter().map(|v| v * v).sum::<f64>().sqrt();
        if a.is_empty() || !(norm > 0.0) || !norm.is_finite() || !b.is_finite() {
            return Err(Error::Parameter("half-space needs a finite nonzero normal".into()));
        }
        Ok(Self::HalfSpace {
            a: a.iter().map(|v| v / norm).collect(),
            b: b / norm,
        })
    }

    /// `{x : x_i <= b}`.
    pub fn coordinate_halfspace(n: usize, i: usize, b: f64) -> Result<Self> {
        if i >= n {
            return Err(Error::Parameter(format!("coordinate {i} out of range for n = {n}")));
        }
        let mut a = alloc::vec![0.0; n];
        a[i] = 1.0;
        Self::halfspace(a, b)
    }

    pub fn ball(center: Vec<f64>, radius: f64) -> Result<Self> {
        if center.is_empty() || !(radius >= 0.0) || center.iter().any(|v| !v.is_finite()) {
            return Err(Error::Parameter("ball needs a finite center and radius >= 0".into()));
        }
        Ok(Self::Ball { center, radius })
    }

    /// The ball of radius `sqrt(n)` about the origin.
    pub fn standard_ball(n: usize) -> Result<Self> {
        Self::ball(alloc::vec![0.0; n], (n as f64).sqrt())
    }

    pub fn block_quadratic(blocks: Vec<usize>, threshold: f64) -> Result<Self> {
        if blocks.is_empty() || blocks.contains(&0) {
            return Err(Error::Parameter("blocks must be nonempty".into()));
        }
        Ok(Self::BlockQuadratic { blocks, threshold })
    }

    /// Gaussian analogue of the block ball: `m` blocks of size `m`, threshold `m`.
    pub fn gaussian_block_ball(m: usize) -> Result<Self> {
        Self::block_quadratic(alloc::vec![m; m], m as f64)
    }

    pub fn lifted(f: BooleanFunction) -> Result<Self> {
        if !f.is_zero_one() {
            return Err(Error::NotIndicator);
        }
        Ok(Self::LiftedBoolean(f))
    }

    pub fn n(&self) -> usize {
        match self {
            Self::HalfSpace { a, .. } => a.len(),
            Self::Ball { center, .. } => center.len(),
            Self::BlockQuadratic { blocks, .. } => blocks.iter().sum(),
            Self::LiftedBoolean(f) => f.n(),
            Self::Affine { shift, .. } => shift.len(),
        }
    }

    /// Short name of the kind, ignoring affine wrapping.
    pub fn kind_name(&self) -> &'static str {
        match self {
            Self::HalfSpace { .. } => "halfspace",
            Self::Ball { .. } => "ball",
            Self::BlockQuadratic { .. } => "block_quadratic",
            Self::LiftedBoolean(_) => "lifted_boolean",
            Self::Affine { base, .. } => base.kind_name(),
        }
    }

    pub fn contains(&self, x: &[f64]) -> bool {
        match self {
            Self::HalfSpace { a, b } => a.iter().zip(x).map(|(a, x)| a * x).sum::<f64>() <= *b,
            Self::Ball { center, radius } => {
                center.iter().zip(x).map(|(c, x)| (x - c) * (x - c)).sum::<f64>() <= radius * radius
            }
            Self::BlockQuadratic { blocks, threshold } => {
                let mut start = 0;
                let mut q = 0.0;
                for &len in blocks {
                    let s: f64 = x[start..start + len].iter().sum();
                    q += s * s / len as f64;
                    start += len;
                }
                q <= *threshold
            }
            Self::LiftedBoolean(f) => {
                let idx = x
                    .iter()
                    .enumerate()
                    .fold(0usize, |acc, (i, &v)| acc | (usize::from(v < 0.0) << i));
                f.at(idx) == 1.0
            }
            Self::Affine { base, scale, shift } => {
                let y: Vec<f64> = x.iter().zip(shift).map(|(x, s)| scale * x + s).collect();
                base.contains(&y)
            }
        }
    }

    /// `1_S(x)`.
    pub fn indicator(&self, x: &[f64]) -> f64 {
        if self.contains(x) {
            1.0
        } else {
            0.0
        }
    }

    /// `gamma_n(S)` when a closed form is known.
    pub fn measure_closed(&self) -> Option<f64> {
        match self {
            Self::HalfSpace { b, .. } => Some(norm_cdf(*b)),
            _ => None,
        }
    }
}

/// `f_{t,y}(x) = f(sqrt(1 - e^{-2t}) x + e^{-t} y)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ShiftScale {
    t: f64,
    y: Vec<f64>,
}

impl ShiftScale {
    /// `t > 0`; `t = inf` is the identity.
    pub fn new(t: f64, y: Vec<f64>) -> Result<Self> {
        if !(t > 0.0) {
            return Err(Error::Parameter(format!("shift/scale needs t > 0, got {t}")));
        }
        Ok(Self { t, y })
    }

    pub fn t(&self) -> f64 {
        self.t
    }

    pub fn y(&self) -> &[f64] {
        &self.y
    }

    /// `sqrt(1 - e^{-2t})`.
    pub fn scale(&self) -> f64 {
        scale_of(self.t)
    }

    /// `e^{-t}`.
    pub fn decay(&self) -> f64 {
        (-self.t).exp()
    }

    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        let (s, d) = (self.scale(), self.decay());
        x.iter().zip(&self.y).map(|(x, y)| s * x + d * y).collect()
    }
}

pub(crate) fn scale_of(t: f64) -> f64 {
    (-(-2.0 * t).exp_m1()).sqrt()
}

/// The set `{x : sqrt(1 - e^{-2t}) x + e^{-t} y in S}`. Half-spaces and balls
/// keep their kind; other sets are wrapped in [`GaussianSet::Affine`].
pub fn shift_scale(set: &GaussianSet, ss: &ShiftScale) -> Result<GaussianSet> {
    if set.n() != ss.y.len() {
        return Err(Error::DimensionMismatch {
            left: set.n(),
            right: ss.y.len(),
        });
    }
    let (s, d) = (ss.scale(), ss.decay());
    Ok(match set {
        GaussianSet::HalfSpace { a, b } => {
            let ay: f64 = a.iter().zip(&ss.y).map(|(a, y)| a * y).sum();
            GaussianSet::HalfSpace {
                a: a.clone(),
                b: (b - d * ay) / s,
            }
        }
        GaussianSet::Ball { center, radius } => GaussianSet::Ball {
            center: center.iter().zip(&ss.y).map(|(c, y)| (c - d * y) / s).collect(),
            radius: radius / s,
        },
        GaussianSet::Affine { base, scale, shift } => GaussianSet::Affine {
            base: base.clone(),
            scale: scale * s,
            shift: shift.iter().zip(&ss.y).map(|(h, y)| h + scale * d * y).collect(),
        },
        other => GaussianSet::Affine {
            base: Box::new(other.clone()),
            scale: s,
            shift: ss.y.iter().map(|y| d * y).collect(),
        },
    })
}

/// Fills `x` with independent standard normals.
pub(crate) fn fill_normal<R: Rng + ?Sized>(rng: &mut R, x: &mut [f64]) {
    for v in x.iter_mut() {
        *v = StandardNormal.sample(rng);
    }
}

/// `e^{-t} x + sqrt(1 - e^{-2t}) x'` written into `out`.
pub(crate) fn ou_step(x: &[f64], fresh: &[f64], t: f64, out: &mut [f64]) {
    let (rho, sigma) = ((-t).exp(), scale_of(t));
    for ((o, a), b) in out.iter_mut().zip(x).zip(fresh) {
        *o = rho * a + sigma * b;
    }
}

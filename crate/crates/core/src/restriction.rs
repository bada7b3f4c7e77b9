//! Restrictions `z in {-1,0,+1}^n`, the product law `mu_t`, and expectations
//! over random restrictions.
//!
//! A restricted function keeps its ambient dimension: `f_z(x) = f(z ⊘ x)`,
//! where `(z ⊘ x)_i = x_i` if `z_i = 0` and `z_i` otherwise.

use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use rand::Rng;

use crate::fourier::{check_dim, wht, BooleanFunction, FourierSpectrum};
#[allow(unused_imports)] // std float methods shadow it when std is linked
use crate::mathx::Float;
use crate::stats::{run_batches, Estimate, McConfig};
use crate::{Error, Result};

/// Exact enumeration over all `3^n` restrictions is allowed up to this `n`.
pub const EXACT_LIMIT: usize = 10;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Restriction {
    z: Vec<i8>,
}

impl Restriction {
    pub fn new(z: Vec<i8>) -> Result<Self> {
        check_dim(z.len())?;
        if let Some(bad) = z.iter().find(|v| !(-1..=1).contains(*v)) {
            return Err(Error::Parameter(alloc::format!("restriction entry {bad} not in {{-1,0,1}}")));
        }
        Ok(Self { z })
    }

    /// The empty restriction (every coordinate free).
    pub fn free(n: usize) -> Self {
        Self { z: alloc::vec![0; n] }
    }

    pub fn n(&self) -> usize {
        self.z.len()
    }

    pub fn entries(&self) -> &[i8] {
        &self.z
    }

    pub fn get(&self, i: usize) -> i8 {
        self.z[i]
    }

    /// Mask of free (zero) coordinates.
    pub fn free_mask(&self) -> u32 {
        self.mask_of(0)
    }

    /// Mask of coordinates fixed to `-1`; these are the set bits of `z ⊘ x`
    /// outside the free mask.
    pub fn negative_mask(&self) -> u32 {
        self.mask_of(-1)
    }

    fn mask_of(&self, v: i8) -> u32 {
        self.z
            .iter()
            .enumerate()
            .filter(|(_, &zi)| zi == v)
            .fold(0, |m, (i, _)| m | 1 << i)
    }

    pub fn free_count(&self) -> usize {
        self.z.iter().filter(|&&v| v == 0).count()
    }

    /// Table index of `z ⊘ x` for the point at `idx`.
    #[inline]
    pub fn substitute(&self, idx: usize) -> usize {
        (idx & self.free_mask() as usize) | self.negative_mask() as usize
    }

    /// Entries of `self` win; `other` only fills coordinates `self` leaves free.
    pub fn merge(&self, other: &Restriction) -> Result<Restriction> {
        if self.n() != other.n() {
            return Err(Error::DimensionMismatch {
                left: self.n(),
                right: other.n(),
            });
        }
        Ok(Restriction {
            z: self
                .z
                .iter()
                .zip(&other.z)
                .map(|(&a, &b)| if a != 0 { a } else { b })
                .collect(),
        })
    }
}

impl fmt::Display for Restriction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &v in &self.z {
            f.write_str(match v {
                -1 => "-",
                0 => "0",
                _ => "+",
            })?;
        }
        Ok(())
    }
}

impl FromStr for Restriction {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let z = s
            .chars()
            .map(|c| match c {
                '-' => Ok(-1),
                '0' => Ok(0),
                '+' => Ok(1),
                other => Err(Error::Parse(alloc::format!("bad restriction symbol {other:?} in {s:?}"))),
            })
            .collect::<Result<Vec<i8>>>()?;
        Restriction::new(z)
    }
}

/// The product law `mu_t`: each coordinate is `0` with probability `e^{-t}`
/// and `±1` with probability `(1 - e^{-t})/2` each.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RestrictionLaw {
    t: f64,
}

impl RestrictionLaw {
    /// `t` may be `+inf` (every coordinate fixed).
    pub fn new(t: f64) -> Result<Self> {
        if t >= 0.0 {
            Ok(Self { t })
        } else {
            Err(Error::Parameter(alloc::format!("restriction time must be >= 0, got {t}")))
        }
    }

    pub fn t(&self) -> f64 {
        self.t
    }

    pub fn zero_prob(&self) -> f64 {
        (-self.t).exp()
    }

    pub fn fixed_prob(&self) -> f64 {
        0.5 * (1.0 - self.zero_prob())
    }

    /// `mu_t(z)`.
    pub fn weight(&self, z: &Restriction) -> f64 {
        let free = z.free_count() as i32;
        self.zero_prob().powi(free) * self.fixed_prob().powi(z.n() as i32 - free)
    }
}

/// `f_z`, same ambient dimension.
pub fn apply_restriction(f: &BooleanFunction, z: &Restriction) -> Result<BooleanFunction> {
    if f.n() != z.n() {
        return Err(Error::DimensionMismatch {
            left: f.n(),
            right: z.n(),
        });
    }
    let free = z.free_mask() as usize;
    let neg = z.negative_mask() as usize;
    BooleanFunction::from_index_fn(f.n(), f.range(), |idx| f.at((idx & free) | neg))
}

/// One draw from `mu_t^{⊗n}`.
pub fn sample_restriction<R: Rng + ?Sized>(law: &RestrictionLaw, n: usize, rng: &mut R) -> Restriction {
    let p0 = law.zero_prob();
    let z = (0..n)
        .map(|_| {
            if rng.random::<f64>() < p0 {
                0
            } else if rng.random::<bool>() {
                1
            } else {
                -1
            }
        })
        .collect();
    Restriction { z }
}

/// Seeded form of [`sample_restriction`].
pub fn sample_restriction_seeded(law: &RestrictionLaw, n: usize, seed: u64) -> Restriction {
    sample_restriction(law, n, &mut McConfig::new(1, seed).rng(0))
}

/// Calls `visit(z, mu_t(z))` for all `3^n` restrictions.
pub fn for_each_restriction(n: usize, law: &RestrictionLaw, mut visit: impl FnMut(&Restriction, f64)) {
    let mut z = Restriction::free(n);
    let p0 = law.zero_prob();
    let p1 = law.fixed_prob();
    loop {
        let free = z.free_count() as i32;
        let w = p0.powi(free) * p1.powi(n as i32 - free);
        visit(&z, w);
        // base-3 odometer over 0, +1, -1
        let mut i = 0;
        loop {
            if i == n {
                return;
            }
            z.z[i] = match z.z[i] {
                0 => 1,
                1 => -1,
                _ => 0,
            };
            if z.z[i] != 0 {
                break;
            }
            i += 1;
        }
    }
}

/// How [`restriction_expectation`] evaluates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ExpectationMode {
    /// Weighted sum over all `3^n` restrictions; `n <= 10`.
    Exact,
    Sampled(McConfig),
}

/// `E_{Z ~ mu_t} stat(f_Z)`.
pub fn restriction_expectation<S>(
    f: &BooleanFunction,
    law: &RestrictionLaw,
    mode: ExpectationMode,
    mut stat: S,
) -> Result<Estimate>
where
    S: FnMut(&BooleanFunction) -> f64,
{
    match mode {
        ExpectationMode::Exact => {
            if f.n() > EXACT_LIMIT {
                return Err(Error::TooLargeForExact {
                    n: f.n(),
                    limit: EXACT_LIMIT,
                });
            }
            let mut acc = 0.0;
            let mut err = None;
            for_each_restriction(f.n(), law, |z, w| match apply_restriction(f, z) {
                Ok(fz) => acc += w * stat(&fz),
                Err(e) => err = Some(e),
            });
            match err {
                Some(e) => Err(e),
                None => Ok(Estimate::exact(acc)),
            }
        }
        ExpectationMode::Sampled(cfg) => {
            let n = f.n();
            let est = run_batches(&cfg, 1, |rng, size, out| {
                let mut acc = 0.0;
                for _ in 0..size {
                    let z = sample_restriction(law, n, rng);
                    let fz = apply_restriction(f, &z).expect("dimensions agree");
                    acc += stat(&fz);
                }
                out[0] = acc / size as f64;
            });
            Ok(est[0])
        }
    }
}

/// `f_z^(i)` computed from the spectrum of `f`: zero when `z_i != 0`, else
/// `sum_{S ∋ i} f^(S) prod_{j in S\{i}} z_j`.
pub fn restricted_level1_from_spectrum(spec: &FourierSpectrum, z: &Restriction, i: usize) -> f64 {
    if z.get(i) != 0 {
        return 0.0;
    }
    let free = z.free_mask() as usize;
    let neg = z.negative_mask() as usize;
    let bit = 1usize << i;
    spec.coeffs()
        .iter()
        .enumerate()
        .filter(|(s, _)| s & bit != 0 && (s & !bit) & free == 0)
        .map(|(s, c)| if (s & neg).count_ones() & 1 == 0 { *c } else { -*c })
        .sum()
}

/// `f_z^(i)`.
pub fn restricted_level1_coeff(f: &BooleanFunction, z: &Restriction, i: usize) -> Result<f64> {
    if f.n() != z.n() {
        return Err(Error::DimensionMismatch {
            left: f.n(),
            right: z.n(),
        });
    }
    if i >= f.n() {
        return Err(Error::Parameter(alloc::format!("coordinate {i} out of range for n = {}", f.n())));
    }
    Ok(restricted_level1_from_spectrum(&wht(f), z, i))
}

/// Closed forms for `E[w1(f_{Z_s})]` with `e^{-s} = 1 - e^{-t}`.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct RestrictedWeight {
    /// `(1 - e^{-t}) sum_S |S| f^(S)^2 e^{-t(|S|-1)}`, the exact expectation.
    pub exact: f64,
    /// `(1 - e^{-t}) sum_S |S| f^(S)^2 e^{-2t(|S|-1)}`; equals `exact` when the
    /// spectrum has degree at most one and is smaller otherwise.
    pub stated_bound: f64,
    /// `(e^{2t} - e^t) Var(P_t f)`.
    pub variance_bound: f64,
}

/// Expected level-1 weight of `f_{Z_s}`, `s = -log(1 - e^{-t})`.
pub fn expected_restricted_w1(f: &BooleanFunction, t: f64) -> Result<RestrictedWeight> {
    if !(t > 0.0) || !t.is_finite() {
        return Err(Error::Parameter(alloc::format!("t must be finite and > 0, got {t}")));
    }
    let spec = wht(f);
    let keep = 1.0 - (-t).exp();
    let (mut exact, mut stated) = (0.0, 0.0);
    for (s, c) in spec.coeffs().iter().enumerate().skip(1) {
        let k = s.count_ones() as f64;
        let w = k * c * c;
        exact += w * (-t * (k - 1.0)).exp();
        stated += w * (-2.0 * t * (k - 1.0)).exp();
    }
    Ok(RestrictedWeight {
        exact: keep * exact,
        stated_bound: keep * stated,
        variance_bound: ((2.0 * t).exp() - t.exp()) * spec.var_pt(t),
    })
}

//! Half-spaces `{x : <a,x> <= b}` on the cube and their covariance with a
//! function: exact maximization `M(f)` for up to five relevant coordinates,
//! a sweep-based lower bound for any `n`, and the level-1 construction.

mod catalog;
pub mod lp;

use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;

use rand_distr::{Distribution, StandardNormal};

use crate::fourier::{coord, wht, BooleanFunction};
#[allow(unused_imports)] // std float methods shadow it when std is linked
use crate::mathx::Float;
use crate::stats::McConfig;
use crate::{Error, Result};

pub use catalog::{Catalogs, ThresholdCatalog, CATALOG_LIMIT};
pub use lp::{Separator, MARGIN_THRESHOLD};

/// `{x : <a,x> <= b}`. With `a = 0` this is the empty set (`b < 0`) or the
/// whole space (`b >= 0`).
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct HalfSpace {
    pub a: Vec<f64>,
    pub b: f64,
}

impl HalfSpace {
    pub fn new(a: Vec<f64>, b: f64) -> Result<Self> {
        if a.is_empty() || a.iter().any(|v| !v.is_finite()) || !b.is_finite() {
            return Err(Error::Parameter("half-space needs finite, nonempty weights".into()));
        }
        Ok(Self { a, b })
    }

    pub(crate) fn from_parts(a: Vec<f64>, b: f64) -> Self {
        Self { a, b }
    }

    /// `{x : x_i <= b}` in dimension `n`.
    pub fn coordinate(n: usize, i: usize, b: f64) -> Self {
        let mut a = vec![0.0; n];
        a[i] = 1.0;
        Self { a, b }
    }

    pub fn empty(n: usize) -> Self {
        Self {
            a: vec![0.0; n],
            b: -1.0,
        }
    }

    pub fn n(&self) -> usize {
        self.a.len()
    }

    pub fn is_trivial(&self) -> bool {
        self.a.iter().all(|&v| v == 0.0)
    }

    /// Membership of the cube point at table index `idx`.
    pub fn contains_index(&self, idx: usize) -> bool {
        let v: f64 = self
            .a
            .iter()
            .enumerate()
            .map(|(i, ai)| ai * f64::from(coord(idx, i)))
            .sum();
        v <= self.b
    }

    /// Membership of a real point.
    pub fn contains(&self, x: &[f64]) -> bool {
        self.a.iter().zip(x).map(|(a, x)| a * x).sum::<f64>() <= self.b
    }

    /// `1_B` as an indicator table.
    pub fn indicator(&self) -> Result<BooleanFunction> {
        BooleanFunction::indicator(self.n(), |idx| self.contains_index(idx))
    }

    /// Same set with `||a||_2 = 1` (unchanged when trivial).
    pub fn normalized(&self) -> Self {
        let norm = self.a.iter().map(|v| v * v).sum::<f64>().sqrt();
        if norm == 0.0 {
            return self.clone();
        }
        Self {
            a: self.a.iter().map(|v| v / norm).collect(),
            b: self.b / norm,
        }
    }
}

/// How a [`CorrelationResult`] was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "lowercase"))]
pub enum Method {
    Exact,
    /// A certified lower bound.
    Heuristic,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct CorrelationResult {
    pub value: f64,
    pub witness: HalfSpace,
    pub method: Method,
}

/// `Cov(f, 1_B)` under the uniform measure.
pub fn covariance_with_halfspace(f: &BooleanFunction, h: &HalfSpace) -> Result<f64> {
    if f.n() != h.n() {
        return Err(Error::DimensionMismatch {
            left: f.n(),
            right: h.n(),
        });
    }
    let mean = f.mean();
    let s: f64 = (0..f.len())
        .filter(|&idx| h.contains_index(idx))
        .map(|idx| f.at(idx) - mean)
        .sum();
    Ok(s / f.len() as f64)
}

/// Certifies `S` (given by its member predicate over table indices) as a
/// strictly separable subset of `{-1,1}^n`, returning a witness if it is.
pub fn is_separable(n: usize, inside: &[bool]) -> Result<Option<HalfSpace>> {
    crate::fourier::check_dim(n)?;
    if inside.len() != 1 << n {
        return Err(Error::ValueCount {
            expected: 1 << n,
            found: inside.len(),
        });
    }
    let coords: Vec<f64> = (0..1usize << n)
        .flat_map(|idx| (0..n).map(move |i| f64::from(coord(idx, i))))
        .collect();
    let sep = lp::max_margin(&coords, n, inside);
    Ok((sep.margin > MARGIN_THRESHOLD).then(|| HalfSpace::from_parts(sep.a, sep.b)))
}

/// `M(f) = sup_B Cov(f, 1_B)` by maximizing over a threshold catalog.
///
/// `f` is first reduced to its relevant coordinates: averaging a half-space
/// over coordinates `f` ignores yields half-spaces in the remaining ones, so
/// the supremum is unchanged. At most [`CATALOG_LIMIT`] relevant coordinates
/// are supported.
pub fn exact_m_with(f: &BooleanFunction, catalogs: &Catalogs) -> Result<CorrelationResult> {
    let rel = f.relevant_coordinates();
    let k = rel.count_ones() as usize;
    if k == 0 {
        return Ok(CorrelationResult {
            value: 0.0,
            witness: HalfSpace::empty(f.n()),
            method: Method::Exact,
        });
    }
    let limit = catalogs.max_dim().min(CATALOG_LIMIT);
    if k > limit {
        return Err(Error::TooLargeForExact { n: k, limit });
    }
    let cat = catalogs.get(k).expect("catalog present up to max_dim");
    let positions: Vec<usize> = (0..f.n()).filter(|i| rel >> i & 1 == 1).collect();

    // projected table: index over the k relevant coordinates
    let size = 1usize << k;
    let proj: Vec<f64> = (0..size)
        .map(|j| {
            let idx = positions
                .iter()
                .enumerate()
                .fold(0usize, |acc, (r, &p)| acc | ((j >> r) & 1) << p);
            f.at(idx)
        })
        .collect();
    let mean = proj.iter().sum::<f64>() / size as f64;
    let centered: Vec<f64> = proj.iter().map(|v| (v - mean) / size as f64).collect();

    let (best_i, _) = cat
        .sets()
        .iter()
        .enumerate()
        .map(|(i, &mask)| {
            let mut s = 0.0;
            let mut m = mask;
            while m != 0 {
                let p = m.trailing_zeros() as usize;
                s += centered[p];
                m &= m - 1;
            }
            (i, s)
        })
        .fold((0, f64::NEG_INFINITY), |acc, cur| if cur.1 > acc.1 { cur } else { acc });

    let local = cat.witness(best_i);
    let mut a = vec![0.0; f.n()];
    for (r, &p) in positions.iter().enumerate() {
        a[p] = local.a[r];
    }
    let witness = HalfSpace::from_parts(a, local.b);
    let value = covariance_with_halfspace(f, &witness)?;
    Ok(CorrelationResult {
        value,
        witness,
        method: Method::Exact,
    })
}

/// [`exact_m_with`] building the catalogs it needs.
pub fn exact_m(f: &BooleanFunction) -> Result<CorrelationResult> {
    let k = f.relevant_coordinates().count_ones() as usize;
    if k > CATALOG_LIMIT {
        return Err(Error::TooLargeForExact {
            n: k,
            limit: CATALOG_LIMIT,
        });
    }
    exact_m_with(f, &Catalogs::up_to(k.max(1))?)
}

/// Candidate budget for [`heuristic_m`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HeuristicBudget {
    pub random_directions: usize,
    pub refine_rounds: usize,
    pub seed: u64,
}

impl Default for HeuristicBudget {
    fn default() -> Self {
        Self {
            random_directions: 200,
            refine_rounds: 4,
            seed: 0x5eed,
        }
    }
}

/// Best covariance over threshold cuts along a fixed direction.
struct Sweep {
    value: f64,
    witness: HalfSpace,
}

/// Scans every distinct offset of `{<a,x> <= b}` and of its complement.
fn sweep(centered: &[f64], n: usize, a: &[f64]) -> Sweep {
    let mut proj: Vec<(f64, usize)> = (0..centered.len())
        .map(|idx| {
            let v = a
                .iter()
                .enumerate()
                .map(|(i, ai)| ai * f64::from(coord(idx, i)))
                .sum::<f64>();
            (v, idx)
        })
        .collect();
    proj.sort_by(|x, y| x.0.partial_cmp(&y.0).unwrap_or(Ordering::Equal));
    let scale = a.iter().map(|v| v.abs()).sum::<f64>().max(1e-300);
    let tie = 1e-12 * scale;

    let mut best = Sweep {
        value: 0.0,
        witness: HalfSpace::empty(n),
    };
    let mut cum = 0.0;
    for k in 0..proj.len() {
        cum += centered[proj[k].1];
        let last = k + 1 == proj.len();
        if !last && proj[k + 1].0 - proj[k].0 <= tie {
            continue;
        }
        if last {
            break;
        }
        let mid = 0.5 * (proj[k].0 + proj[k + 1].0);
        if cum > best.value {
            best = Sweep {
                value: cum,
                witness: HalfSpace::from_parts(a.to_vec(), mid),
            };
        }
        if -cum > best.value {
            best = Sweep {
                value: -cum,
                witness: HalfSpace::from_parts(a.iter().map(|v| -v).collect(), -mid),
            };
        }
    }
    best
}

/// Lower bound on `M(f)`: full offset sweeps along the level-1 (Chow)
/// direction, every coordinate direction and `budget.random_directions`
/// Gaussian directions, then greedy single-weight refinement of the best one.
pub fn heuristic_m(f: &BooleanFunction, budget: &HeuristicBudget) -> Result<CorrelationResult> {
    let n = f.n();
    let size = f.len() as f64;
    let mean = f.mean();
    let centered: Vec<f64> = f.values().iter().map(|v| (v - mean) / size).collect();

    let mut dirs: Vec<Vec<f64>> = Vec::new();
    let spec = wht(f);
    let chow: Vec<f64> = (0..n).map(|i| spec.singleton(i)).collect();
    if chow.iter().any(|&c| c != 0.0) {
        dirs.push(chow);
    }
    for i in 0..n {
        let mut e = vec![0.0; n];
        e[i] = 1.0;
        dirs.push(e);
    }
    let mut rng = McConfig::new(1, budget.seed).rng(0);
    for _ in 0..budget.random_directions {
        dirs.push((0..n).map(|_| StandardNormal.sample(&mut rng)).collect());
    }

    let mut best = Sweep {
        value: 0.0,
        witness: HalfSpace::empty(n),
    };
    let mut best_dir = vec![0.0; n];
    for d in &dirs {
        let s = sweep(&centered, n, d);
        if s.value > best.value {
            best = s;
            best_dir = d.clone();
        }
    }

    if best.value > 0.0 {
        let mut step = 0.5 * best_dir.iter().map(|v| v.abs()).fold(0.0, f64::max);
        for _ in 0..budget.refine_rounds {
            let mut improved = false;
            for i in 0..n {
                for sign in [1.0, -1.0] {
                    let mut d = best_dir.clone();
                    d[i] += sign * step;
                    let s = sweep(&centered, n, &d);
                    if s.value > best.value + 1e-15 {
                        best = s;
                        best_dir = d;
                        improved = true;
                    }
                }
            }
            if !improved {
                step *= 0.5;
            }
        }
    }

    let value = covariance_with_halfspace(f, &best.witness)?;
    Ok(CorrelationResult {
        value,
        witness: best.witness,
        method: Method::Heuristic,
    })
}

/// The half-space `{x : sum_i f^(i) x_i >= 0}` together with the quantities
/// that certify its correlation with `f`.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Level1Construction {
    /// In `<=` form: weights `-f^(i)`, offset `0`.
    pub halfspace: HalfSpace,
    /// `Cov(f, 1_B)`.
    pub covariance: f64,
    /// `w1(f) = ||a||_2^2` with `a_i = f^(i)`.
    pub level1_weight: f64,
    /// `E|l(X)|` for `l(x) = sum_i f^(i) x_i`.
    pub linear_abs_mean: f64,
    /// `E[l 1_{l >= 0}]`.
    pub linear_positive_part: f64,
}

/// Builds the level-1 half-space of `f`.
pub fn construct_level1_halfspace(f: &BooleanFunction) -> Result<Level1Construction> {
    let spec = wht(f);
    let a: Vec<f64> = (0..f.n()).map(|i| spec.singleton(i)).collect();
    let w1: f64 = a.iter().map(|v| v * v).sum();
    if w1 <= 1e-24 {
        return Err(Error::NoLevelOneWeight);
    }
    let halfspace = HalfSpace::from_parts(a.iter().map(|v| -v).collect(), 0.0);
    let covariance = covariance_with_halfspace(f, &halfspace)?;
    let (abs_mean, pos_part) = linear_form_moments(&a);
    Ok(Level1Construction {
        halfspace,
        covariance,
        level1_weight: w1,
        linear_abs_mean: abs_mean,
        linear_positive_part: pos_part,
    })
}

/// `(E|l(X)|, E[l(X) 1_{l(X) >= 0}])` for `l(x) = <a, x>` by enumeration of
/// `{-1,1}^n`.
pub fn linear_form_moments(a: &[f64]) -> (f64, f64) {
    let n = a.len();
    let size = 1usize << n;
    let (mut abs, mut pos) = (0.0, 0.0);
    for idx in 0..size {
        let l: f64 = a.iter().enumerate().map(|(i, ai)| ai * f64::from(coord(idx, i))).sum();
        abs += l.abs();
        if l >= 0.0 {
            pos += l;
        }
    }
    (abs / size as f64, pos / size as f64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fourier::RangeTag;

    fn signed(n: usize, g: impl FnMut(&[i8]) -> f64) -> BooleanFunction {
        BooleanFunction::from_point_fn(n, RangeTag::Signed, g).unwrap()
    }

    #[test]
    fn covariance_cases() {
        let f = BooleanFunction::indicator(2, |idx| idx & 1 == 1).unwrap(); // x1 = -1
        let b = HalfSpace::coordinate(2, 0, 0.0);
        assert_eq!(covariance_with_halfspace(&f, &b).unwrap(), 0.25);

        let c = BooleanFunction::from_index_fn(3, RangeTag::Indicator, |_| 0.4).unwrap();
        let h = HalfSpace::new(vec![1.0, -2.0, 0.5], 0.3).unwrap();
        assert!(covariance_with_halfspace(&c, &h).unwrap().abs() < 1e-16);
        // indicator of {x1 x2 = -1}; B = {x1 - x2 <= 1/2} misses only (+1,-1)
        // parity indicator (1 + x1 x2) / 2; B = {x1 - x2 <= 1/2} misses only (+1,-1)
        let par = BooleanFunction::indicator(2, |idx| idx.count_ones() & 1 == 0).unwrap();
        let b = HalfSpace::new(vec![1.0, -1.0], 0.5).unwrap();
        assert_eq!((0..4).filter(|&i| b.contains_index(i)).count(), 3);
        assert_eq!(covariance_with_halfspace(&par, &b).unwrap(), 0.125);
        assert!(covariance_with_halfspace(&par, &HalfSpace::empty(3)).is_err());
    }

    #[test]
    fn separability_examples() {
        let w = is_separable(2, &[true, false, false, false]).unwrap().unwrap();
        for idx in 0..4 {
            assert_eq!(w.contains_index(idx), idx == 0);
        }
        assert!(is_separable(2, &[false, true, true, false]).unwrap().is_none());
        // subcube {x1 = +1}
        let inside: Vec<bool> = (0..8).map(|idx| idx & 1 == 0).collect();
        let w = is_separable(3, &inside).unwrap().unwrap();
        for idx in 0..8 {
            assert_eq!(w.contains_index(idx), inside[idx]);
        }
    }

    #[test]
    fn exact_m_fixtures() {
        let f = BooleanFunction::indicator(2, |idx| idx & 1 == 1).unwrap();
        let r = exact_m(&f).unwrap();
        assert!((r.value - 0.25).abs() < 1e-12);
        for idx in 0..4 {
            assert_eq!(r.witness.contains_index(idx), idx & 1 == 1);
        }
        let par = BooleanFunction::indicator(2, |idx| idx.count_ones() & 1 == 0).unwrap();
        assert!((exact_m(&par).unwrap().value - 0.125).abs() < 1e-12);
    }

    #[test]
    fn exact_m_too_many_relevant_coordinates() {
        let par6 = signed(6, |x| x.iter().map(|&v| f64::from(v)).product());
        assert!(matches!(exact_m(&par6), Err(Error::TooLargeForExact { n: 6, .. })));
        // a dictator in n = 8 has one relevant coordinate
        let d = signed(8, |x| f64::from(x[3]));
        let r = exact_m(&d).unwrap();
        assert!((r.value - 0.5).abs() < 1e-12);
        assert_eq!(r.witness.n(), 8);
    }

    #[test]
    fn heuristic_cases() {
        let c = BooleanFunction::from_index_fn(4, RangeTag::Indicator, |_| 1.0).unwrap();
        assert_eq!(heuristic_m(&c, &HeuristicBudget::default()).unwrap().value, 0.0);
        let maj = signed(5, |x| if x.iter().map(|&v| i32::from(v)).sum::<i32>() > 0 { 1.0 } else { -1.0 });
        let h = heuristic_m(&maj, &HeuristicBudget::default()).unwrap();
        let e = exact_m(&maj).unwrap();
        assert!((h.value - e.value).abs() < 1e-12);
        assert_eq!(h.method, Method::Heuristic);
        assert!((covariance_with_halfspace(&maj, &h.witness).unwrap() - h.value).abs() < 1e-12);
    }

    #[test]
    fn level1_construction() {
        let d = signed(3, |x| f64::from(x[0]));
        let c = construct_level1_halfspace(&d).unwrap();
        assert!((c.covariance - 0.5).abs() < 1e-15);
        let ci = construct_level1_halfspace(&d.to_unit_interval()).unwrap();
        assert!((ci.covariance - 0.25).abs() < 1e-15);
        for idx in 0..8 {
            assert_eq!(c.halfspace.contains_index(idx), coord(idx, 0) >= 0);
        }
        let par = signed(3, |x| x.iter().map(|&v| f64::from(v)).product());
        assert_eq!(construct_level1_halfspace(&par), Err(Error::NoLevelOneWeight));
    }

    #[test]
    fn uniform_linear_form_abs_mean() {
        // a = (1,..,1)/sqrt(12): E|l| by enumeration against the 1/20 bound
        let n = 12;
        let a = vec![1.0 / (n as f64).sqrt(); n];
        let (abs, pos) = linear_form_moments(&a);
        assert!(abs >= 1.0 / 20.0);
        assert!((pos - abs / 2.0).abs() < 1e-12);
        // binomial closed form: E|sum x_i| = n C(n-1, n/2-1... ) / 2^{n-1}; for n = 12: 12*C(11,5)/2^11
        let exact = 12.0 * 462.0 / 2048.0 / (n as f64).sqrt();
        assert!((abs - exact).abs() < 1e-12);
    }
}

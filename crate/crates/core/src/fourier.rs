//! Dense truth tables on `{-1,1}^n`, the Walsh–Fourier transform and the
//! Bonami–Beckner noise semigroup.

use alloc::vec::Vec;
use core::fmt;

#[allow(unused_imports)] // std float methods shadow it when std is linked
use crate::mathx::Float;
use crate::{Error, Result, MAX_DIM};

/// Declared value range of a [`BooleanFunction`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "lowercase"))]
pub enum RangeTag {
    /// Values in `[0, 1]`.
    Indicator,
    /// Values in `[-1, 1]`.
    Signed,
}

impl RangeTag {
    pub fn bounds(self) -> (f64, f64) {
        match self {
            RangeTag::Indicator => (0.0, 1.0),
            RangeTag::Signed => (-1.0, 1.0),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            RangeTag::Indicator => "indicator",
            RangeTag::Signed => "signed",
        }
    }

    fn contains(self, v: f64) -> bool {
        let (lo, hi) = self.bounds();
        v >= lo && v <= hi
    }
}

impl fmt::Display for RangeTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl core::str::FromStr for RangeTag {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "indicator" => Ok(RangeTag::Indicator),
            "signed" => Ok(RangeTag::Signed),
            other => Err(Error::Parse(alloc::format!("unknown range tag {other:?}"))),
        }
    }
}

/// Value of coordinate `i` (0-based) at table index `idx`: `+1` for a clear
/// bit, `-1` for a set bit.
#[inline]
pub fn coord(idx: usize, i: usize) -> i8 {
    1 - 2 * ((idx >> i) & 1) as i8
}

/// `chi_S(x)` for the subset mask `s` at table index `idx`.
#[inline]
pub fn character(s: usize, idx: usize) -> f64 {
    if (s & idx).count_ones() & 1 == 0 {
        1.0
    } else {
        -1.0
    }
}

/// A real-valued function on `{-1,1}^n` stored as a dense table of `2^n`
/// values in index order.
#[derive(Debug, Clone, PartialEq)]
pub struct BooleanFunction {
    n: usize,
    values: Vec<f64>,
    range: RangeTag,
}

impl BooleanFunction {
    /// Validates dimension, length and range.
    pub fn new(n: usize, values: Vec<f64>, range: RangeTag) -> Result<Self> {
        check_dim(n)?;
        let expected = 1usize << n;
        if values.len() != expected {
            return Err(Error::ValueCount {
                expected,
                found: values.len(),
            });
        }
        if let Some((index, &value)) = values
            .iter()
            .enumerate()
            .find(|(_, v)| !range.contains(**v))
        {
            return Err(Error::Range {
                index,
                value,
                range: range.name(),
            });
        }
        Ok(Self { n, values, range })
    }

    /// Builds a table by evaluating `g` at every index.
    pub fn from_index_fn(n: usize, range: RangeTag, g: impl FnMut(usize) -> f64) -> Result<Self> {
        check_dim(n)?;
        Self::new(n, (0..1usize << n).map(g).collect(), range)
    }

    /// Builds a table from a function of the `±1` point.
    pub fn from_point_fn(n: usize, range: RangeTag, mut g: impl FnMut(&[i8]) -> f64) -> Result<Self> {
        check_dim(n)?;
        let mut x = alloc::vec![0i8; n];
        Self::from_index_fn(n, range, |idx| {
            for (i, xi) in x.iter_mut().enumerate() {
                *xi = coord(idx, i);
            }
            g(&x)
        })
    }

    /// Indicator of a set given by its member indices' predicate.
    pub fn indicator(n: usize, mut member: impl FnMut(usize) -> bool) -> Result<Self> {
        Self::from_index_fn(n, RangeTag::Indicator, |idx| if member(idx) { 1.0 } else { 0.0 })
    }

    /// Values produced by spectral operations can leave the declared range by
    /// an ulp; they are clamped back into `[lo, hi]`.
    pub(crate) fn from_clamped(n: usize, mut values: Vec<f64>, range: RangeTag, lo: f64, hi: f64) -> Self {
        for v in &mut values {
            *v = v.clamp(lo, hi);
        }
        Self { n, values, range }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn range(&self) -> RangeTag {
        self.range
    }

    pub fn at(&self, idx: usize) -> f64 {
        self.values[idx]
    }

    /// Evaluates at a `±1` point.
    pub fn eval(&self, x: &[i8]) -> f64 {
        self.values[encode(x)]
    }

    pub fn mean(&self) -> f64 {
        self.values.iter().sum::<f64>() / self.len() as f64
    }

    pub fn second_moment(&self) -> f64 {
        self.values.iter().map(|v| v * v).sum::<f64>() / self.len() as f64
    }

    pub fn variance(&self) -> f64 {
        let m = self.mean();
        self.values.iter().map(|v| (v - m) * (v - m)).sum::<f64>() / self.len() as f64
    }

    pub fn min_value(&self) -> f64 {
        self.values.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn max_value(&self) -> f64 {
        self.values.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    /// True when every value is exactly 0 or 1.
    pub fn is_zero_one(&self) -> bool {
        self.values.iter().all(|&v| v == 0.0 || v == 1.0)
    }

    /// Mask of coordinates the function actually depends on.
    pub fn relevant_coordinates(&self) -> u32 {
        let mut mask = 0u32;
        for i in 0..self.n {
            let bit = 1usize << i;
            if (0..self.len())
                .filter(|idx| idx & bit == 0)
                .any(|idx| self.values[idx] != self.values[idx | bit])
            {
                mask |= 1 << i;
            }
        }
        mask
    }

    /// `(1 + f) / 2`, mapping a signed function into `[0, 1]`. Indicator
    /// functions are returned unchanged.
    pub fn to_unit_interval(&self) -> Self {
        match self.range {
            RangeTag::Indicator => self.clone(),
            RangeTag::Signed => Self {
                n: self.n,
                values: self.values.iter().map(|v| 0.5 * (1.0 + v)).collect(),
                range: RangeTag::Indicator,
            },
        }
    }

    /// `2f - 1`, the inverse of [`to_unit_interval`](Self::to_unit_interval).
    pub fn to_signed(&self) -> Self {
        match self.range {
            RangeTag::Signed => self.clone(),
            RangeTag::Indicator => Self {
                n: self.n,
                values: self.values.iter().map(|v| 2.0 * v - 1.0).collect(),
                range: RangeTag::Signed,
            },
        }
    }

    /// `g(x) = f(y)` where `y_{perm[i]} = flip_i · x_i`, flips taken from the
    /// bits of `flips`. `perm` must be a permutation of `0..n`.
    pub fn relabel(&self, perm: &[usize], flips: u32) -> Result<Self> {
        if perm.len() != self.n {
            return Err(Error::DimensionMismatch {
                left: perm.len(),
                right: self.n,
            });
        }
        let values = (0..self.len())
            .map(|idx| {
                let mut src = 0usize;
                for (i, &p) in perm.iter().enumerate() {
                    let bit = ((idx >> i) & 1) ^ ((flips as usize >> i) & 1);
                    src |= bit << p;
                }
                self.values[src]
            })
            .collect();
        Ok(Self {
            n: self.n,
            values,
            range: self.range,
        })
    }
}

/// Table index of a `±1` point.
pub fn encode(x: &[i8]) -> usize {
    x.iter()
        .enumerate()
        .fold(0, |acc, (i, &xi)| acc | (usize::from(xi < 0) << i))
}

/// `±1` point of a table index.
pub fn decode(idx: usize, n: usize) -> Vec<i8> {
    (0..n).map(|i| coord(idx, i)).collect()
}

pub(crate) fn check_dim(n: usize) -> Result<()> {
    if n == 0 || n > MAX_DIM {
        Err(Error::Dimension(n))
    } else {
        Ok(())
    }
}

/// Unnormalized in-place Walsh–Hadamard butterfly. `v.len()` must be a power
/// of two. Applying it twice multiplies by `v.len()`.
pub fn fwht_in_place(v: &mut [f64]) {
    let len = v.len();
    debug_assert!(len.is_power_of_two());
    let mut h = 1;
    while h < len {
        for block in v.chunks_exact_mut(2 * h) {
            let (lo, hi) = block.split_at_mut(h);
            for (a, b) in lo.iter_mut().zip(hi.iter_mut()) {
                let (x, y) = (*a, *b);
                *a = x + y;
                *b = x - y;
            }
        }
        h *= 2;
    }
}

/// Fourier–Walsh coefficients `f^(S) = E[f chi_S]`, indexed by subset mask.
#[derive(Debug, Clone, PartialEq)]
pub struct FourierSpectrum {
    n: usize,
    coeffs: Vec<f64>,
}

impl FourierSpectrum {
    pub fn new(n: usize, coeffs: Vec<f64>) -> Result<Self> {
        check_dim(n)?;
        if coeffs.len() != 1usize << n {
            return Err(Error::ValueCount {
                expected: 1 << n,
                found: coeffs.len(),
            });
        }
        Ok(Self { n, coeffs })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn coeff(&self, mask: usize) -> f64 {
        self.coeffs[mask]
    }

    /// `f^({i})` for a 0-based coordinate.
    pub fn singleton(&self, i: usize) -> f64 {
        self.coeffs[1 << i]
    }

    /// `sum_S f^(S)^2`.
    pub fn total_weight(&self) -> f64 {
        self.coeffs.iter().map(|c| c * c).sum()
    }

    /// Squared weight per degree, index `k` holding `sum_{|S|=k} f^(S)^2`.
    pub fn level_weights(&self) -> Vec<f64> {
        let mut w = alloc::vec![0.0; self.n + 1];
        for (s, c) in self.coeffs.iter().enumerate() {
            w[s.count_ones() as usize] += c * c;
        }
        w
    }

    /// `w1 = sum_i f^(i)^2`.
    pub fn level1_weight(&self) -> f64 {
        (0..self.n).map(|i| self.singleton(i).powi(2)).sum()
    }

    /// `Var(P_t f) = sum_{S != 0} e^{-2t|S|} f^(S)^2`.
    pub fn var_pt(&self, t: f64) -> f64 {
        self.coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(s, c)| (-2.0 * t * s.count_ones() as f64).exp() * c * c)
            .sum()
    }

    /// `E[f P_t f] = sum_S e^{-t|S|} f^(S)^2`.
    pub fn stability(&self, t: f64) -> f64 {
        self.coeffs
            .iter()
            .enumerate()
            .map(|(s, c)| (-t * s.count_ones() as f64).exp() * c * c)
            .sum()
    }

    /// Spectrum of `P_t f`.
    pub fn smoothed(&self, t: f64) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(s, c)| (-t * s.count_ones() as f64).exp() * c)
            .collect();
        Self { n: self.n, coeffs }
    }

    /// Evaluates `sum_S f^(S) chi_S` at every point.
    pub fn synthesize(&self) -> Vec<f64> {
        let mut v = self.coeffs.clone();
        fwht_in_place(&mut v);
        v
    }
}

/// Noise time `t >= 0`; the retention correlation is `rho = e^{-t}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoiseParam {
    t: f64,
}

impl NoiseParam {
    pub fn new(t: f64) -> Result<Self> {
        if t.is_finite() && t >= 0.0 {
            Ok(Self { t })
        } else {
            Err(Error::Parameter(alloc::format!("noise time must be finite and >= 0, got {t}")))
        }
    }

    pub fn t(self) -> f64 {
        self.t
    }

    pub fn rho(self) -> f64 {
        (-self.t).exp()
    }
}

/// Fourier–Walsh transform, `O(n 2^n)`.
pub fn wht(f: &BooleanFunction) -> FourierSpectrum {
    let mut coeffs = f.values.clone();
    fwht_in_place(&mut coeffs);
    let scale = 1.0 / coeffs.len() as f64;
    coeffs.iter_mut().for_each(|c| *c *= scale);
    FourierSpectrum { n: f.n, coeffs }
}

/// Reconstructs the table from its spectrum. The result is tagged signed when
/// it leaves `[0, 1]`; it is never range-clamped.
pub fn wht_inverse(spec: &FourierSpectrum) -> BooleanFunction {
    let values = spec.synthesize();
    let range = if values.iter().all(|v| (0.0..=1.0).contains(v)) {
        RangeTag::Indicator
    } else {
        RangeTag::Signed
    };
    BooleanFunction {
        n: spec.n,
        values,
        range,
    }
}

/// `P_t f`, the coefficient of `S` multiplied by `e^{-t|S|}`.
pub fn noise_operator(f: &BooleanFunction, p: NoiseParam) -> BooleanFunction {
    if p.t == 0.0 {
        return f.clone();
    }
    let values = wht(f).smoothed(p.t).synthesize();
    BooleanFunction::from_clamped(f.n, values, f.range, f.min_value(), f.max_value())
}

/// `Var(P_t f)`.
pub fn var_pt(f: &BooleanFunction, p: NoiseParam) -> f64 {
    wht(f).var_pt(p.t)
}

/// `S_t(A) = E[1_A P_t 1_A]` for a 0/1-valued table.
pub fn noise_stability(a: &BooleanFunction, p: NoiseParam) -> Result<f64> {
    if !a.is_zero_one() {
        return Err(Error::NotIndicator);
    }
    Ok(wht(a).stability(p.t))
}

/// `w1(f) = sum_i f^(i)^2`.
pub fn level1_weight(f: &BooleanFunction) -> f64 {
    wht(f).level1_weight()
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn dictator(n: usize) -> BooleanFunction {
        BooleanFunction::from_point_fn(n, RangeTag::Signed, |x| f64::from(x[0])).unwrap()
    }

    fn parity(n: usize) -> BooleanFunction {
        BooleanFunction::from_point_fn(n, RangeTag::Signed, |x| x.iter().map(|&v| f64::from(v)).product())
            .unwrap()
    }

    fn majority3() -> BooleanFunction {
        BooleanFunction::from_point_fn(3, RangeTag::Signed, |x| {
            if x.iter().map(|&v| i32::from(v)).sum::<i32>() > 0 {
                1.0
            } else {
                -1.0
            }
        })
        .unwrap()
    }

    #[test]
    fn index_convention_round_trips() {
        for idx in 0..32 {
            assert_eq!(encode(&decode(idx, 5)), idx);
        }
        assert_eq!(decode(0b10, 2), vec![1, -1]);
    }

    #[test]
    fn rejects_bad_tables() {
        assert_eq!(
            BooleanFunction::new(2, vec![0.0; 3], RangeTag::Indicator),
            Err(Error::ValueCount { expected: 4, found: 3 })
        );
        assert!(matches!(
            BooleanFunction::new(1, vec![0.0, 1.5], RangeTag::Indicator),
            Err(Error::Range { index: 1, .. })
        ));
        assert!(BooleanFunction::new(1, vec![-1.0, 1.0], RangeTag::Signed).is_ok());
        assert_eq!(BooleanFunction::new(0, vec![0.0], RangeTag::Signed), Err(Error::Dimension(0)));
        assert_eq!(BooleanFunction::new(21, vec![], RangeTag::Signed), Err(Error::Dimension(21)));
    }

    #[test]
    fn dictator_spectrum() {
        let c = wht(&dictator(2));
        assert_eq!(c.coeffs(), &[0.0, 1.0, 0.0, 0.0]);
    }

    #[test]
    fn subcube_indicator_spectrum() {
        // (1 + x1)(1 + x2) / 4
        let f = BooleanFunction::indicator(2, |idx| idx == 0).unwrap();
        assert_eq!(wht(&f).coeffs(), &[0.25; 4]);
    }

    #[test]
    fn inverse_cases() {
        let zero = FourierSpectrum::new(3, vec![0.0; 8]).unwrap();
        assert!(wht_inverse(&zero).values().iter().all(|&v| v == 0.0));

        let lin = FourierSpectrum::new(2, vec![0.5, 0.5, 0.0, 0.0]).unwrap();
        let f = wht_inverse(&lin);
        assert_eq!(f.values(), &[1.0, 0.0, 1.0, 0.0]);
        assert_eq!(f.range(), RangeTag::Indicator);
    }

    #[test]
    fn eigenfunctions_of_the_semigroup() {
        let t = 0.37;
        let p = NoiseParam::new(t).unwrap();
        let d = noise_operator(&dictator(3), p);
        for idx in 0..8 {
            assert!((d.at(idx) - (-t).exp() * f64::from(coord(idx, 0))).abs() < 1e-15);
        }
        let par = parity(4);
        let pp = noise_operator(&par, p);
        for idx in 0..16 {
            assert!((pp.at(idx) - (-4.0 * t).exp() * par.at(idx)).abs() < 1e-15);
        }
        assert_eq!(noise_operator(&par, NoiseParam::new(0.0).unwrap()), par);
    }

    #[test]
    fn var_pt_cases() {
        let t = 0.8;
        let p = NoiseParam::new(t).unwrap();
        assert!((var_pt(&dictator(4), p) - (-2.0 * t).exp()).abs() < 1e-15);
        let c = BooleanFunction::from_index_fn(3, RangeTag::Indicator, |_| 0.3).unwrap();
        assert!(var_pt(&c, p).abs() < 1e-30);
        assert!((var_pt(&majority3(), NoiseParam::new(0.0).unwrap()) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn stability_of_halfcube_and_full_cube() {
        let a = BooleanFunction::indicator(3, |idx| idx & 1 == 0).unwrap();
        for &t in &[0.0, 0.2, 1.0, 3.0] {
            let s = noise_stability(&a, NoiseParam::new(t).unwrap()).unwrap();
            assert!((s - (0.25 + 0.25 * (-t).exp())).abs() < 1e-15);
        }
        let full = BooleanFunction::indicator(3, |_| true).unwrap();
        assert!((noise_stability(&full, NoiseParam::new(2.0).unwrap()).unwrap() - 1.0).abs() < 1e-15);
        let half = BooleanFunction::from_index_fn(2, RangeTag::Indicator, |_| 0.5).unwrap();
        assert_eq!(noise_stability(&half, NoiseParam::new(1.0).unwrap()), Err(Error::NotIndicator));
    }

    #[test]
    fn level1_cases() {
        assert!((level1_weight(&dictator(3)) - 1.0).abs() < 1e-15);
        assert!(level1_weight(&parity(3)).abs() < 1e-15);
        // 8-point oracle: f^(i) = E[maj(x) x_i]
        let maj = majority3();
        for i in 0..3 {
            let direct: f64 = (0..8).map(|idx| maj.at(idx) * f64::from(coord(idx, i))).sum::<f64>() / 8.0;
            assert_eq!(direct, 0.5);
            assert!((wht(&maj).singleton(i) - direct).abs() < 1e-15);
        }
        assert!((level1_weight(&maj) - 0.75).abs() < 1e-15);
    }

    #[test]
    fn noise_param_validation() {
        assert!(NoiseParam::new(-0.1).is_err());
        assert!(NoiseParam::new(f64::NAN).is_err());
        assert_eq!(NoiseParam::new(0.0).unwrap().rho(), 1.0);
    }

    #[test]
    fn relevant_coordinates_and_relabel() {
        let f = BooleanFunction::from_point_fn(4, RangeTag::Signed, |x| f64::from(x[1] * x[3])).unwrap();
        assert_eq!(f.relevant_coordinates(), 0b1010);
        // swap coordinates 1 and 0, flip coordinate 0 of the input
        let g = f.relabel(&[1, 0, 2, 3], 0b0001).unwrap();
        let expect = BooleanFunction::from_point_fn(4, RangeTag::Signed, |x| f64::from(-x[0] * x[3])).unwrap();
        assert_eq!(g, expect);
    }
}

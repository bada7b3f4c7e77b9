//! Spectral engine against direct definitions.

use proptest::prelude::*;
use stability_lab_core::fourier::{character, coord, decode};
use stability_lab_core::{noise_operator, noise_stability, var_pt, wht, wht_inverse, BooleanFunction, NoiseParam, RangeTag};

/// `f^(S) = 2^{-n} sum_x f(x) chi_S(x)` by direct summation.
fn naive_coeffs(f: &BooleanFunction) -> Vec<f64> {
    let size = f.len();
    (0..size)
        .map(|s| (0..size).map(|x| f.at(x) * character(s, x)).sum::<f64>() / size as f64)
        .collect()
}

/// `(P_t f)(x) = sum_y prod_i (1 + e^{-t} x_i y_i)/2 f(y)`.
fn naive_pt(f: &BooleanFunction, t: f64) -> Vec<f64> {
    let rho = (-t).exp();
    let n = f.n();
    (0..f.len())
        .map(|x| {
            (0..f.len())
                .map(|y| {
                    let k: f64 = (0..n)
                        .map(|i| (1.0 + rho * f64::from(coord(x, i) * coord(y, i))) / 2.0)
                        .product();
                    k * f.at(y)
                })
                .sum::<f64>()
        })
        .collect()
}

fn table(n: usize, range: RangeTag) -> impl Strategy<Value = BooleanFunction> {
    let (lo, hi) = range.bounds();
    prop::collection::vec(lo..=hi, 1usize << n)
        .prop_map(move |v| BooleanFunction::new(n, v, range).unwrap())
}

fn indicator(n: usize) -> impl Strategy<Value = BooleanFunction> {
    prop::collection::vec(any::<bool>(), 1usize << n)
        .prop_map(move |v| BooleanFunction::indicator(n, |i| v[i]).unwrap())
}

#[test]
fn transform_matches_direct_sum() {
    let f = BooleanFunction::from_index_fn(6, RangeTag::Signed, |i| ((i * 37 + 11) % 13) as f64 / 6.5 - 1.0).unwrap();
    let fast = wht(&f);
    for (a, b) in fast.coeffs().iter().zip(naive_coeffs(&f)) {
        assert!((a - b).abs() < 1e-14);
    }
}

#[test]
fn noise_operator_matches_kernel() {
    let f = BooleanFunction::indicator(5, |i| (i * 7 + 3) % 5 < 2).unwrap();
    for t in [0.0, 0.1, 0.5, 2.0] {
        let fast = noise_operator(&f, NoiseParam::new(t).unwrap());
        for (a, b) in fast.values().iter().zip(naive_pt(&f, t)) {
            assert!((a - b).abs() < 1e-13, "t={t}");
        }
    }
}

#[test]
fn evaluation_follows_index_convention() {
    let f = BooleanFunction::from_point_fn(3, RangeTag::Signed, |x| f64::from(x[0] * x[2])).unwrap();
    for idx in 0..8 {
        let x = decode(idx, 3);
        assert_eq!(f.at(idx), f64::from(x[0] * x[2]));
        assert_eq!(f.eval(&x), f.at(idx));
    }
    assert_eq!(wht(&f).coeff(0b101), 1.0);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn parseval(f in (1usize..=8).prop_flat_map(|n| table(n, RangeTag::Signed))) {
        let lhs = f.second_moment();
        let rhs = wht(&f).total_weight();
        prop_assert!((lhs - rhs).abs() < 1e-12);
    }

    #[test]
    fn inverse_is_involution(f in (1usize..=8).prop_flat_map(|n| table(n, RangeTag::Indicator))) {
        let back = wht_inverse(&wht(&f));
        for (a, b) in back.values().iter().zip(f.values()) {
            prop_assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn semigroup(f in (1usize..=7).prop_flat_map(|n| table(n, RangeTag::Signed)), s in 0.0f64..2.0, t in 0.0f64..2.0) {
        let ps = NoiseParam::new(s).unwrap();
        let pt = NoiseParam::new(t).unwrap();
        let twice = noise_operator(&noise_operator(&f, pt), ps);
        let once = noise_operator(&f, NoiseParam::new(s + t).unwrap());
        for (a, b) in twice.values().iter().zip(once.values()) {
            prop_assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn stability_splits_into_mean_and_variance(a in (1usize..=8).prop_flat_map(indicator), t in 0.0f64..3.0) {
        let st = noise_stability(&a, NoiseParam::new(t).unwrap()).unwrap();
        let split = a.mean().powi(2) + var_pt(&a, NoiseParam::new(t / 2.0).unwrap());
        prop_assert!((st - split).abs() < 1e-12);
    }

    #[test]
    fn smoothing_is_a_contraction(f in (1usize..=7).prop_flat_map(|n| table(n, RangeTag::Indicator)), t in 0.0f64..2.0) {
        let g = noise_operator(&f, NoiseParam::new(t).unwrap());
        prop_assert!(g.min_value() >= f.min_value() - 1e-12);
        prop_assert!(g.max_value() <= f.max_value() + 1e-12);
        prop_assert!((g.mean() - f.mean()).abs() < 1e-12);
        prop_assert!(var_pt(&f, NoiseParam::new(t).unwrap()) <= f.variance() + 1e-12);
    }

    #[test]
    fn relabeling_preserves_level_weights(f in table(5, RangeTag::Signed), perm in Just((0..5).collect::<Vec<usize>>()).prop_shuffle(), flips in 0u32..32) {
        let g = f.relabel(&perm, flips).unwrap();
        let (a, b) = (wht(&f).level_weights(), wht(&g).level_weights());
        for (x, y) in a.iter().zip(&b) {
            prop_assert!((x - y).abs() < 1e-12);
        }
    }
}

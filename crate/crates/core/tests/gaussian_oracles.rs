//! Gaussian engines against Owen's T function and symmetry arguments.

use std::f64::consts::PI;

use proptest::prelude::*;
use stability_lab_core::corpus::and_indicator;
use stability_lab_core::gaussian::{
    ball_experiments, check_converse_identity, check_exp_w1, converse_r, estimate_w1, estimate_w1_gaussian,
    halfspace_l2_closed, halfspace_stability_closed, ledoux_bound, ledoux_gap, mc_noise_stability, shift_scale,
    BallConfig, GaussianSet, McConfig, ShiftScale,
};

fn phi_cdf(x: f64) -> f64 {
    0.5 * libm::erfc(-x / std::f64::consts::SQRT_2)
}

/// Owen's `T(h, a) = (2 pi)^{-1} int_0^a exp(-h^2 (1 + x^2) / 2) / (1 + x^2) dx`
/// by composite Simpson on a fixed fine grid.
fn owen_t(h: f64, a: f64) -> f64 {
    let m = 4000;
    let step = a / m as f64;
    let g = |x: f64| (-h * h * (1.0 + x * x) / 2.0).exp() / (1.0 + x * x);
    let mut s = g(0.0) + g(a);
    for k in 1..m {
        s += if k % 2 == 1 { 4.0 } else { 2.0 } * g(k as f64 * step);
    }
    s * step / 3.0 / (2.0 * PI)
}

/// `Pr(X <= b, Y <= b)` for a standard bivariate normal with correlation `rho`.
fn orthant(b: f64, rho: f64) -> f64 {
    phi_cdf(b) - 2.0 * owen_t(b, ((1.0 - rho) / (1.0 + rho)).sqrt())
}

#[test]
fn quadrature_matches_owen_t() {
    for bi in -4..=4 {
        let b = bi as f64 * 0.5;
        for t in [0.05f64, 0.2, 0.5, 1.0, 2.0, 4.0] {
            let q = halfspace_stability_closed(b, t);
            let o = orthant(b, (-t).exp());
            assert!((q - o).abs() < 1e-9, "b={b} t={t}: {q} vs {o}");
        }
    }
}

#[test]
fn sheppard_formula() {
    for t in [0.01f64, 0.05, 0.1, 0.5, 1.0, 2.0, 5.0] {
        let want = 0.25 + (-t).exp().asin() / (2.0 * PI);
        assert!((halfspace_stability_closed(0.0, t) - want).abs() < 1e-8);
    }
}

#[test]
fn ledoux_and_l2_bounds_on_grid() {
    for bi in -4..=4 {
        let b = bi as f64 * 0.5;
        for t in [0.05, 0.1, 0.25, 0.5, 1.0, 1.5, 2.0] {
            assert!(ledoux_gap(b, t) <= ledoux_bound(t) + 1e-8, "b={b} t={t}");
            assert!(halfspace_l2_closed(b, t) <= 2.0 * ledoux_bound(t) + 1e-8, "b={b} t={t}");
        }
    }
}

#[test]
fn monte_carlo_matches_closed_form() {
    let h = GaussianSet::halfspace(vec![1.0, 2.0, -2.0], 2.1).unwrap();
    let est = mc_noise_stability(&h, 0.3, &McConfig::new(1_000_000, 17)).unwrap();
    let want = halfspace_stability_closed(0.7, 0.3);
    assert!(est.agrees_with(want, 3.0), "{est:?} vs {want}");
    let far = mc_noise_stability(&h, 30.0, &McConfig::new(400_000, 18)).unwrap();
    assert!(far.agrees_with(phi_cdf(0.7).powi(2), 3.0), "{far:?}");
}

#[test]
fn stability_dominates_squared_measure() {
    let sets = [
        GaussianSet::standard_ball(6).unwrap(),
        GaussianSet::gaussian_block_ball(2).unwrap(),
        GaussianSet::lifted(and_indicator(3).unwrap()).unwrap(),
    ];
    for (k, s) in sets.iter().enumerate() {
        let cfg = McConfig::new(200_000, 40 + k as u64);
        let g = mc_noise_stability(s, 0.0, &cfg).unwrap();
        for t in [0.1, 0.5, 2.0] {
            let st = mc_noise_stability(s, t, &cfg.derive(1)).unwrap();
            let slack = 3.0 * (st.stderr.powi(2) + (2.0 * g.value * g.stderr).powi(2)).sqrt();
            assert!(st.value - g.value.powi(2) >= -slack, "set {k} t={t}");
        }
    }
}

#[test]
fn level_one_weight_estimates() {
    let h = GaussianSet::coordinate_halfspace(4, 2, 0.0).unwrap();
    let w = estimate_w1_gaussian(&h, &McConfig::new(500_000, 5));
    assert!(w.agrees_with(1.0 / (2.0 * PI), 3.0), "{w:?}");
    let ball = GaussianSet::standard_ball(5).unwrap();
    let w = estimate_w1_gaussian(&ball, &McConfig::new(500_000, 6));
    assert!(w.agrees_with(0.0, 3.0), "{w:?}");
    let c = estimate_w1(3, |_| 1.0, &McConfig::new(100_000, 7));
    assert!(c.agrees_with(0.0, 3.0), "{c:?}");
}

#[test]
fn exp_w1_inequality() {
    let h = GaussianSet::coordinate_halfspace(3, 0, 0.3).unwrap();
    let r = check_exp_w1(&h, 0.5, &McConfig::new(400_000, 8)).unwrap();
    assert!(r.pass && r.rhs_closed_form, "{r:?}");

    let ball = GaussianSet::standard_ball(8).unwrap();
    let r = check_exp_w1(&ball, 0.5, &McConfig::new(1_000_000, 9)).unwrap();
    assert!(r.pass, "{r:?}");

    let everything = GaussianSet::ball(vec![0.0; 2], 1e6).unwrap();
    let r = check_exp_w1(&everything, 0.5, &McConfig::new(10_000, 10)).unwrap();
    assert!(r.lhs.agrees_with(0.0, 3.0), "{r:?}");
    assert_eq!(r.rhs.value, 0.0);
    assert!(r.pass);
}

#[test]
fn converse_identity() {
    let h = GaussianSet::coordinate_halfspace(2, 1, -0.4).unwrap();
    let c = check_converse_identity(&h, 0.7, 0.3, &McConfig::new(20_000, 11)).unwrap();
    assert!(c.pass, "{c:?}");
    let ball = GaussianSet::standard_ball(4).unwrap();
    let c = check_converse_identity(&ball, 0.5, 0.4, &McConfig::new(400_000, 12)).unwrap();
    assert!(c.pass, "{c:?}");
    let r = converse_r(0.5, 0.4);
    let lhs = (-2.0 * r).exp();
    let rhs = (-1.0f64).exp() + (-0.8f64).exp() - (-1.8f64).exp();
    assert!((lhs - rhs).abs() < 1e-15);
}

#[test]
fn ball_is_rotation_invariant_and_weakly_correlated() {
    let r = ball_experiments(&BallConfig::new(16, McConfig::new(200_000, 13))).unwrap();
    assert!(r.rotation_pass, "{:?}", r.rotation);
    assert!(r.cov_pass && r.shifted_cov2_pass, "{r:?}");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn shifted_membership(
        t in 0.05f64..3.0,
        y in prop::collection::vec(-3.0f64..3.0, 3),
        x in prop::collection::vec(-3.0f64..3.0, 3),
        a in prop::collection::vec(-1.0f64..1.0, 3),
        b in -1.0f64..1.0,
        r in 0.1f64..3.0,
    ) {
        prop_assume!(a.iter().any(|v| v.abs() > 1e-3));
        let ss = ShiftScale::new(t, y).unwrap();
        let image = ss.apply(&x);
        for set in [GaussianSet::halfspace(a.clone(), b).unwrap(), GaussianSet::ball(a.clone(), r).unwrap()] {
            let shifted = shift_scale(&set, &ss).unwrap();
            prop_assert_eq!(shifted.kind_name(), set.kind_name());
            // stay away from the boundary where rounding could flip membership
            let margin = match &set {
                GaussianSet::HalfSpace { a, b } => (a.iter().zip(&image).map(|(a, x)| a * x).sum::<f64>() - b).abs(),
                GaussianSet::Ball { center, radius } => {
                    (center.iter().zip(&image).map(|(c, x)| (x - c).powi(2)).sum::<f64>().sqrt() - radius).abs()
                }
                _ => 1.0,
            };
            prop_assume!(margin > 1e-9);
            prop_assert_eq!(shifted.contains(&x), set.contains(&image));
        }
    }
}

#[test]
fn shifted_m2_for_halfspaces_and_balls() {
    use stability_lab_core::gaussian::expected_shifted_m2;
    // s large: f_{s,Y} is nearly f itself, M = p(1-p) with p = Phi(b)
    let h = GaussianSet::coordinate_halfspace(2, 0, 0.5).unwrap();
    let m = expected_shifted_m2(&h, 20.0, &McConfig::new(2_000, 1)).unwrap();
    let p = phi_cdf(0.5);
    assert!(m.exact_m && (m.value.value - (p * (1.0 - p)).powi(2)).abs() < 1e-7);
    let ball = GaussianSet::standard_ball(4).unwrap();
    let m = expected_shifted_m2(&ball, 0.5, &McConfig::new(100_000, 2)).unwrap();
    assert!(!m.exact_m && m.value.value >= 0.0 && m.value.value <= 1.0 / 16.0);
}

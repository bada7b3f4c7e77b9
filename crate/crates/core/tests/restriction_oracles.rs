//! Random restrictions against brute-force enumeration of `{-1,0,1}^n`.

use proptest::prelude::*;
use stability_lab_core::corpus::standard_corpus;
use stability_lab_core::fourier::{character, coord};
use stability_lab_core::restriction::{
    apply_restriction, expected_restricted_w1, for_each_restriction, restricted_level1_coeff,
    restriction_expectation, ExpectationMode,
};
use stability_lab_core::stats::McConfig;
use stability_lab_core::{BooleanFunction, RangeTag, Restriction, RestrictionLaw};

/// Every `z` in `{-1,0,1}^n` with its `mu_t` probability, built independently
/// of the library's odometer.
fn all_restrictions(n: usize, t: f64) -> Vec<(Vec<i8>, f64)> {
    let p0 = (-t).exp();
    let p1 = (1.0 - p0) / 2.0;
    let mut out = vec![(Vec::new(), 1.0)];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|(z, w)| {
                [(-1i8, p1), (0, p0), (1, p1)].into_iter().map(move |(v, p)| {
                    let mut z = z.clone();
                    z.push(v);
                    (z, w * p)
                })
            })
            .collect();
    }
    out
}

/// `f_z(x)` straight from the definition.
fn restricted_value(f: &BooleanFunction, z: &[i8], x: usize) -> f64 {
    let y: Vec<i8> = z
        .iter()
        .enumerate()
        .map(|(i, &zi)| if zi == 0 { coord(x, i) } else { zi })
        .collect();
    f.eval(&y)
}

fn naive_pt(f: &BooleanFunction, t: f64, x: usize) -> f64 {
    let rho = (-t).exp();
    (0..f.len())
        .map(|y| {
            let k: f64 = (0..f.n())
                .map(|i| (1.0 + rho * f64::from(coord(x, i) * coord(y, i))) / 2.0)
                .product();
            k * f.at(y)
        })
        .sum()
}

fn naive_w1(n: usize, g: impl Fn(usize) -> f64) -> f64 {
    (0..n)
        .map(|i| {
            let c: f64 = (0..1usize << n).map(|x| g(x) * character(1 << i, x)).sum::<f64>() / (1usize << n) as f64;
            c * c
        })
        .sum()
}

fn random_table(n: usize, seed: u64) -> BooleanFunction {
    let mut s = seed;
    BooleanFunction::from_index_fn(n, RangeTag::Indicator, |_| {
        s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        (s >> 11) as f64 / (1u64 << 53) as f64
    })
    .unwrap()
}

#[test]
fn enumeration_weights_sum_to_one() {
    let law = RestrictionLaw::new(0.3).unwrap();
    let mut total = 0.0;
    let mut count = 0;
    for_each_restriction(5, &law, |_, w| {
        total += w;
        count += 1;
    });
    assert_eq!(count, 243);
    assert!((total - 1.0).abs() < 1e-14);
}

#[test]
fn expectation_of_restrictions_is_smoothing() {
    for n in 1..=6 {
        let f = random_table(n, n as u64);
        for t in [0.1, 0.5, 1.0] {
            let zs = all_restrictions(n, t);
            let mut worst: f64 = 0.0;
            for x in 0..f.len() {
                let avg: f64 = zs.iter().map(|(z, w)| w * restricted_value(&f, z, x)).sum();
                worst = worst.max((avg - naive_pt(&f, t, x)).abs());
            }
            assert!(worst <= 1e-12, "n={n} t={t}: {worst}");
        }
    }
}

#[test]
fn library_restriction_matches_definition() {
    let f = random_table(4, 99);
    for (z, _) in all_restrictions(4, 1.0) {
        let r = Restriction::new(z.clone()).unwrap();
        let g = apply_restriction(&f, &r).unwrap();
        for x in 0..16 {
            assert_eq!(g.at(x), restricted_value(&f, &z, x));
        }
    }
}

#[test]
fn restricted_weight_closed_form_vs_enumeration() {
    for (name, f) in standard_corpus(6) {
        let n = f.n();
        for t in [0.1f64, 0.5, 1.0, 2.0] {
            let s = -(1.0 - (-t).exp()).ln();
            let enumerated: f64 = all_restrictions(n, s)
                .iter()
                .map(|(z, w)| w * naive_w1(n, |x| restricted_value(&f, z, x)))
                .sum();
            let closed = expected_restricted_w1(&f, t).unwrap();
            assert!((closed.exact - enumerated).abs() <= 1e-10, "{name} t={t}");
            assert!(enumerated >= closed.stated_bound - 1e-12, "{name} t={t}");
            assert!(closed.stated_bound >= closed.variance_bound - 1e-12, "{name} t={t}");
        }
    }
}

#[test]
fn sampled_expectation_agrees_with_exact() {
    let f = random_table(5, 3);
    let law = RestrictionLaw::new(0.7).unwrap();
    let stat = |g: &BooleanFunction| g.variance();
    let exact = restriction_expectation(&f, &law, ExpectationMode::Exact, stat).unwrap();
    let sampled = restriction_expectation(&f, &law, ExpectationMode::Sampled(McConfig::new(100_000, 5)), stat).unwrap();
    assert!(sampled.agrees_with(exact.value, 4.0), "{sampled:?} vs {exact:?}");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn restricted_coefficient_matches_table(seed in any::<u64>(), zs in prop::collection::vec(-1i8..=1, 5), i in 0usize..5) {
        let f = random_table(5, seed);
        let z = Restriction::new(zs.clone()).unwrap();
        let c = restricted_level1_coeff(&f, &z, i).unwrap();
        let direct: f64 = (0..32).map(|x| restricted_value(&f, &zs, x) * character(1 << i, x)).sum::<f64>() / 32.0;
        prop_assert!((c - direct).abs() < 1e-12);
    }

    #[test]
    fn restriction_composes(seed in any::<u64>(), a in prop::collection::vec(-1i8..=1, 4), b in prop::collection::vec(-1i8..=1, 4)) {
        let f = random_table(4, seed);
        let (za, zb) = (Restriction::new(a).unwrap(), Restriction::new(b).unwrap());
        let twice = apply_restriction(&apply_restriction(&f, &za).unwrap(), &zb).unwrap();
        let merged = apply_restriction(&f, &za.merge(&zb).unwrap()).unwrap();
        prop_assert_eq!(twice.values(), merged.values());
    }
}

//! Registry functions against their defining formulas.

use stability_lab_core::corpus::{
    block_ball, builtin, mixed_example, standard_corpus, tribes_width, BlockSpec, Builtin,
};
use stability_lab_core::fourier::decode;
use stability_lab_core::halfspace::{exact_m, heuristic_m, HeuristicBudget};
use stability_lab_core::restriction::apply_restriction;
use stability_lab_core::{level1_weight, var_pt, wht, NoiseParam, Restriction};

fn sum(x: &[i8]) -> i32 {
    x.iter().map(|&v| i32::from(v)).sum()
}

#[test]
fn builtins_satisfy_their_definitions() {
    for n in 1..=12 {
        let d = builtin("dictator", n).unwrap();
        let p = builtin("parity", n).unwrap();
        let a = builtin("and-indicator", n).unwrap();
        let t = builtin("tribes", n).unwrap();
        let w = tribes_width(n);
        let maj = (n % 2 == 1).then(|| builtin("majority", n).unwrap());
        for idx in 0..1usize << n {
            let x = decode(idx, n);
            assert_eq!(d.at(idx), f64::from(x[0]));
            assert_eq!(p.at(idx), x.iter().map(|&v| f64::from(v)).product::<f64>());
            assert_eq!(a.at(idx), if x.iter().all(|&v| v == -1) { 1.0 } else { 0.0 });
            let any_tribe = (0..n).step_by(w).any(|s| x[s..(s + w).min(n)].iter().all(|&v| v == -1));
            assert_eq!(t.at(idx), if any_tribe { -1.0 } else { 1.0 });
            if let Some(m) = &maj {
                assert_eq!(m.at(idx), f64::from(sum(&x).signum()));
            }
        }
    }
}

#[test]
fn block_ball_definition_and_symmetries() {
    for m in 1..=4 {
        let f = block_ball(m).unwrap();
        let spec = BlockSpec::new(m).unwrap();
        for idx in (0..f.len()).step_by(7) {
            let x = decode(idx, m * m);
            let q: f64 = spec
                .blocks()
                .map(|r| (sum(&x[r]) as f64 / (m as f64).sqrt()).powi(2))
                .sum();
            assert_eq!(f.at(idx) == 1.0, q <= m as f64 + 1e-9, "m={m} idx={idx}");
        }
    }
    // exhaustive symmetry check at m = 2: swap within a block, swap blocks
    let f = block_ball(2).unwrap();
    for perm in [[1, 0, 2, 3], [0, 1, 3, 2], [2, 3, 0, 1]] {
        assert_eq!(f.relabel(&perm, 0).unwrap().values(), f.values());
    }
    // per-block sums lie in {-2,0,2}; the point is excluded iff both are nonzero
    let enumerated = (0..16)
        .filter(|&idx| {
            let x = decode(idx, 4);
            sum(&x[0..2]) == 0 || sum(&x[2..4]) == 0
        })
        .count();
    assert_eq!(enumerated, 12);
    assert!((f.mean() - 0.75).abs() < 1e-15);
}

#[test]
fn mixed_example_restrictions() {
    let f = mixed_example(5).unwrap();
    let plus = Restriction::new(vec![1, 0, 0, 0, 0]).unwrap();
    let minus = Restriction::new(vec![-1, 0, 0, 0, 0]).unwrap();
    let fp = apply_restriction(&f, &plus).unwrap().to_unit_interval();
    let fm = apply_restriction(&f, &minus).unwrap();
    assert!((exact_m(&fp).unwrap().value - 0.25).abs() < 1e-12);
    assert!(level1_weight(&fm).abs() < 1e-15);
    let fm01 = fm.to_unit_interval();
    let h = heuristic_m(&fm01, &HeuristicBudget::default()).unwrap();
    assert!(h.value <= exact_m(&fm01).unwrap().value + 1e-12);

    // four coefficients of size 1/2 on sets of sizes 1, 2, 3, 4
    let spec = wht(&f);
    assert!((spec.coeff(0b00010) - 0.5).abs() < 1e-15);
    assert!((spec.coeff(0b00011) - 0.5).abs() < 1e-15);
    assert!((spec.coeff(0b11100) - 0.5).abs() < 1e-15);
    assert!((spec.coeff(0b11101) + 0.5).abs() < 1e-15);
    for t in [0.1f64, 0.5, 1.0] {
        let v = var_pt(&f, NoiseParam::new(t).unwrap());
        assert!(v >= (-2.0 * t).exp() / 4.0);
    }
}

#[test]
fn names_round_trip() {
    for (name, f) in standard_corpus(8) {
        let b: Builtin = name.parse().unwrap();
        assert_eq!(b.build().unwrap(), f);
    }
}

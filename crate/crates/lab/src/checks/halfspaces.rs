//! `exact_M` against doubly exhaustive search, and the linear-form moment
//! bound behind the level-1 half-space construction.

use rand::Rng;
use stability_lab_core::halfspace::{exact_m_with, is_separable, linear_form_moments};
use stability_lab_core::BooleanFunction;

use super::timed;
use crate::report::{CheckReport, Relation};
use crate::{catalogs, Context, Result};

pub const M_TOL: f64 = 1e-9;
pub const RANDOM_FUNCTIONS_N4: usize = 200;
pub const LINEAR_FORMS: usize = 100;
pub const LINEAR_FORM_DIM: usize = 12;

/// Every subset of `{-1,1}^n` certified separable by the LP, as bitmasks.
pub fn separable_subsets(n: usize) -> Result<Vec<u64>> {
    let size = 1usize << n;
    let mut out = Vec::new();
    let mut inside = vec![false; size];
    for mask in 0..1u64 << size {
        for (x, slot) in inside.iter_mut().enumerate() {
            *slot = mask >> x & 1 == 1;
        }
        if is_separable(n, &inside)?.is_some() {
            out.push(mask);
        }
    }
    Ok(out)
}

/// `max_S Cov(f, 1_S)` over an explicit list of subsets.
pub fn brute_force_m(f: &BooleanFunction, subsets: &[u64]) -> f64 {
    let mean = f.mean();
    let size = f.len() as f64;
    subsets
        .iter()
        .map(|&mask| {
            (0..f.len())
                .filter(|&x| mask >> x & 1 == 1)
                .map(|x| f.at(x) - mean)
                .sum::<f64>()
                / size
        })
        .fold(f64::NEG_INFINITY, f64::max)
}

fn mask_indicator(n: usize, mask: u64) -> BooleanFunction {
    BooleanFunction::indicator(n, |x| mask >> x & 1 == 1).expect("dimension is valid")
}

fn compare(id: String, n: usize, fs: &[BooleanFunction], subsets: &[u64]) -> Result<CheckReport> {
    let mut worst = 0.0f64;
    for f in fs {
        let exact = exact_m_with(f, catalogs())?.value;
        worst = worst.max((exact - brute_force_m(f, subsets)).abs());
    }
    Ok(CheckReport::new(id, worst, Relation::AtMost, 0.0, M_TOL)
        .n(n)
        .extra("functions", fs.len())
        .extra("separable_subsets", subsets.len()))
}

/// All 0/1 functions at `n = 2, 3` and random ones at `n = 4`.
pub fn exact_m_vs_brute_force(ctx: &Context) -> Result<Vec<CheckReport>> {
    let mut out = Vec::new();
    for n in [2usize, 3] {
        let start = std::time::Instant::now();
        let subsets = separable_subsets(n)?;
        let fs: Vec<BooleanFunction> = (0..1u64 << (1 << n)).map(|m| mask_indicator(n, m)).collect();
        let mut r = compare(format!("exact-m/brute-force/n={n}"), n, &fs, &subsets)?;
        r.runtime_ms = start.elapsed().as_secs_f64() * 1e3;
        out.push(r);
    }
    let start = std::time::Instant::now();
    let subsets = separable_subsets(4)?;
    let mut rng = ctx.mc("exact-m/n=4").rng(0);
    let fs: Vec<BooleanFunction> = (0..RANDOM_FUNCTIONS_N4)
        .map(|_| mask_indicator(4, rng.random::<u64>() & 0xffff))
        .collect();
    let mut r = compare("exact-m/brute-force/n=4".into(), 4, &fs, &subsets)?;
    r.runtime_ms = start.elapsed().as_secs_f64() * 1e3;
    out.push(r.mc(ctx.seed, RANDOM_FUNCTIONS_N4));
    Ok(out)
}

/// `M(1_{x1 x2 = 1}) = 1/8` and `M(1_{x1 = -1}) = 1/4`.
pub fn exact_m_fixtures(_ctx: &Context) -> Result<Vec<CheckReport>> {
    let fixtures = [
        ("parity2-indicator", BooleanFunction::indicator(2, |x| x.count_ones() % 2 == 0)?, 0.125),
        ("x1-negative", BooleanFunction::indicator(1, |x| x & 1 == 1)?, 0.25),
    ];
    let mut out = Vec::new();
    for (name, f, expected) in fixtures {
        let m = exact_m_with(&f, catalogs())?.value;
        out.push(timed(|| {
            CheckReport::new(format!("exact-m/fixture/{name}"), m, Relation::Equal, expected, M_TOL)
                .function(name)
                .n(f.n())
        }));
    }
    Ok(out)
}

/// `E|l| >= ||a||/20` and `E[l 1_{l >= 0}] >= ||a||/40` for random weights
/// `a` in dimension 12; one report per inequality holding the worst ratio.
pub fn linear_form_bounds(ctx: &Context) -> Result<Vec<CheckReport>> {
    let start = std::time::Instant::now();
    let mut rng = ctx.mc("linear-forms").rng(0);
    let (mut abs_ratio, mut pos_ratio) = (f64::INFINITY, f64::INFINITY);
    let mut half_gap = 0.0f64;
    for k in 0..LINEAR_FORMS {
        // vary the sparsity so that near-dictator weights are covered
        let keep = 1.0 / (1 + k % 6) as f64;
        let mut a: Vec<f64> = (0..LINEAR_FORM_DIM)
            .map(|_| if rng.random::<f64>() < keep { rng.random_range(-1.0..1.0) } else { 0.0 })
            .collect();
        if a.iter().all(|&v| v == 0.0) {
            a[k % LINEAR_FORM_DIM] = 1.0;
        }
        let norm = a.iter().map(|v| v * v).sum::<f64>().sqrt();
        let (abs_mean, pos_part) = linear_form_moments(&a);
        abs_ratio = abs_ratio.min(abs_mean / norm);
        pos_ratio = pos_ratio.min(pos_part / norm);
        half_gap = half_gap.max((pos_part - abs_mean / 2.0).abs());
    }
    let ms = start.elapsed().as_secs_f64() * 1e3;
    let mut abs = CheckReport::new("linear-form/abs-mean", abs_ratio, Relation::AtLeast, 1.0 / 20.0, 0.0)
        .n(LINEAR_FORM_DIM)
        .mc(ctx.seed, LINEAR_FORMS)
        .extra("statistic", "min over vectors of E|l| / ||a||");
    let mut pos = CheckReport::new("linear-form/positive-part", pos_ratio, Relation::AtLeast, 1.0 / 40.0, 0.0)
        .n(LINEAR_FORM_DIM)
        .mc(ctx.seed, LINEAR_FORMS)
        .extra("statistic", "min over vectors of E[l 1_{l >= 0}] / ||a||")
        .extra("max_abs_half_gap", half_gap);
    abs.runtime_ms = ms;
    pos.runtime_ms = ms;
    Ok(vec![abs, pos])
}

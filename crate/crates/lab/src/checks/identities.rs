//! Fourier identities, the restriction identity `E f_Z = P_t f` and the
//! expected level-1 weight of a random restriction.

use stability_lab_core::corpus::standard_corpus;
use stability_lab_core::restriction::{
    expected_restricted_w1, for_each_restriction, restriction_expectation, ExpectationMode,
};
use stability_lab_core::{level1_weight, noise_operator, wht, wht_inverse, BooleanFunction, NoiseParam, RestrictionLaw};

use super::{random_function, restriction_time, timed};
use crate::report::{CheckReport, Relation};
use crate::{Context, Result};

pub const IDENTITY_TOL: f64 = 1e-10;
pub const FUNCTIONS_PER_DIM: usize = 50;
pub const MAX_IDENTITY_DIM: usize = 10;
pub const MAX_RESTRICTION_DIM: usize = 6;
pub const RESTRICTION_TIMES: [f64; 3] = [0.1, 0.5, 1.0];

fn sup_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

/// `E[f P_t f]` by summing the noise kernel over all pairs, which depends
/// only on the Hamming distance.
fn stability_by_kernel(f: &BooleanFunction, t: f64) -> f64 {
    let n = f.n();
    let rho = (-t).exp();
    let (same, diff) = ((1.0 + rho) / 2.0, (1.0 - rho) / 2.0);
    let kernel: Vec<f64> = (0..=n).map(|d| same.powi((n - d) as i32) * diff.powi(d as i32)).collect();
    let size = f.len();
    let mut total = 0.0;
    for x in 0..size {
        let fx = f.at(x);
        if fx == 0.0 {
            continue;
        }
        let inner: f64 = (0..size).map(|y| kernel[(x ^ y).count_ones() as usize] * f.at(y)).sum();
        total += fx * inner;
    }
    total / size as f64
}

/// Parseval, inversion, the semigroup law and `S_t(A) = mu^2 + Var(P_{t/2} 1_A)`
/// on random tables, one report per identity and dimension.
pub fn fourier_identities(ctx: &Context) -> Result<Vec<CheckReport>> {
    let mut out = Vec::new();
    for n in 1..=MAX_IDENTITY_DIM {
        let mut rng = ctx.mc(&format!("identities/{n}")).rng(0);
        let fs: Vec<BooleanFunction> = (0..FUNCTIONS_PER_DIM).map(|k| random_function(n, k, &mut rng)).collect();
        let ts: Vec<(f64, f64)> = (0..FUNCTIONS_PER_DIM)
            .map(|_| (rand::Rng::random_range(&mut rng, 0.01..2.0), rand::Rng::random_range(&mut rng, 0.01..2.0)))
            .collect();
        let report = |name: &str, err: f64| {
            CheckReport::new(format!("identities/{name}/n={n:02}"), err, Relation::AtMost, 0.0, IDENTITY_TOL)
                .n(n)
                .extra("functions", FUNCTIONS_PER_DIM)
        };

        out.push(timed(|| {
            let err = fs
                .iter()
                .map(|f| (wht(f).total_weight() - f.second_moment()).abs())
                .fold(0.0, f64::max);
            report("parseval", err)
        }));
        out.push(timed(|| {
            let err = fs
                .iter()
                .map(|f| sup_diff(wht_inverse(&wht(f)).values(), f.values()))
                .fold(0.0, f64::max);
            report("involution", err)
        }));
        out.push(timed(|| {
            let err = fs
                .iter()
                .zip(&ts)
                .map(|(f, &(s, t))| {
                    let p = |t: f64| NoiseParam::new(t).expect("positive time");
                    let two_steps = noise_operator(&noise_operator(f, p(s)), p(t));
                    sup_diff(two_steps.values(), noise_operator(f, p(s + t)).values())
                })
                .fold(0.0, f64::max);
            report("semigroup", err)
        }));
        out.push(timed(|| {
            // the identity concerns sets, so only the 0/1 tables take part
            let err = fs
                .iter()
                .zip(&ts)
                .filter(|(f, _)| f.is_zero_one())
                .map(|(f, &(_, t))| {
                    let lhs = stability_by_kernel(f, t);
                    let rhs = f.mean().powi(2) + wht(f).var_pt(t / 2.0);
                    (lhs - rhs).abs()
                })
                .fold(0.0, f64::max);
            report("stability-split", err).extra("t", "random in [0.01, 2)")
        }));
    }
    Ok(out)
}

fn restriction_functions(n: usize, ctx: &Context) -> Vec<(String, BooleanFunction)> {
    let mut fs: Vec<(String, BooleanFunction)> =
        standard_corpus(n).into_iter().filter(|(_, f)| f.n() == n).collect();
    let mut rng = ctx.mc(&format!("restriction-identity/{n}")).rng(0);
    for k in 0..4 {
        fs.push((format!("random-{k}"), random_function(n, k, &mut rng)));
    }
    fs
}

/// `sup_x |E_Z f_Z(x) - P_t f(x)|` with the expectation taken over all `3^n`
/// restrictions.
pub fn restriction_identity(ctx: &Context) -> Result<Vec<CheckReport>> {
    let mut out = Vec::new();
    for n in 1..=MAX_RESTRICTION_DIM {
        let fs = restriction_functions(n, ctx);
        for &t in &RESTRICTION_TIMES {
            out.push(timed(|| {
                let law = RestrictionLaw::new(t).expect("positive time");
                let err = fs
                    .iter()
                    .map(|(_, f)| {
                        let mut avg = vec![0.0; f.len()];
                        for_each_restriction(n, &law, |z, w| {
                            for (x, a) in avg.iter_mut().enumerate() {
                                *a += w * f.at(z.substitute(x));
                            }
                        });
                        let smooth = noise_operator(f, NoiseParam::new(t).expect("positive time"));
                        sup_diff(&avg, smooth.values())
                    })
                    .fold(0.0, f64::max);
                CheckReport::new(
                    format!("restriction-identity/n={n:02}/t={t}"),
                    err,
                    Relation::AtMost,
                    0.0,
                    IDENTITY_TOL,
                )
                .n(n)
                .t(t)
                .extra("functions", fs.iter().map(|(name, _)| name.as_str()).collect::<Vec<_>>())
            }));
        }
    }
    Ok(out)
}

/// Closed form of `E[w1(f_{Z_s})]`, `e^{-s} = 1 - e^{-t}`, against exhaustive
/// enumeration, and its domination of `(e^{2t} - e^t) Var(P_t f)`.
pub fn restriction_weight(_ctx: &Context) -> Result<Vec<CheckReport>> {
    let mut out = Vec::new();
    for (name, f) in standard_corpus(MAX_RESTRICTION_DIM) {
        for &t in &RESTRICTION_TIMES {
            let s = restriction_time(t);
            let law = RestrictionLaw::new(s)?;
            let start = std::time::Instant::now();
            let enumerated = restriction_expectation(&f, &law, ExpectationMode::Exact, level1_weight)?.value;
            let closed = expected_restricted_w1(&f, t)?;
            let ms = start.elapsed().as_secs_f64() * 1e3;

            let mut eq = CheckReport::new(
                format!("restriction-weight/closed-form/{name}/t={t}"),
                closed.exact,
                Relation::Equal,
                enumerated,
                IDENTITY_TOL,
            )
            .function(&name)
            .n(f.n())
            .t(t)
            .s(s)
            .extra("stated_bound", closed.stated_bound);
            eq.runtime_ms = ms;
            out.push(eq);

            let ordered = enumerated + 1e-12 >= closed.stated_bound && closed.stated_bound + 1e-12 >= closed.variance_bound;
            let mut dom = CheckReport::new(
                format!("restriction-weight/dominance/{name}/t={t}"),
                enumerated,
                Relation::AtLeast,
                closed.variance_bound,
                1e-12,
            )
            .function(&name)
            .n(f.n())
            .t(t)
            .s(s)
            .extra("stated_bound", closed.stated_bound)
            .extra("stated_bound_in_between", ordered);
            dom.runtime_ms = ms;
            out.push(dom);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use stability_lab_core::corpus::dictator;

    #[test]
    fn kernel_stability_of_a_dictator() {
        let f = dictator(3).unwrap().to_unit_interval();
        // E[f P_t f] = 1/4 + e^{-t}/4
        let t = 0.7;
        assert!((stability_by_kernel(&f, t) - 0.25 * (1.0 + (-t).exp())).abs() < 1e-14);
    }
}

//! The block-ball sets `B^(m)`: noise stable, yet the best covariance with a
//! half-space found by the engines shrinks as `m` grows.

use stability_lab_core::corpus::block_ball;
use stability_lab_core::halfspace::{exact_m_with, heuristic_m, HeuristicBudget};
use stability_lab_core::{wht, Method};

use crate::report::{CheckReport, Relation};
use crate::{catalogs, Context, Result};

pub const DECAY_BLOCKS: [usize; 3] = [2, 3, 4];
pub const DECAY_T: f64 = 0.2;
pub const STABILITY_FLOOR: f64 = 0.05;

#[derive(Debug, Clone, PartialEq)]
pub struct DecayPoint {
    pub m: usize,
    pub var_pt: f64,
    pub best_cov: f64,
    pub method: Method,
    pub runtime_ms: f64,
}

/// `Var(P_t 1_{B^(m)})` exactly and the best covariance found: exact `M`
/// when `m^2 <= 5`, otherwise the heuristic, which is only a lower bound.
pub fn decay_point(m: usize, t: f64) -> Result<DecayPoint> {
    let start = std::time::Instant::now();
    let f = block_ball(m)?;
    let var_pt = wht(&f).var_pt(t);
    let r = if f.n() <= catalogs().max_dim() {
        exact_m_with(&f, catalogs())?
    } else {
        heuristic_m(&f, &HeuristicBudget::default())?
    };
    Ok(DecayPoint {
        m,
        var_pt,
        best_cov: r.value,
        method: r.method,
        runtime_ms: start.elapsed().as_secs_f64() * 1e3,
    })
}

fn label(method: Method) -> &'static str {
    match method {
        Method::Exact => "exact",
        Method::Heuristic => "lower bound (heuristic)",
    }
}

pub fn counterexample_decay(_ctx: &Context) -> Result<Vec<CheckReport>> {
    let points = DECAY_BLOCKS
        .iter()
        .map(|&m| decay_point(m, DECAY_T))
        .collect::<Result<Vec<_>>>()?;
    let mut out = Vec::new();
    for p in &points {
        let n = p.m * p.m;
        let mut r = CheckReport::new(
            format!("decay/stability/block-ball:{}", p.m),
            p.var_pt,
            Relation::AtLeast,
            STABILITY_FLOOR,
            0.0,
        )
        .function(format!("block-ball:{}", p.m))
        .n(n)
        .t(DECAY_T)
        .extra("best_cov", p.best_cov)
        .extra("best_cov_kind", label(p.method));
        r.runtime_ms = p.runtime_ms;
        out.push(r);
    }
    for w in points.windows(2) {
        let (a, b) = (&w[0], &w[1]);
        out.push(
            CheckReport::new(
                format!("decay/monotone/block-ball:{}-to-{}", a.m, b.m),
                b.best_cov,
                Relation::AtMost,
                a.best_cov,
                0.0,
            )
            .n(b.m * b.m)
            .t(DECAY_T)
            .extra("from_kind", label(a.method))
            .extra("to_kind", label(b.method))
            .extra("note", "heuristic values are lower bounds on M; decay is reported, not proven"),
        );
    }
    Ok(out)
}

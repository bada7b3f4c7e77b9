//! Strict linear separability by margin maximization.
//!
//! For labelled points `x_p` we solve
//!
//! ```text
//! max m  s.t.  <a,x_p> - b + m <= 0   (p inside)
//!              b - <a,x_p> + m <= 0   (p outside)
//!              |a_i| <= 1, |b| <= 1, 0 <= m <= 1
//! ```
//!
//! with free variables split into nonnegative parts. The origin is feasible,
//! so a single-phase dense simplex with Bland's rule suffices.

use alloc::vec;
use alloc::vec::Vec;

/// Margins at or below this value count as "not separable".
pub const MARGIN_THRESHOLD: f64 = 1e-7;

const PIVOT_EPS: f64 = 1e-12;

/// Optimal solution of the margin program.
#[derive(Debug, Clone, PartialEq)]
pub struct Separator {
    pub a: Vec<f64>,
    pub b: f64,
    pub margin: f64,
}

/// Maximizes the separation margin of `inside` from the other points.
/// `points` is row-major with `dim` coordinates per point.
pub fn max_margin(points: &[f64], dim: usize, inside: &[bool]) -> Separator {
    let np = inside.len();
    debug_assert_eq!(points.len(), np * dim);
    // a+ (dim), a- (dim), b+, b-, m
    let nv = 2 * dim + 3;
    let m_col = nv - 1;
    let rows = np + nv;
    let cols = nv + rows + 1;
    let rhs = cols - 1;
    let mut t = vec![0.0; (rows + 1) * cols];

    for (p, &ins) in inside.iter().enumerate() {
        let row = &mut t[p * cols..(p + 1) * cols];
        let sign = if ins { 1.0 } else { -1.0 };
        let x = &points[p * dim..(p + 1) * dim];
        for i in 0..dim {
            row[i] = sign * x[i];
            row[dim + i] = -sign * x[i];
        }
        row[2 * dim] = -sign;
        row[2 * dim + 1] = sign;
        row[m_col] = 1.0;
        row[nv + p] = 1.0;
    }
    for v in 0..nv {
        let r = np + v;
        let row = &mut t[r * cols..(r + 1) * cols];
        row[v] = 1.0;
        row[nv + r] = 1.0;
        row[rhs] = 1.0;
    }
    // objective row: reduced costs of maximizing m
    t[rows * cols + m_col] = -1.0;

    let mut basis: Vec<usize> = (0..rows).map(|r| nv + r).collect();

    loop {
        let obj = &t[rows * cols..(rows + 1) * cols];
        let Some(enter) = (0..cols - 1).find(|&c| obj[c] < -PIVOT_EPS) else {
            break;
        };
        let mut leave: Option<(usize, f64)> = None;
        for r in 0..rows {
            let coef = t[r * cols + enter];
            if coef > PIVOT_EPS {
                let ratio = t[r * cols + rhs] / coef;
                leave = match leave {
                    None => Some((r, ratio)),
                    Some((lr, lratio)) => {
                        if ratio < lratio - PIVOT_EPS
                            || (ratio <= lratio + PIVOT_EPS && basis[r] < basis[lr])
                        {
                            Some((r, ratio))
                        } else {
                            Some((lr, lratio))
                        }
                    }
                };
            }
        }
        // bounded by the box rows, so a leaving row always exists
        let (lr, _) = leave.expect("margin program is bounded");
        pivot(&mut t, cols, lr, enter);
        basis[lr] = enter;
    }

    let mut x = vec![0.0; nv];
    for (r, &bv) in basis.iter().enumerate() {
        if bv < nv {
            x[bv] = t[r * cols + rhs];
        }
    }
    Separator {
        a: (0..dim).map(|i| x[i] - x[dim + i]).collect(),
        b: x[2 * dim] - x[2 * dim + 1],
        margin: x[m_col],
    }
}

fn pivot(t: &mut [f64], cols: usize, pr: usize, pc: usize) {
    let rows_total = t.len() / cols;
    let inv = 1.0 / t[pr * cols + pc];
    for c in 0..cols {
        t[pr * cols + c] *= inv;
    }
    t[pr * cols + pc] = 1.0;
    for r in 0..rows_total {
        if r == pr {
            continue;
        }
        let factor = t[r * cols + pc];
        if factor != 0.0 {
            for c in 0..cols {
                t[r * cols + c] -= factor * t[pr * cols + c];
            }
            t[r * cols + pc] = 0.0;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn square() -> Vec<f64> {
        // index convention: bit 0 -> x1, bit 1 -> x2, 0 -> +1
        alloc::vec![1.0, 1.0, -1.0, 1.0, 1.0, -1.0, -1.0, -1.0]
    }

    #[test]
    fn vertex_cut() {
        let s = max_margin(&square(), 2, &[true, false, false, false]);
        assert!(s.margin > MARGIN_THRESHOLD);
        // the witness classifies every point strictly
        let pts = square();
        for p in 0..4 {
            let v = s.a[0] * pts[2 * p] + s.a[1] * pts[2 * p + 1];
            if p == 0 {
                assert!(v <= s.b - s.margin + 1e-12);
            } else {
                assert!(v >= s.b + s.margin - 1e-12);
            }
        }
    }

    #[test]
    fn xor_is_not_separable() {
        let s = max_margin(&square(), 2, &[false, true, true, false]);
        assert!(s.margin <= MARGIN_THRESHOLD);
    }

    #[test]
    fn trivial_dichotomies() {
        assert!(max_margin(&square(), 2, &[false; 4]).margin > 0.5);
        assert!(max_margin(&square(), 2, &[true; 4]).margin > 0.5);
    }
}

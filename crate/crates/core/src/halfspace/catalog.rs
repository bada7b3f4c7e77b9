//! Enumeration of every threshold dichotomy of the cube `{-1,1}^n`, `n <= 5`.
//!
//! A separable dichotomy's closed cone of realizing `(a, b)` is pointed, so it
//! has an extreme ray: a hyperplane `H` spanned by cube points. Off `H` the
//! dichotomy follows the side of `H`; on `H` it is a separable dichotomy of
//! the points of `H` inside `H`. Enumerating hyperplanes spanned by points of
//! each flat and recursing into the flat of on-plane points (memoized by
//! point mask) therefore produces every dichotomy, and every product is
//! realized by nudging `H` with a witness of the on-plane dichotomy.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::rc::Rc;
use alloc::vec;
use alloc::vec::Vec;

use super::lp::{max_margin, MARGIN_THRESHOLD};
use super::HalfSpace;
use crate::fourier::coord;
#[allow(unused_imports)] // std float methods shadow it when std is linked
use crate::mathx::Float;
use crate::{Error, Result};

/// Largest cube dimension with a catalog.
pub const CATALOG_LIMIT: usize = 5;

const EPS: f64 = 1e-9;

/// Every separable subset of `{-1,1}^n` as a bitmask over table indices, with
/// an LP-certified witness half-space for each.
#[derive(Debug, Clone)]
pub struct ThresholdCatalog {
    n: usize,
    sets: Vec<u32>,
    witnesses: Vec<HalfSpace>,
}

impl ThresholdCatalog {
    pub fn build(n: usize) -> Result<Self> {
        if n == 0 || n > CATALOG_LIMIT {
            return Err(Error::TooLargeForExact {
                n,
                limit: CATALOG_LIMIT,
            });
        }
        let points: Vec<Point> = (0..1usize << n)
            .map(|idx| Point {
                bit: 1 << idx,
                x: (0..n).map(|i| f64::from(coord(idx, i))).collect(),
            })
            .collect();
        let mut memo = BTreeMap::new();
        let candidates = dichotomies(&points, n, &mut memo);

        let coords: Vec<f64> = points.iter().flat_map(|p| p.x.iter().copied()).collect();
        let mut sets = Vec::with_capacity(candidates.len());
        let mut witnesses = Vec::with_capacity(candidates.len());
        let mut inside = vec![false; points.len()];
        for &mask in candidates.iter() {
            for (p, slot) in inside.iter_mut().enumerate() {
                *slot = mask >> p & 1 == 1;
            }
            let sep = max_margin(&coords, n, &inside);
            if sep.margin > MARGIN_THRESHOLD {
                sets.push(mask);
                witnesses.push(HalfSpace::from_parts(sep.a, sep.b));
            } else {
                debug_assert!(false, "uncertified candidate {mask:#x}");
            }
        }
        Ok(Self { n, sets, witnesses })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.sets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sets.is_empty()
    }

    /// Member masks: bit `p` set when table index `p` lies in the half-space.
    pub fn sets(&self) -> &[u32] {
        &self.sets
    }

    pub fn witness(&self, i: usize) -> &HalfSpace {
        &self.witnesses[i]
    }

    pub fn contains(&self, mask: u32) -> bool {
        self.sets.binary_search(&mask).is_ok()
    }
}

/// Catalogs for every dimension `1..=max_dim`, shareable across threads.
#[derive(Debug, Clone)]
pub struct Catalogs {
    by_dim: Vec<ThresholdCatalog>,
}

impl Catalogs {
    pub fn up_to(max_dim: usize) -> Result<Self> {
        let by_dim = (1..=max_dim)
            .map(ThresholdCatalog::build)
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { by_dim })
    }

    pub fn max_dim(&self) -> usize {
        self.by_dim.len()
    }

    pub fn get(&self, n: usize) -> Option<&ThresholdCatalog> {
        n.checked_sub(1).and_then(|i| self.by_dim.get(i))
    }
}

struct Point {
    bit: u32,
    x: Vec<f64>,
}

/// All separable dichotomies of `pts`, which affinely span `R^dim`.
fn dichotomies(pts: &[Point], dim: usize, memo: &mut BTreeMap<u32, Rc<Vec<u32>>>) -> Rc<Vec<u32>> {
    let all = pts.iter().fold(0, |m, p| m | p.bit);
    if let Some(hit) = memo.get(&all) {
        return hit.clone();
    }
    let mut out = BTreeSet::new();
    out.insert(0u32);
    out.insert(all);
    if pts.len() > 1 {
        let mut planes = BTreeSet::new();
        for_each_combination(pts.len(), dim, |combo| {
            let Some(normal) = hyperplane_normal(pts, combo, dim) else {
                return;
            };
            let origin = &pts[combo[0]].x;
            let offset = dot(&normal, origin);
            let (mut on, mut neg, mut pos) = (0u32, 0u32, 0u32);
            let mut on_idx = Vec::new();
            for (j, p) in pts.iter().enumerate() {
                let v = dot(&normal, &p.x) - offset;
                if v.abs() < EPS {
                    on |= p.bit;
                    on_idx.push(j);
                } else if v < 0.0 {
                    neg |= p.bit;
                } else {
                    pos |= p.bit;
                }
            }
            if !planes.insert(on) {
                return;
            }
            let sub_pts = project_onto_flat(pts, combo, &on_idx, dim);
            let sub = dichotomies(&sub_pts, dim - 1, memo);
            for &s in sub.iter() {
                out.insert(neg | s);
                out.insert(pos | s);
            }
        });
    }
    let v: Rc<Vec<u32>> = Rc::new(out.into_iter().collect());
    memo.insert(all, v.clone());
    v
}

/// Unit normal of the affine hull of `dim` points in `R^dim`, or `None` when
/// they are affinely dependent.
fn hyperplane_normal(pts: &[Point], combo: &[usize], dim: usize) -> Option<Vec<f64>> {
    if dim == 1 {
        return Some(vec![1.0]);
    }
    let p0 = &pts[combo[0]].x;
    let mut m: Vec<Vec<f64>> = combo[1..]
        .iter()
        .map(|&k| pts[k].x.iter().zip(p0).map(|(a, b)| a - b).collect())
        .collect();
    // row-reduce the (dim-1) x dim system; the normal spans its null space
    let rows = dim - 1;
    let mut pivots = Vec::with_capacity(rows);
    let mut r = 0;
    for c in 0..dim {
        if r == rows {
            break;
        }
        let (best, val) = (r..rows)
            .map(|i| (i, m[i][c].abs()))
            .fold((r, 0.0), |acc, cur| if cur.1 > acc.1 { cur } else { acc });
        if val < EPS {
            continue;
        }
        m.swap(r, best);
        let inv = 1.0 / m[r][c];
        for v in m[r].iter_mut() {
            *v *= inv;
        }
        for i in 0..rows {
            if i != r && m[i][c] != 0.0 {
                let f = m[i][c];
                for k in 0..dim {
                    m[i][k] -= f * m[r][k];
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    if r < rows {
        return None;
    }
    let free = (0..dim).find(|c| !pivots.contains(c))?;
    let mut normal = vec![0.0; dim];
    normal[free] = 1.0;
    for (i, &pc) in pivots.iter().enumerate() {
        normal[pc] = -m[i][free];
    }
    let norm = dot(&normal, &normal).sqrt();
    normal.iter_mut().for_each(|v| *v /= norm);
    Some(normal)
}

/// Coordinates of the on-plane points in an orthonormal frame of the plane
/// spanned by `combo`.
fn project_onto_flat(pts: &[Point], combo: &[usize], on_idx: &[usize], dim: usize) -> Vec<Point> {
    let p0 = &pts[combo[0]].x;
    let mut basis: Vec<Vec<f64>> = Vec::with_capacity(dim - 1);
    for &k in &combo[1..] {
        let mut v: Vec<f64> = pts[k].x.iter().zip(p0).map(|(a, b)| a - b).collect();
        for e in &basis {
            let c = dot(&v, e);
            v.iter_mut().zip(e).for_each(|(vi, ei)| *vi -= c * ei);
        }
        let norm = dot(&v, &v).sqrt();
        v.iter_mut().for_each(|vi| *vi /= norm);
        basis.push(v);
    }
    on_idx
        .iter()
        .map(|&j| {
            let d: Vec<f64> = pts[j].x.iter().zip(p0).map(|(a, b)| a - b).collect();
            Point {
                bit: pts[j].bit,
                x: basis.iter().map(|e| dot(&d, e)).collect(),
            }
        })
        .collect()
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Visits every `k`-subset of `0..m` in lexicographic order.
fn for_each_combination(m: usize, k: usize, mut visit: impl FnMut(&[usize])) {
    if k > m {
        return;
    }
    let mut c: Vec<usize> = (0..k).collect();
    loop {
        visit(&c);
        let mut i = k;
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            if c[i] < m - k + i {
                c[i] += 1;
                for j in i + 1..k {
                    c[j] = c[j - 1] + 1;
                }
                break;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn combinations_count() {
        let mut n = 0;
        for_each_combination(7, 3, |_| n += 1);
        assert_eq!(n, 35);
    }

    #[test]
    fn small_catalogs() {
        let c1 = ThresholdCatalog::build(1).unwrap();
        assert_eq!(c1.sets(), &[0, 1, 2, 3]);
        let c2 = ThresholdCatalog::build(2).unwrap();
        assert_eq!(c2.len(), 14);
        // XOR pairs are missing
        assert!(!c2.contains(0b0110));
        assert!(!c2.contains(0b1001));
        assert!(c2.contains(0b0001));
    }

    #[test]
    fn witnesses_realize_their_sets() {
        let c = ThresholdCatalog::build(3).unwrap();
        for (i, &mask) in c.sets().iter().enumerate() {
            let h = c.witness(i);
            for idx in 0..8 {
                assert_eq!(h.contains_index(idx), mask >> idx & 1 == 1);
            }
        }
    }

    #[test]
    fn rejects_large_dimensions() {
        assert!(ThresholdCatalog::build(6).is_err());
        assert!(ThresholdCatalog::build(0).is_err());
    }
}

//! Double-description method for polyhedral cones `{y : A y ≤ 0}`.
//!
//! Constraints are inserted one at a time; extreme rays are split by sign and
//! adjacent positive/negative pairs are combined into new rays on the
//! inserted hyperplane. Adjacency uses the combinatorial test on zero sets,
//! which are inherited exactly rather than re-measured, so degenerate
//! (non-simple) inputs such as cross-polytopes are handled.

use crate::error::{Error, Result};
use crate::numkit::{dot, norm};

const SIGN_EPS: f64 = 1e-10;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
struct RowSet(Vec<u64>);

impl RowSet {
    fn empty(rows: usize) -> Self {
        Self(vec![0; rows.div_ceil(64)])
    }

    fn insert(&mut self, i: usize) {
        self.0[i / 64] |= 1 << (i % 64);
    }

    fn and(&self, other: &RowSet) -> RowSet {
        RowSet(self.0.iter().zip(&other.0).map(|(a, b)| a & b).collect())
    }

    fn count(&self) -> u32 {
        self.0.iter().map(|w| w.count_ones()).sum()
    }

    fn contains_all(&self, other: &RowSet) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a & b == *b)
    }
}

#[derive(Clone, Debug)]
struct Ray {
    y: Vec<f64>,
    zeros: RowSet,
}

/// Extreme rays of `{y ∈ ℝ^d : ⟨row, y⟩ ≤ 0 for every row}`.
///
/// Returns `Ok(None)` when the cone has a nontrivial lineality space (the rows
/// do not have full rank), otherwise the unit-normalized extreme rays; an empty
/// list means the cone is `{0}`.
fn cone_rays(d: usize, rows: &[Vec<f64>]) -> Option<Vec<Vec<f64>>> {
    let rows: Vec<Vec<f64>> = rows
        .iter()
        .map(|r| {
            let s = norm(r);
            if s == 0.0 { r.clone() } else { r.iter().map(|x| x / s).collect() }
        })
        .collect();

    // Greedy independent basis via Gram-Schmidt.
    let mut basis_idx = Vec::with_capacity(d);
    let mut ortho: Vec<Vec<f64>> = Vec::with_capacity(d);
    for (i, r) in rows.iter().enumerate() {
        if basis_idx.len() == d {
            break;
        }
        let mut w = r.clone();
        for q in &ortho {
            let c = dot(&w, q);
            w.iter_mut().zip(q).for_each(|(a, b)| *a -= c * b);
        }
        let s = norm(&w);
        if s > 1e-9 {
            ortho.push(w.into_iter().map(|x| x / s).collect());
            basis_idx.push(i);
        }
    }
    if basis_idx.len() < d {
        return None;
    }

    let a0 = crate::numkit::GenMatrix::from_rows(
        &basis_idx.iter().map(|&i| rows[i].clone()).collect::<Vec<_>>(),
    )
    .ok()?;
    let inv = a0.inverse().ok()?;
    let nrows = rows.len();
    let mut rays: Vec<Ray> = (0..d)
        .map(|j| {
            let col: Vec<f64> = inv.column(j).iter().map(|x| -x).collect();
            let s = norm(&col);
            let mut zeros = RowSet::empty(nrows);
            for (k, &bi) in basis_idx.iter().enumerate() {
                if k != j {
                    zeros.insert(bi);
                }
            }
            Ray { y: col.into_iter().map(|x| x / s).collect(), zeros }
        })
        .collect();

    let mut in_basis = vec![false; nrows];
    basis_idx.iter().for_each(|&i| in_basis[i] = true);

    for (ri, row) in rows.iter().enumerate() {
        if in_basis[ri] {
            continue;
        }
        let vals: Vec<f64> = rays.iter().map(|r| dot(&r.y, row)).collect();
        let pos: Vec<usize> = (0..rays.len()).filter(|&k| vals[k] > SIGN_EPS).collect();
        if pos.is_empty() {
            for (r, &v) in rays.iter_mut().zip(&vals) {
                if v >= -SIGN_EPS {
                    r.zeros.insert(ri);
                }
            }
            continue;
        }
        let neg: Vec<usize> = (0..rays.len()).filter(|&k| vals[k] < -SIGN_EPS).collect();

        let mut created = Vec::new();
        for &p in &pos {
            for &q in &neg {
                let common = rays[p].zeros.and(&rays[q].zeros);
                if (common.count() as usize) + 2 < d {
                    continue;
                }
                let blocked = rays.iter().enumerate().any(|(k, r)| {
                    k != p && k != q && r.zeros.contains_all(&common)
                });
                if blocked {
                    continue;
                }
                let (sp, sq) = (vals[p], vals[q]);
                let y: Vec<f64> =
                    rays[q].y.iter().zip(&rays[p].y).map(|(b, a)| sp * b - sq * a).collect();
                let s = norm(&y);
                if s == 0.0 {
                    continue;
                }
                let mut zeros = common;
                zeros.insert(ri);
                created.push(Ray { y: y.into_iter().map(|x| x / s).collect(), zeros });
            }
        }

        let mut next: Vec<Ray> = Vec::with_capacity(rays.len() + created.len());
        for (k, mut r) in rays.into_iter().enumerate() {
            if vals[k] < -SIGN_EPS {
                next.push(r);
            } else if vals[k] <= SIGN_EPS {
                r.zeros.insert(ri);
                next.push(r);
            }
        }
        next.extend(created);
        rays = next;
    }
    Some(rays.into_iter().map(|r| r.y).collect())
}

/// Vertices of `{x ∈ ℝⁿ : ⟨a_i, x⟩ ≤ b_i}`. Offsets may have any sign.
pub(crate) fn enumerate_vertices(dim: usize, rows: &[(Vec<f64>, f64)]) -> Result<Vec<Vec<f64>>> {
    let d = dim + 1;
    let mut hom: Vec<Vec<f64>> = Vec::with_capacity(rows.len() + 1);
    // t ≥ 0 first so that it always enters the initial basis.
    let mut t_row = vec![0.0; d];
    t_row[dim] = -1.0;
    hom.push(t_row);
    for (a, b) in rows {
        if a.len() != dim {
            return Err(Error::Input(format!("normal of length {} in dimension {dim}", a.len())));
        }
        let mut r = a.clone();
        r.push(-b);
        hom.push(r);
    }

    let rays = cone_rays(d, &hom).ok_or_else(|| {
        Error::Unbounded("constraint normals do not span the space (the set contains a line)".into())
    })?;

    let mut vertices: Vec<Vec<f64>> = Vec::new();
    for y in rays {
        let t = y[dim];
        if t <= 1e-12 {
            return Err(Error::Unbounded("halfspace intersection has a recession direction".into()));
        }
        let x: Vec<f64> = y[..dim].iter().map(|v| v / t).collect();
        let scale = norm(&x).max(1.0);
        if !vertices.iter().any(|v| dist(v, &x) <= 1e-8 * scale) {
            vertices.push(x);
        }
    }
    if vertices.is_empty() {
        return Err(Error::Structural("halfspace intersection is empty".into()));
    }
    Ok(vertices)
}

/// Whether the cone `{v : ⟨u_i, v⟩ ≤ 0 ∀i}` is `{0}`, i.e. the directions are
/// not contained in any closed hemisphere.
pub(crate) fn positively_spanning(dim: usize, directions: &[Vec<f64>]) -> bool {
    match cone_rays(dim, directions) {
        None => false,
        Some(rays) => rays.is_empty(),
    }
}

pub(crate) fn dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt()
}

//! Exact k-dimensional measures of polytope faces.
//!
//! A k-face is identified by its vertex index set. Its measure is the sum of
//! pyramids from the face centroid over its (k−1)-faces, recursing until
//! vertices (measure 1). Sub-faces of a face are its non-trivial
//! intersections with the facets of the whole polytope.

use std::collections::{BTreeSet, HashMap};

use crate::error::{Error, Result};
use crate::numkit::dot;

/// Relative tolerance for affine rank decisions.
const RANK_TOL: f64 = 1e-9;

pub(crate) struct FaceMeasure<'a> {
    vertices: &'a [Vec<f64>],
    facets: &'a [Vec<usize>],
    memo: HashMap<Vec<usize>, (f64, Vec<f64>)>,
}

impl<'a> FaceMeasure<'a> {
    pub(crate) fn new(vertices: &'a [Vec<f64>], facets: &'a [Vec<usize>]) -> Self {
        Self { vertices, facets, memo: HashMap::new() }
    }

    /// Measure of the face with vertex set `face` (sorted) and dimension `k`.
    pub(crate) fn measure(&mut self, face: &[usize], k: usize) -> Result<f64> {
        Ok(self.measure_and_centroid(face, k)?.0)
    }

    /// Measure and centre of mass of a k-face.
    pub(crate) fn measure_and_centroid(&mut self, face: &[usize], k: usize) -> Result<(f64, Vec<f64>)> {
        if k == 0 {
            return Ok((1.0, self.vertices[face[0]].clone()));
        }
        if let Some(hit) = self.memo.get(face) {
            return Ok(hit.clone());
        }
        let apex = centroid(self.vertices, face);
        let mut seen: BTreeSet<Vec<usize>> = BTreeSet::new();
        let mut total = 0.0;
        let mut moment = vec![0.0; apex.len()];
        // A pyramid of dimension k over a base with centroid g has its
        // centroid at apex + k/(k+1)·(g − apex).
        let lever = k as f64 / (k as f64 + 1.0);
        for facet in self.facets {
            let sub: Vec<usize> = face.iter().copied().filter(|v| facet.binary_search(v).is_ok()).collect();
            if sub.len() < k || sub.len() == face.len() || seen.contains(&sub) {
                continue;
            }
            let pts: Vec<&[f64]> = sub.iter().map(|&i| self.vertices[i].as_slice()).collect();
            if affine_dim(&pts) != k - 1 {
                continue;
            }
            let h = distance_to_affine_hull(&apex, &pts);
            let (m, g) = self.measure_and_centroid(&sub, k - 1)?;
            let piece = h * m / k as f64;
            total += piece;
            for (acc, (a, b)) in moment.iter_mut().zip(apex.iter().zip(&g)) {
                *acc += piece * (a + lever * (b - a));
            }
            seen.insert(sub);
        }
        if !(total > 0.0) {
            return Err(Error::Structural(format!("degenerate {k}-face with vertices {face:?}")));
        }
        let c: Vec<f64> = moment.into_iter().map(|x| x / total).collect();
        self.memo.insert(face.to_vec(), (total, c.clone()));
        Ok((total, c))
    }
}

pub(crate) fn centroid(vertices: &[Vec<f64>], idx: &[usize]) -> Vec<f64> {
    let n = vertices[idx[0]].len();
    let mut c = vec![0.0; n];
    for &i in idx {
        c.iter_mut().zip(&vertices[i]).for_each(|(a, b)| *a += b);
    }
    c.iter_mut().for_each(|a| *a /= idx.len() as f64);
    c
}

/// Orthonormal basis of the span of `p_i − p_0`, with the scale used for the
/// rank tolerance.
fn affine_basis(points: &[&[f64]]) -> Vec<Vec<f64>> {
    let Some(origin) = points.first() else { return Vec::new() };
    let diffs: Vec<Vec<f64>> =
        points[1..].iter().map(|p| p.iter().zip(*origin).map(|(a, b)| a - b).collect()).collect();
    let scale = diffs.iter().map(|d| dot(d, d).sqrt()).fold(0.0, f64::max);
    let mut basis: Vec<Vec<f64>> = Vec::new();
    for mut w in diffs {
        for q in &basis {
            let c = dot(&w, q);
            w.iter_mut().zip(q).for_each(|(a, b)| *a -= c * b);
        }
        // second pass for stability
        for q in &basis {
            let c = dot(&w, q);
            w.iter_mut().zip(q).for_each(|(a, b)| *a -= c * b);
        }
        let s = dot(&w, &w).sqrt();
        if s > RANK_TOL * scale {
            basis.push(w.into_iter().map(|x| x / s).collect());
        }
    }
    basis
}

pub(crate) fn affine_dim(points: &[&[f64]]) -> usize {
    affine_basis(points).len()
}

fn distance_to_affine_hull(x: &[f64], points: &[&[f64]]) -> f64 {
    let basis = affine_basis(points);
    let mut w: Vec<f64> = x.iter().zip(points[0]).map(|(a, b)| a - b).collect();
    for q in &basis {
        let c = dot(&w, q);
        w.iter_mut().zip(q).for_each(|(a, b)| *a -= c * b);
    }
    dot(&w, &w).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn square_edges_and_area() {
        let v = vec![vec![0.0, 0.0], vec![1.0, 0.0], vec![1.0, 1.0], vec![0.0, 1.0]];
        let facets = vec![vec![0, 1], vec![1, 2], vec![2, 3], vec![0, 3]];
        let mut fm = FaceMeasure::new(&v, &facets);
        for f in &facets {
            assert!((fm.measure(f, 1).unwrap() - 1.0).abs() < 1e-15);
        }
        assert!((fm.measure(&[0, 1, 2, 3], 2).unwrap() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn affine_dims() {
        let a = [0.0, 0.0, 0.0];
        let b = [1.0, 0.0, 0.0];
        let c = [2.0, 0.0, 0.0];
        let d = [0.0, 1.0, 0.0];
        assert_eq!(affine_dim(&[&a]), 0);
        assert_eq!(affine_dim(&[&a, &b, &c]), 1);
        assert_eq!(affine_dim(&[&a, &b, &c, &d]), 2);
    }
}

//! Raising facet or vertex counts by small local modifications.

use serde::{Deserialize, Serialize};

use super::extremal::PADDING_RETRIES;
use crate::error::{Error, Result};
use crate::numkit::{dot, norm};
use crate::polytope::{dist, HPolytope, Halfspace, Polytope, VPolytope};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PaddedFacets {
    pub hrep: HPolytope,
    pub iq_before: f64,
    pub iq_after: f64,
    pub perturbation: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PaddedVertices {
    pub vrep: VPolytope,
    pub iq_before: f64,
    pub iq_after: f64,
    pub perturbation: f64,
    /// Offset actually used for the last placement.
    pub delta: f64,
}

/// Adds facets by shaving vertices until there are exactly `target`.
///
/// Each cut is orthogonal to the sum of the normals at the chosen vertex and
/// sits `delta` below it. Vertices created by earlier cuts are shaved at most
/// half way to the next vertex in that direction. Symmetric inputs are cut in ± pairs while at least
/// two facets are missing.
pub fn pad_facets(k: &HPolytope, target: usize, delta: f64) -> Result<PaddedFacets> {
    if !(delta > 0.0) {
        return Err(Error::Input(format!("padding offset must be positive, got {delta}")));
    }
    let mut p = Polytope::from_hrep(k)?;
    let iq_before = p.iq();
    if target < p.facet_count() {
        return Err(Error::Spec(format!("target {target} is below the current facet count {}", p.facet_count())));
    }
    let symmetric = p.is_origin_symmetric(1e-9);
    let original = p.vertices().to_vec();
    let tol = 1e-12 * p.diameter();
    let mut rows: Vec<Halfspace> =
        p.facets().iter().map(|f| Halfspace { normal: f.normal.clone(), offset: f.offset }).collect();
    while p.facet_count() < target {
        let remaining = target - p.facet_count();
        let vi = farthest_vertex(&p);
        let v = &p.vertices()[vi];
        let mut dir = vec![0.0; p.dim()];
        for f in p.facets().iter().filter(|f| f.vertices.binary_search(&vi).is_ok()) {
            dir.iter_mut().zip(&f.normal).for_each(|(a, b)| *a += b);
        }
        let s = norm(&dir);
        dir.iter_mut().for_each(|x| *x /= s);
        let top = dot(&dir, v);
        let next = p
            .vertices()
            .iter()
            .enumerate()
            .filter(|&(i, _)| i != vi)
            .map(|(_, w)| dot(&dir, w))
            .fold(f64::NEG_INFINITY, f64::max);
        let depth = if original.iter().any(|o| dist(o, v) <= tol) { delta } else { delta.min(0.5 * (top - next)) };
        let level = top - depth;
        let mut cuts = vec![dir.clone()];
        if symmetric && remaining >= 2 {
            cuts.push(dir.iter().map(|x| -x).collect());
        }
        for c in &cuts {
            let removed = p.vertices().iter().filter(|w| dot(c, w) > level).count();
            if removed != 1 {
                return Err(Error::Geometry(format!("cut at offset {delta} removes {removed} vertices")));
            }
            if !(level > 0.0) {
                return Err(Error::Geometry(format!("cut at offset {delta} passes the origin")));
            }
            rows.push(Halfspace::new(c.clone(), level)?);
        }
        let before = p.facet_count();
        p = Polytope::from_hrep(&HPolytope::new(p.dim(), rows.clone())?)?;
        if p.facet_count() != before + cuts.len() {
            return Err(Error::Geometry("a cut did not create exactly one new facet".into()));
        }
    }
    let iq_after = p.iq();
    Ok(PaddedFacets { hrep: p.hrep()?, iq_before, iq_after, perturbation: (iq_after - iq_before).abs() })
}

fn farthest_vertex(p: &Polytope) -> usize {
    let mut best = 0;
    let mut best_norm = f64::NEG_INFINITY;
    for (i, v) in p.vertices().iter().enumerate() {
        let r = norm(v);
        if r > best_norm * (1.0 + 1e-12) {
            best = i;
            best_norm = r;
        }
    }
    best
}

/// Adds vertices just beyond the largest facets until there are exactly
/// `target`. Each point sits at most halfway to the nearest neighbouring
/// facet plane, so it only sees its own facet. With `symmetric`, points are
/// added in ± pairs.
pub fn pad_vertices(k: &VPolytope, target: usize, delta: f64, symmetric: bool) -> Result<PaddedVertices> {
    if !(delta > 0.0) {
        return Err(Error::Input(format!("padding offset must be positive, got {delta}")));
    }
    let mut p = Polytope::from_vrep(k)?;
    let iq_before = p.iq();
    let current = p.vertex_count();
    if target < current {
        return Err(Error::Spec(format!("target {target} is below the current vertex count {current}")));
    }
    if symmetric && (target - current) % 2 == 1 {
        return Err(Error::Spec(format!("symmetric padding needs an even increment, got {}", target - current)));
    }
    if symmetric && !p.is_origin_symmetric(1e-9) {
        return Err(Error::Spec("symmetric padding needs an origin-symmetric body".into()));
    }
    let mut used = delta;
    while p.vertex_count() < target {
        let (next, d) = place(&p, delta, symmetric)?;
        p = next;
        used = d;
    }
    let iq_after = p.iq();
    Ok(PaddedVertices { vrep: p.vrep(), iq_before, iq_after, perturbation: (iq_after - iq_before).abs(), delta: used })
}

fn place(p: &Polytope, delta: f64, symmetric: bool) -> Result<(Polytope, f64)> {
    let mut fi = 0;
    for (i, f) in p.facets().iter().enumerate() {
        if f.measure > p.facets()[fi].measure * (1.0 + 1e-12) {
            fi = i;
        }
    }
    let f = &p.facets()[fi];
    let mut centre = vec![0.0; p.dim()];
    for &i in &f.vertices {
        centre.iter_mut().zip(&p.vertices()[i]).for_each(|(a, b)| *a += b);
    }
    centre.iter_mut().for_each(|x| *x /= f.vertices.len() as f64);
    let added = if symmetric { 2 } else { 1 };
    let mut d = delta;
    for g in p.facets() {
        let cos = dot(&g.normal, &f.normal);
        if cos > 1e-12 && !std::ptr::eq(g, f) {
            d = d.min(0.5 * (g.offset - dot(&g.normal, &centre)) / cos);
        }
    }
    for _ in 0..=PADDING_RETRIES {
        let q: Vec<f64> = centre.iter().zip(&f.normal).map(|(c, u)| c + d * u).collect();
        let mut pts = p.vertices().to_vec();
        if symmetric {
            pts.push(q.iter().map(|x| -x).collect());
        }
        pts.push(q);
        if let Ok(next) = Polytope::from_points(p.dim(), pts) {
            if next.vertex_count() == p.vertex_count() + added {
                return Ok((next, d));
            }
        }
        d /= 2.0;
    }
    Err(Error::Geometry(format!("vertex placement failed after {PADDING_RETRIES} retries")))
}

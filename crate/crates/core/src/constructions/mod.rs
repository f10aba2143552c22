//! Polytope families with closed-form metadata.

mod extremal;
mod l1sum;
mod padding;
mod recipe;
mod symmetrize;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numkit::norm;
use crate::polytope::json::PolytopeDocument;
use crate::polytope::{
    HPolytope, Halfspace, Polytope, VPolytope, MAX_HALFSPACES, MAX_HULL_DIM,
    MAX_HULL_POINTS, MAX_VERTEX_ENUM_DIM,
};

pub use extremal::{
    extremal_facet_polytope, extremal_vertex_polytope, facet_parameters, vertex_parameters, ExtremalFacet,
    ExtremalVertex, FacetBranch, VertexBranch, DEFAULT_PADDING_FRACTION, PADDING_RETRIES,
};
pub use l1sum::{l1_sum, L1SumSpec};
pub use padding::{pad_facets, pad_vertices, PaddedFacets, PaddedVertices};
pub use recipe::Recipe;
pub use symmetrize::{central_symmetrize, Symmetrization, SYMMETRIZE_EXACT_MAX_DIM};

/// Largest explicit facet or vertex list materialized by the closed-form
/// families.
pub const MAX_LISTED: u64 = 4096;

/// Largest dimension accepted by [`simplex_regular`].
pub const MAX_SIMPLEX_DIM: usize = 10;

/// Closed-form (or exactly computed) size data of a construction.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClosedForms {
    pub volume: f64,
    pub surface_area: f64,
    pub iq: f64,
    /// Minimal iq over volume-preserving linear images, when known.
    pub minimal_iq: Option<f64>,
    pub facet_count: u64,
    pub vertex_count: u64,
    /// Radius of the largest centred ball, when every facet touches it.
    pub inradius: Option<f64>,
}

impl ClosedForms {
    pub fn new(dim: usize, volume: f64, surface_area: f64, facet_count: u64, vertex_count: u64) -> Self {
        let n = dim as f64;
        Self {
            volume,
            surface_area,
            iq: surface_area / volume.powf((n - 1.0) / n),
            minimal_iq: None,
            facet_count,
            vertex_count,
            inradius: None,
        }
    }

    /// Size data measured from an explicit polytope.
    pub fn measured(p: &Polytope) -> Self {
        Self::new(p.dim(), p.volume(), p.surface_area(), p.facet_count() as u64, p.vertex_count() as u64)
    }

    fn with_inradius(mut self, h: Option<f64>) -> Self {
        self.inradius = h;
        self
    }

    fn with_minimal_iq(mut self, m: Option<f64>) -> Self {
        self.minimal_iq = m;
        self
    }
}

/// A constructed body: whichever representations are affordable plus its
/// closed forms.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Construction {
    pub dim: usize,
    pub hrep: Option<HPolytope>,
    pub vrep: Option<VPolytope>,
    pub closed: ClosedForms,
}

impl Construction {
    /// Exact polytope, from the H-representation when vertex enumeration is
    /// within caps and from the V-representation otherwise.
    pub fn polytope(&self) -> Result<Polytope> {
        if let Some(h) = &self.hrep {
            if self.dim <= MAX_VERTEX_ENUM_DIM && h.len() <= MAX_HALFSPACES {
                return Polytope::from_hrep(h);
            }
        }
        if let Some(v) = &self.vrep {
            if self.dim <= MAX_HULL_DIM && v.len() <= MAX_HULL_POINTS {
                return Polytope::from_vrep(v);
            }
        }
        Err(Error::Size(format!(
            "no representation of this {}-dimensional body is within the exact-geometry caps",
            self.dim
        )))
    }

    pub fn document(&self) -> PolytopeDocument {
        PolytopeDocument::from_parts(self.dim, self.hrep.as_ref(), self.vrep.as_ref())
    }

    /// Wraps an explicit polytope, measuring its closed forms.
    pub fn from_polytope(p: &Polytope) -> Result<Self> {
        let hrep = p.hrep()?;
        let inradius = tangent_radius(&hrep);
        Ok(Self {
            dim: p.dim(),
            closed: ClosedForms::measured(p).with_inradius(inradius),
            hrep: Some(hrep),
            vrep: Some(p.vrep()),
        })
    }
}

/// Common offset when all halfspaces are at the same distance from the origin.
pub(crate) fn tangent_radius(h: &HPolytope) -> Option<f64> {
    let first = h.halfspaces().first()?.offset;
    h.halfspaces().iter().all(|hs| (hs.offset - first).abs() <= 1e-12 * first).then_some(first)
}

pub(crate) fn factorial(k: usize) -> f64 {
    (1..=k).map(|i| i as f64).product()
}

pub(crate) fn ln_factorial(k: usize) -> f64 {
    (1..=k).map(|i| (i as f64).ln()).sum()
}

/// Centered regular simplex with unit side length.
pub fn simplex_regular(n: usize) -> Result<Construction> {
    if n == 0 || n > MAX_SIMPLEX_DIM {
        return Err(Error::Input(format!("simplex dimension must be in 1..={MAX_SIMPLEX_DIM}, got {n}")));
    }
    // Vertices e_i/√2 in ℝ^{n+1}, centred, expressed in an orthonormal basis
    // of the hyperplane Σx = 0 (Helmert rows).
    let helmert: Vec<Vec<f64>> = (1..=n)
        .map(|k| {
            let s = ((k * (k + 1)) as f64).sqrt();
            (0..=n)
                .map(|j| match j.cmp(&k) {
                    std::cmp::Ordering::Less => 1.0 / s,
                    std::cmp::Ordering::Equal => -(k as f64) / s,
                    std::cmp::Ordering::Greater => 0.0,
                })
                .collect()
        })
        .collect();
    let vertices: Vec<Vec<f64>> = (0..=n)
        .map(|i| helmert.iter().map(|row| row[i] / std::f64::consts::SQRT_2).collect())
        .collect();
    let nf = n as f64;
    let inradius = 1.0 / (2.0 * nf * (nf + 1.0)).sqrt();
    let halfspaces = vertices
        .iter()
        .map(|v| {
            let s = norm(v);
            Halfspace::new(v.iter().map(|x| -x / s).collect(), inradius)
        })
        .collect::<Result<Vec<_>>>()?;
    let volume = 2f64.powf(-nf / 2.0) * (nf + 1.0).sqrt() / factorial(n);
    let facet_volume = if n == 1 { 1.0 } else { 2f64.powf(-(nf - 1.0) / 2.0) * nf.sqrt() / factorial(n - 1) };
    let closed = ClosedForms::new(n, volume, (nf + 1.0) * facet_volume, n as u64 + 1, n as u64 + 1);
    let minimal = closed.iq;
    Ok(Construction {
        dim: n,
        hrep: Some(HPolytope::new(n, halfspaces)?),
        vrep: Some(VPolytope::from_extreme_points(n, vertices)?),
        closed: closed.with_inradius(Some(inradius)).with_minimal_iq(Some(minimal)),
    })
}

fn check_scale(n: usize, scale: f64) -> Result<()> {
    if n == 0 || !(scale > 0.0) || !scale.is_finite() {
        return Err(Error::Input(format!("need n ≥ 1 and a positive scale, got n={n}, scale={scale}")));
    }
    Ok(())
}

fn sign_vectors(n: usize, magnitude: f64) -> Vec<Vec<f64>> {
    (0..1u64 << n)
        .map(|mask| (0..n).map(|i| if mask >> i & 1 == 1 { -magnitude } else { magnitude }).collect())
        .collect()
}

fn axis_vectors(n: usize, magnitude: f64) -> Vec<Vec<f64>> {
    let mut out = Vec::with_capacity(2 * n);
    for i in 0..n {
        for s in [magnitude, -magnitude] {
            let mut e = vec![0.0; n];
            e[i] = s;
            out.push(e);
        }
    }
    out
}

fn listable(n: usize) -> bool {
    n < 63 && (1u64 << n) <= MAX_LISTED
}

/// `scale·[−1,1]ⁿ`.
pub fn cube(n: usize, scale: f64) -> Result<Construction> {
    check_scale(n, scale)?;
    let hs = axis_vectors(n, 1.0).into_iter().map(|u| Halfspace::new(u, scale)).collect::<Result<_>>()?;
    let vrep = if listable(n) { Some(VPolytope::from_extreme_points(n, sign_vectors(n, scale))?) } else { None };
    let nf = n as f64;
    let edge = 2.0 * scale;
    let closed = ClosedForms::new(n, edge.powi(n as i32), 2.0 * nf * edge.powi(n as i32 - 1), 2 * n as u64, pow2(n));
    let minimal = closed.iq;
    Ok(Construction {
        dim: n,
        hrep: Some(HPolytope::new(n, hs)?),
        vrep,
        closed: closed.with_inradius(Some(scale)).with_minimal_iq(Some(minimal)),
    })
}

/// `scale·B_{ℓ1}ⁿ`.
pub fn cross_polytope(n: usize, scale: f64) -> Result<Construction> {
    check_scale(n, scale)?;
    let nf = n as f64;
    let h = scale / nf.sqrt();
    let hrep = if listable(n) {
        let hs = sign_vectors(n, 1.0 / nf.sqrt()).into_iter().map(|u| Halfspace::new(u, h)).collect::<Result<_>>()?;
        Some(HPolytope::new(n, hs)?)
    } else {
        None
    };
    let volume = (2.0 * scale).powi(n as i32) / factorial(n);
    let closed = ClosedForms::new(n, volume, nf * volume / h, pow2(n), 2 * n as u64);
    let minimal = closed.iq;
    Ok(Construction {
        dim: n,
        hrep,
        vrep: Some(VPolytope::from_extreme_points(n, axis_vectors(n, scale))?),
        closed: closed.with_inradius(Some(h)).with_minimal_iq(Some(minimal)),
    })
}

fn pow2(n: usize) -> u64 {
    if n >= 64 { u64::MAX } else { 1u64 << n }
}

/// Product of factors on orthogonal coordinate blocks; with `normalize` each
/// factor is first scaled to unit volume.
pub fn cartesian_product(factors: &[Construction], normalize: bool) -> Result<Construction> {
    if factors.is_empty() {
        return Err(Error::Input("a product needs at least one factor".into()));
    }
    let dim: usize = factors.iter().map(|f| f.dim).sum();
    let scales: Vec<f64> =
        factors.iter().map(|f| if normalize { f.closed.volume.powf(-1.0 / f.dim as f64) } else { 1.0 }).collect();

    let mut halfspaces = Vec::new();
    let mut offset = 0;
    for (f, &t) in factors.iter().zip(&scales) {
        let h = f.hrep.as_ref().ok_or_else(|| Error::Input("product factors need an H-representation".into()))?;
        for hs in h.halfspaces() {
            let mut u = vec![0.0; dim];
            u[offset..offset + f.dim].copy_from_slice(&hs.normal);
            halfspaces.push(Halfspace::new(u, hs.offset * t)?);
        }
        offset += f.dim;
    }

    let vertex_count = factors.iter().try_fold(1u64, |acc, f| acc.checked_mul(f.closed.vertex_count));
    let vrep = match vertex_count {
        Some(c) if c <= MAX_LISTED && factors.iter().all(|f| f.vrep.is_some()) => {
            let mut pts: Vec<Vec<f64>> = vec![Vec::new()];
            for (f, &t) in factors.iter().zip(&scales) {
                let vs = f.vrep.as_ref().map(|v| v.vertices()).unwrap_or_default();
                pts = pts
                    .iter()
                    .flat_map(|p| {
                        vs.iter().map(move |v| {
                            let mut q = p.clone();
                            q.extend(v.iter().map(|x| x * t));
                            q
                        })
                    })
                    .collect();
            }
            Some(VPolytope::from_extreme_points(dim, pts)?)
        }
        _ => None,
    };

    let vols: Vec<f64> = factors.iter().zip(&scales).map(|(f, &t)| f.closed.volume * t.powi(f.dim as i32)).collect();
    let surfs: Vec<f64> =
        factors.iter().zip(&scales).map(|(f, &t)| f.closed.surface_area * t.powi(f.dim as i32 - 1)).collect();
    let volume: f64 = vols.iter().product();
    let surface: f64 = (0..factors.len())
        .map(|i| surfs[i] * vols.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, v)| v).product::<f64>())
        .sum();
    let facet_count = factors.iter().map(|f| f.closed.facet_count).sum();
    let radii: Option<Vec<f64>> =
        factors.iter().zip(&scales).map(|(f, &t)| f.closed.inradius.map(|h| h * t)).collect();
    let inradius = radii.and_then(|r| {
        let first = r[0];
        r.iter().all(|h| (h - first).abs() <= 1e-12 * first).then_some(first)
    });
    Ok(Construction {
        dim,
        hrep: Some(HPolytope::new(dim, halfspaces)?),
        vrep,
        closed: ClosedForms::new(dim, volume, surface, facet_count, vertex_count.unwrap_or(u64::MAX))
            .with_inradius(inradius),
    })
}

/// `{x : ⟨x, u_i⟩ ≤ 1}` for the normalized input directions.
pub fn lindelof_body(normals: &[Vec<f64>]) -> Result<HPolytope> {
    let dim = normals.first().map(Vec::len).ok_or_else(|| Error::Input("no normals given".into()))?;
    if normals.iter().any(|u| u.len() != dim) {
        return Err(Error::Input("normals have mixed lengths".into()));
    }
    let hs = normals
        .iter()
        .map(|u| Halfspace::from_unnormalized(u, 1.0).map(|h| Halfspace { offset: 1.0, ..h }))
        .collect::<Result<_>>()?;
    HPolytope::new(dim, hs)
}

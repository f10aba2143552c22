//! Convex polytopes in halfspace and vertex form, with exact volume, surface
//! area and area measure at small dimension.

mod dd;
pub mod json;
mod measure;
mod montecarlo;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numkit::{dot, norm, GenMatrix, LinalgError, SymMatrix};

pub use montecarlo::{mc_volume, VolumeEstimate};
pub(crate) use montecarlo::sample_box;

pub(crate) use dd::{dist, enumerate_vertices, positively_spanning};
pub(crate) use measure::affine_dim;

/// Largest dimension for halfspace-to-vertex enumeration.
pub const MAX_VERTEX_ENUM_DIM: usize = 8;
/// Largest number of halfspaces accepted by vertex enumeration.
pub const MAX_HALFSPACES: usize = 64;
/// Largest dimension for convex hulls of point sets.
pub const MAX_HULL_DIM: usize = 6;
/// Largest point count accepted by the convex hull.
pub const MAX_HULL_POINTS: usize = 256;
/// Points closer than this (relative) are merged.
pub const VERTEX_DEDUP_TOL: f64 = 1e-8;
/// Unit normals closer than this are treated as the same direction.
pub const NORMAL_MERGE_TOL: f64 = 1e-10;
/// A vertex lies on a facet hyperplane when its slack is below this (relative).
pub const INCIDENCE_TOL: f64 = 1e-9;

const UNIT_TOL: f64 = 1e-12;

/// `{x : ⟨x, normal⟩ ≤ offset}` with a unit normal.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Halfspace {
    pub normal: Vec<f64>,
    pub offset: f64,
}

impl Halfspace {
    pub fn new(normal: Vec<f64>, offset: f64) -> Result<Self> {
        let s = norm(&normal);
        if (s - 1.0).abs() > UNIT_TOL {
            return Err(Error::Input(format!("halfspace normal has norm {s}, expected 1")));
        }
        if !offset.is_finite() {
            return Err(Error::Input("non-finite halfspace offset".into()));
        }
        Ok(Self { normal, offset })
    }

    /// `{x : ⟨x, a⟩ ≤ b}` rescaled to a unit normal.
    pub fn from_unnormalized(a: &[f64], b: f64) -> Result<Self> {
        let s = norm(a);
        if !(s > 0.0) || !s.is_finite() || !b.is_finite() {
            return Err(Error::Input("halfspace normal must be nonzero and finite".into()));
        }
        Ok(Self { normal: a.iter().map(|x| x / s).collect(), offset: b / s })
    }

    pub fn slack(&self, x: &[f64]) -> f64 {
        self.offset - dot(&self.normal, x)
    }
}

/// Bounded intersection of halfspaces with the origin in its interior.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HPolytope {
    dim: usize,
    halfspaces: Vec<Halfspace>,
}

impl HPolytope {
    pub fn new(dim: usize, halfspaces: Vec<Halfspace>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::Input("dimension must be positive".into()));
        }
        for h in &halfspaces {
            if h.normal.len() != dim {
                return Err(Error::Input(format!(
                    "normal of length {} in dimension {dim}",
                    h.normal.len()
                )));
            }
            if (norm(&h.normal) - 1.0).abs() > UNIT_TOL {
                return Err(Error::Input("halfspace normals must be unit vectors".into()));
            }
            if !(h.offset > 0.0) {
                return Err(Error::Input(format!(
                    "offset {} is not positive; the origin must be interior",
                    h.offset
                )));
            }
        }
        let normals: Vec<Vec<f64>> = halfspaces.iter().map(|h| h.normal.clone()).collect();
        if !positively_spanning(dim, &normals) {
            return Err(Error::Unbounded(
                "facet normals lie in a closed hemisphere".into(),
            ));
        }
        Ok(Self { dim, halfspaces })
    }

    /// Builds from `(a, b)` pairs meaning `⟨x, a⟩ ≤ b`, normalizing each row.
    pub fn from_rows(dim: usize, rows: &[(Vec<f64>, f64)]) -> Result<Self> {
        let hs = rows.iter().map(|(a, b)| Halfspace::from_unnormalized(a, *b)).collect::<Result<_>>()?;
        Self::new(dim, hs)
    }

    /// Builds from rows whose offsets may be non-positive by translating the
    /// set so that its vertex centroid sits at the origin. Returns the body and
    /// the translation `z` (the new body is the old one minus `z`).
    pub fn from_rows_translating(dim: usize, rows: &[(Vec<f64>, f64)]) -> Result<(Self, Vec<f64>)> {
        let hs: Vec<Halfspace> =
            rows.iter().map(|(a, b)| Halfspace::from_unnormalized(a, *b)).collect::<Result<_>>()?;
        if hs.iter().all(|h| h.offset > 0.0) {
            return Ok((Self::new(dim, hs)?, vec![0.0; dim]));
        }
        let raw: Vec<(Vec<f64>, f64)> = hs.iter().map(|h| (h.normal.clone(), h.offset)).collect();
        let verts = enumerate_vertices(dim, &raw)?;
        let idx: Vec<usize> = (0..verts.len()).collect();
        let z = measure::centroid(&verts, &idx);
        let shifted =
            hs.into_iter().map(|h| Halfspace { offset: h.offset - dot(&h.normal, &z), ..h }).collect();
        Ok((Self::new(dim, shifted)?, z))
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn halfspaces(&self) -> &[Halfspace] {
        &self.halfspaces
    }

    pub fn len(&self) -> usize {
        self.halfspaces.len()
    }

    pub fn is_empty(&self) -> bool {
        self.halfspaces.is_empty()
    }

    /// Exact halfspace membership test with tolerance `1e-12`.
    pub fn contains(&self, x: &[f64]) -> bool {
        self.halfspaces.iter().all(|h| dot(&h.normal, x) <= h.offset + 1e-12)
    }

    /// Largest `h` with `h·Bⁿ ⊆ K` for the ball centred at the origin.
    pub fn inradius_origin(&self) -> f64 {
        self.halfspaces.iter().map(|h| h.offset).fold(f64::INFINITY, f64::min)
    }

    /// Image under an invertible linear map: normals go to `M^{-T} n`,
    /// renormalized, with offsets divided by the same factor.
    pub fn apply_map(&self, m: &GenMatrix) -> Result<Self> {
        check_square(m, self.dim)?;
        let inv_t = m.inverse()?.transpose();
        let halfspaces = self
            .halfspaces
            .iter()
            .map(|h| {
                let v = inv_t.mul_vec(&h.normal);
                let s = norm(&v);
                Halfspace { normal: v.iter().map(|x| x / s).collect(), offset: h.offset / s }
            })
            .collect();
        Ok(Self { dim: self.dim, halfspaces })
    }

    pub fn scale(&self, s: f64) -> Self {
        Self {
            dim: self.dim,
            halfspaces: self
                .halfspaces
                .iter()
                .map(|h| Halfspace { normal: h.normal.clone(), offset: h.offset * s })
                .collect(),
        }
    }

    pub(crate) fn rows(&self) -> Vec<(Vec<f64>, f64)> {
        self.halfspaces.iter().map(|h| (h.normal.clone(), h.offset)).collect()
    }
}

/// Finite point set whose points are all extreme points of its hull.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VPolytope {
    dim: usize,
    vertices: Vec<Vec<f64>>,
}

impl VPolytope {
    /// Convex hull of `points`; non-extreme points are dropped when the hull
    /// kernel applies (dimension ≤ 6), otherwise the caller must supply
    /// extreme points only.
    pub fn new(dim: usize, points: Vec<Vec<f64>>) -> Result<Self> {
        if dim <= MAX_HULL_DIM && points.len() <= MAX_HULL_POINTS {
            let p = Polytope::from_points(dim, points)?;
            return Ok(p.vrep());
        }
        Self::from_extreme_points(dim, points)
    }

    /// Wraps points known to be extreme; checks only full affine dimension.
    pub fn from_extreme_points(dim: usize, points: Vec<Vec<f64>>) -> Result<Self> {
        if points.iter().any(|p| p.len() != dim || p.iter().any(|x| !x.is_finite())) {
            return Err(Error::Input(format!("points must be finite vectors of length {dim}")));
        }
        let refs: Vec<&[f64]> = points.iter().map(Vec::as_slice).collect();
        if affine_dim(&refs) != dim {
            return Err(Error::Structural("points are not full-dimensional".into()));
        }
        Ok(Self { dim, vertices: points })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn vertices(&self) -> &[Vec<f64>] {
        &self.vertices
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn apply_map(&self, m: &GenMatrix) -> Result<Self> {
        check_square(m, self.dim)?;
        if m.det()? == 0.0 {
            return Err(LinalgError::Singular.into());
        }
        Ok(Self { dim: self.dim, vertices: self.vertices.iter().map(|v| m.mul_vec(v)).collect() })
    }

    pub fn translate(&self, z: &[f64]) -> Self {
        Self {
            dim: self.dim,
            vertices: self
                .vertices
                .iter()
                .map(|v| v.iter().zip(z).map(|(a, b)| a + b).collect())
                .collect(),
        }
    }

    pub fn centroid(&self) -> Vec<f64> {
        let idx: Vec<usize> = (0..self.vertices.len()).collect();
        measure::centroid(&self.vertices, &idx)
    }
}

/// One facet of a computed polytope.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FacetData {
    pub normal: Vec<f64>,
    pub offset: f64,
    /// (n−1)-dimensional volume.
    pub measure: f64,
    /// Indices into the owning polytope's vertex list, sorted.
    pub vertices: Vec<usize>,
}

/// A full-dimensional polytope with both representations and facet measures.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Polytope {
    dim: usize,
    vertices: Vec<Vec<f64>>,
    facets: Vec<FacetData>,
}

impl Polytope {
    pub fn from_hrep(h: &HPolytope) -> Result<Self> {
        let (v, _) = vertex_enumeration(h)?;
        Self::assemble(h.dim, v.vertices, h.rows())
    }

    pub fn from_vrep(v: &VPolytope) -> Result<Self> {
        Self::from_points(v.dim, v.vertices.clone())
    }

    /// Convex hull of arbitrary points (interior points are discarded).
    pub fn from_points(dim: usize, points: Vec<Vec<f64>>) -> Result<Self> {
        let points = dedup_points(dim, points)?;
        let candidates = hull_halfspaces(dim, &points)?;
        let tol = incidence_tol(&points);
        // Keep only points that are vertices: incident facet normals span ℝⁿ.
        let facet_normals: Vec<&(Vec<f64>, f64)> = candidates.iter().collect();
        let vertices: Vec<Vec<f64>> = points
            .into_iter()
            .filter(|p| {
                let incident: Vec<Vec<f64>> = facet_normals
                    .iter()
                    .filter(|(a, b)| (dot(a, p) - b).abs() <= tol)
                    .map(|(a, _)| a.clone())
                    .collect();
                rank(&incident, dim) == dim
            })
            .collect();
        Self::assemble(dim, vertices, candidates)
    }

    /// Builds facet data from a vertex set and candidate halfspaces; candidate
    /// halfspaces whose tight set is not (n−1)-dimensional are dropped.
    fn assemble(dim: usize, vertices: Vec<Vec<f64>>, candidates: Vec<(Vec<f64>, f64)>) -> Result<Self> {
        let refs: Vec<&[f64]> = vertices.iter().map(Vec::as_slice).collect();
        if affine_dim(&refs) != dim {
            return Err(Error::Structural("polytope is not full-dimensional".into()));
        }
        let tol = incidence_tol(&vertices);
        let mut facets: Vec<FacetData> = Vec::new();
        for (normal, offset) in candidates {
            let tight: Vec<usize> =
                (0..vertices.len()).filter(|&i| (dot(&normal, &vertices[i]) - offset).abs() <= tol).collect();
            if tight.len() < dim {
                continue;
            }
            let pts: Vec<&[f64]> = tight.iter().map(|&i| vertices[i].as_slice()).collect();
            if affine_dim(&pts) != dim - 1 {
                continue;
            }
            if facets.iter().any(|f| dist(&f.normal, &normal) <= NORMAL_MERGE_TOL) {
                continue;
            }
            facets.push(FacetData { normal, offset, measure: 0.0, vertices: tight });
        }
        let mut out = Self { dim, vertices, facets };
        out.recompute_measures()?;
        Ok(out)
    }

    fn recompute_measures(&mut self) -> Result<()> {
        let sets: Vec<Vec<usize>> = self.facets.iter().map(|f| f.vertices.clone()).collect();
        let mut fm = measure::FaceMeasure::new(&self.vertices, &sets);
        let measures: Vec<f64> =
            sets.iter().map(|s| fm.measure(s, self.dim - 1)).collect::<Result<_>>()?;
        for (f, m) in self.facets.iter_mut().zip(measures) {
            f.measure = m;
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn vertices(&self) -> &[Vec<f64>] {
        &self.vertices
    }

    pub fn facets(&self) -> &[FacetData] {
        &self.facets
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn facet_count(&self) -> usize {
        self.facets.len()
    }

    /// Average of the vertices (an interior point).
    pub fn centroid(&self) -> Vec<f64> {
        let idx: Vec<usize> = (0..self.vertices.len()).collect();
        measure::centroid(&self.vertices, &idx)
    }

    /// Sum of cones from the vertex centroid over the facets.
    pub fn volume(&self) -> f64 {
        let c = self.centroid();
        self.facets.iter().map(|f| (f.offset - dot(&f.normal, &c)) * f.measure).sum::<f64>()
            / self.dim as f64
    }

    /// Centre of mass of the solid polytope.
    pub fn volume_centroid(&self) -> Result<Vec<f64>> {
        let sets: Vec<Vec<usize>> = self.facets.iter().map(|f| f.vertices.clone()).collect();
        let all: Vec<usize> = (0..self.vertices.len()).collect();
        Ok(measure::FaceMeasure::new(&self.vertices, &sets).measure_and_centroid(&all, self.dim)?.1)
    }

    /// Polytope `{x : ⟨a_i, x⟩ ≤ b_i}` for rows with arbitrary offsets.
    pub fn from_rows(dim: usize, rows: &[(Vec<f64>, f64)]) -> Result<Self> {
        let hs: Vec<(Vec<f64>, f64)> = rows
            .iter()
            .map(|(a, b)| Halfspace::from_unnormalized(a, *b).map(|h| (h.normal, h.offset)))
            .collect::<Result<_>>()?;
        let vertices = enumerate_vertices(dim, &hs)?;
        Self::assemble(dim, vertices, hs)
    }

    pub fn surface_area(&self) -> f64 {
        self.facets.iter().map(|f| f.measure).sum()
    }

    /// `surface_area / volume^{(n−1)/n}`.
    pub fn iq(&self) -> f64 {
        let n = self.dim as f64;
        self.surface_area() / self.volume().powf((n - 1.0) / n)
    }

    pub fn area_measure(&self) -> AreaMeasure {
        AreaMeasure {
            dim: self.dim,
            atoms: self.facets.iter().map(|f| Atom { normal: f.normal.clone(), weight: f.measure }).collect(),
        }
    }

    pub fn vrep(&self) -> VPolytope {
        VPolytope { dim: self.dim, vertices: self.vertices.clone() }
    }

    /// Irredundant halfspace form; requires the origin to be interior.
    pub fn hrep(&self) -> Result<HPolytope> {
        HPolytope::new(
            self.dim,
            self.facets.iter().map(|f| Halfspace { normal: f.normal.clone(), offset: f.offset }).collect(),
        )
    }

    pub fn contains(&self, x: &[f64]) -> bool {
        self.facets.iter().all(|f| dot(&f.normal, x) <= f.offset + 1e-12)
    }

    /// Image under an invertible linear map, keeping the combinatorics.
    pub fn apply_map(&self, m: &GenMatrix) -> Result<Self> {
        check_square(m, self.dim)?;
        let inv_t = m.inverse()?.transpose();
        let vertices = self.vertices.iter().map(|v| m.mul_vec(v)).collect();
        let facets = self
            .facets
            .iter()
            .map(|f| {
                let v = inv_t.mul_vec(&f.normal);
                let s = norm(&v);
                FacetData {
                    normal: v.iter().map(|x| x / s).collect(),
                    offset: f.offset / s,
                    measure: 0.0,
                    vertices: f.vertices.clone(),
                }
            })
            .collect();
        let mut out = Self { dim: self.dim, vertices, facets };
        out.recompute_measures()?;
        Ok(out)
    }

    pub fn scale(&self, s: f64) -> Result<Self> {
        self.apply_map(&GenMatrix::identity(self.dim).scale(s))
    }

    pub fn translate(&self, z: &[f64]) -> Self {
        Self {
            dim: self.dim,
            vertices: self.vertices.iter().map(|v| v.iter().zip(z).map(|(a, b)| a + b).collect()).collect(),
            facets: self
                .facets
                .iter()
                .map(|f| FacetData { offset: f.offset + dot(&f.normal, z), ..f.clone() })
                .collect(),
        }
    }

    /// Whether the vertex set is closed under negation within `tol`.
    pub fn is_origin_symmetric(&self, tol: f64) -> bool {
        self.vertices.iter().all(|v| {
            let neg: Vec<f64> = v.iter().map(|x| -x).collect();
            self.vertices.iter().any(|w| dist(w, &neg) <= tol)
        })
    }

    pub fn diameter(&self) -> f64 {
        let mut d: f64 = 0.0;
        for (i, a) in self.vertices.iter().enumerate() {
            for b in &self.vertices[i + 1..] {
                d = d.max(dist(a, b));
            }
        }
        d
    }

    /// Axis-aligned bounding box `(lo, hi)`.
    pub fn bounding_box(&self) -> (Vec<f64>, Vec<f64>) {
        bounding_box(&self.vertices)
    }
}

pub(crate) fn bounding_box(points: &[Vec<f64>]) -> (Vec<f64>, Vec<f64>) {
    let n = points[0].len();
    let mut lo = vec![f64::INFINITY; n];
    let mut hi = vec![f64::NEG_INFINITY; n];
    for p in points {
        for k in 0..n {
            lo[k] = lo[k].min(p[k]);
            hi[k] = hi[k].max(p[k]);
        }
    }
    (lo, hi)
}

/// Vertices of `H` together with, for each halfspace, the indices of the
/// vertices lying on its hyperplane.
pub fn vertex_enumeration(h: &HPolytope) -> Result<(VPolytope, Vec<Vec<usize>>)> {
    if h.dim > MAX_VERTEX_ENUM_DIM {
        return Err(Error::Size(format!("vertex enumeration supports n ≤ {MAX_VERTEX_ENUM_DIM}, got {}", h.dim)));
    }
    if h.len() > MAX_HALFSPACES {
        return Err(Error::Size(format!(
            "vertex enumeration supports at most {MAX_HALFSPACES} halfspaces, got {}",
            h.len()
        )));
    }
    let vertices = enumerate_vertices(h.dim, &h.rows())?;
    let refs: Vec<&[f64]> = vertices.iter().map(Vec::as_slice).collect();
    if affine_dim(&refs) != h.dim {
        return Err(Error::Structural("halfspace intersection is not full-dimensional".into()));
    }
    let tol = incidence_tol(&vertices);
    let incidence = h
        .halfspaces
        .iter()
        .map(|hs| (0..vertices.len()).filter(|&i| hs.slack(&vertices[i]).abs() <= tol).collect())
        .collect();
    Ok((VPolytope { dim: h.dim, vertices }, incidence))
}

/// Irredundant facets of the hull of `V`, with outer unit normals, offsets
/// and (n−1)-measures.
pub fn facet_enumeration(v: &VPolytope) -> Result<Vec<FacetData>> {
    Ok(Polytope::from_vrep(v)?.facets)
}

/// `(n/h)·vol^{1/n}` for a polytope all of whose facets touch the inscribed
/// ball `h·Bⁿ`; errors if some facet is not tangent.
pub fn iq_circumscribed(h: &HPolytope) -> Result<f64> {
    let p = Polytope::from_hrep(h)?;
    let r = h.inradius_origin();
    let offending: Vec<usize> = h
        .halfspaces
        .iter()
        .enumerate()
        .filter(|(_, hs)| p.facets.iter().any(|f| dist(&f.normal, &hs.normal) <= NORMAL_MERGE_TOL))
        .filter(|(_, hs)| (hs.offset - r).abs() > 1e-9 * r.max(1.0))
        .map(|(i, _)| i)
        .collect();
    if !offending.is_empty() {
        return Err(Error::Tangency { facets: offending, inradius: r });
    }
    let n = h.dim as f64;
    Ok(n / r * p.volume().powf(1.0 / n))
}

/// Atomic measure on the sphere: facet normals weighted by facet measure.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AreaMeasure {
    dim: usize,
    atoms: Vec<Atom>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Atom {
    pub normal: Vec<f64>,
    pub weight: f64,
}

impl AreaMeasure {
    /// Normalizes each direction and merges directions closer than
    /// [`NORMAL_MERGE_TOL`].
    pub fn new(dim: usize, atoms: Vec<Atom>) -> Result<Self> {
        let mut merged: Vec<Atom> = Vec::with_capacity(atoms.len());
        for a in atoms {
            if a.normal.len() != dim || !(a.weight > 0.0) {
                return Err(Error::Input("atoms need a normal of the right length and positive weight".into()));
            }
            let s = norm(&a.normal);
            if !(s > 0.0) {
                return Err(Error::Input("zero atom direction".into()));
            }
            let u: Vec<f64> = a.normal.iter().map(|x| x / s).collect();
            match merged.iter_mut().find(|m| dist(&m.normal, &u) <= NORMAL_MERGE_TOL) {
                Some(m) => m.weight += a.weight,
                None => merged.push(Atom { normal: u, weight: a.weight }),
            }
        }
        if merged.is_empty() {
            return Err(Error::Input("area measure needs at least one atom".into()));
        }
        Ok(Self { dim, atoms: merged })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn total_mass(&self) -> f64 {
        self.atoms.iter().map(|a| a.weight).sum()
    }

    /// `Σ w · u ⊗ u`.
    pub fn covariance(&self) -> SymMatrix {
        let mut c = SymMatrix::zeros(self.dim);
        for a in &self.atoms {
            c.add_outer(a.weight, &a.normal);
        }
        c
    }

    /// Area measure of `T K` from that of `K`: each atom `(u, w)` moves to the
    /// direction of `T^{-T} u` with weight `|det T| · w · ‖T^{-T} u‖`.
    pub fn pushforward(&self, t: &GenMatrix) -> Result<Self> {
        check_square(t, self.dim)?;
        let inv_t = t.inverse()?.transpose();
        let jac = t.det()?.abs();
        let atoms = self
            .atoms
            .iter()
            .map(|a| {
                let v = inv_t.mul_vec(&a.normal);
                let s = norm(&v);
                Atom { normal: v.iter().map(|x| x / s).collect(), weight: jac * a.weight * s }
            })
            .collect();
        Ok(Self { dim: self.dim, atoms })
    }
}

/// Free-function form of [`AreaMeasure::pushforward`].
pub fn pushforward_area_measure(sigma: &AreaMeasure, t: &GenMatrix) -> Result<AreaMeasure> {
    sigma.pushforward(t)
}

fn check_square(m: &GenMatrix, dim: usize) -> Result<()> {
    if m.rows() != dim || m.cols() != dim {
        return Err(LinalgError::DimensionMismatch(format!(
            "{}x{} map applied in dimension {dim}",
            m.rows(),
            m.cols()
        ))
        .into());
    }
    Ok(())
}

fn incidence_tol(points: &[Vec<f64>]) -> f64 {
    let r = points.iter().map(|p| norm(p)).fold(1.0, f64::max);
    INCIDENCE_TOL * r
}

fn rank(vectors: &[Vec<f64>], dim: usize) -> usize {
    let mut basis: Vec<Vec<f64>> = Vec::new();
    for v in vectors {
        let mut w = v.clone();
        for q in &basis {
            let c = dot(&w, q);
            w.iter_mut().zip(q).for_each(|(a, b)| *a -= c * b);
        }
        let s = norm(&w);
        if s > 1e-9 {
            basis.push(w.into_iter().map(|x| x / s).collect());
            if basis.len() == dim {
                break;
            }
        }
    }
    basis.len()
}

fn dedup_points(dim: usize, points: Vec<Vec<f64>>) -> Result<Vec<Vec<f64>>> {
    if points.iter().any(|p| p.len() != dim || p.iter().any(|x| !x.is_finite())) {
        return Err(Error::Input(format!("points must be finite vectors of length {dim}")));
    }
    let mut out: Vec<Vec<f64>> = Vec::with_capacity(points.len());
    for p in points {
        let scale = norm(&p).max(1.0);
        if !out.iter().any(|q| dist(q, &p) <= VERTEX_DEDUP_TOL * scale) {
            out.push(p);
        }
    }
    Ok(out)
}

/// Facet hyperplanes of `conv(points)` as vertices of the polar body about
/// the centroid.
fn hull_halfspaces(dim: usize, points: &[Vec<f64>]) -> Result<Vec<(Vec<f64>, f64)>> {
    if dim > MAX_HULL_DIM {
        return Err(Error::Size(format!("convex hull supports n ≤ {MAX_HULL_DIM}, got {dim}")));
    }
    if points.len() > MAX_HULL_POINTS {
        return Err(Error::Size(format!(
            "convex hull supports at most {MAX_HULL_POINTS} points, got {}",
            points.len()
        )));
    }
    let refs: Vec<&[f64]> = points.iter().map(Vec::as_slice).collect();
    if affine_dim(&refs) != dim {
        return Err(Error::Structural("points are not full-dimensional".into()));
    }
    let idx: Vec<usize> = (0..points.len()).collect();
    let c = measure::centroid(points, &idx);
    let rows: Vec<(Vec<f64>, f64)> =
        points.iter().map(|p| (p.iter().zip(&c).map(|(a, b)| a - b).collect(), 1.0)).collect();
    let polar = enumerate_vertices(dim, &rows)?;
    Ok(polar
        .into_iter()
        .map(|a| {
            let s = norm(&a);
            let normal: Vec<f64> = a.iter().map(|x| x / s).collect();
            let offset = 1.0 / s + dot(&normal, &c);
            (normal, offset)
        })
        .collect())
}


/// `iq(Bⁿ) = n·√π / Γ(n/2 + 1)^{1/n}`, the minimum of `iq` over convex bodies.
pub fn euclidean_ball_iq(n: usize) -> f64 {
    let nf = n as f64;
    nf * std::f64::consts::PI.sqrt() / gamma_half_integer(n + 2).powf(1.0 / nf)
}

/// `Γ(k/2)` for a positive integer `k`.
pub(crate) fn gamma_half_integer(k: usize) -> f64 {
    if k % 2 == 0 {
        (1..k / 2).map(|i| i as f64).product()
    } else {
        let mut g = std::f64::consts::PI.sqrt();
        let mut x = 0.5;
        while x < k as f64 / 2.0 - 0.25 {
            g *= x;
            x += 1.0;
        }
        g
    }
}

//! Free sums `conv(K₁ ∪ … ∪ K_a)` of bodies on complementary coordinate
//! blocks.

use serde::{Deserialize, Serialize};

use super::{factorial, ln_factorial, tangent_radius, ClosedForms, Construction, MAX_LISTED};
use crate::error::{Error, Result};
use crate::polytope::{HPolytope, Halfspace, VPolytope};

/// Symmetry and tolerance used when checking summand hypotheses.
const HYPOTHESIS_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct L1SumSpec {
    pub summands: Vec<Construction>,
    pub origin_symmetric: bool,
    pub congruent_facets: bool,
}

impl L1SumSpec {
    pub fn new(summands: Vec<Construction>) -> Self {
        Self { summands, origin_symmetric: false, congruent_facets: false }
    }

    pub fn symmetric_congruent(summands: Vec<Construction>) -> Self {
        Self { summands, origin_symmetric: true, congruent_facets: true }
    }
}

pub fn l1_sum(spec: &L1SumSpec) -> Result<Construction> {
    let parts = &spec.summands;
    if parts.is_empty() {
        return Err(Error::Input("an l1-sum needs at least one summand".into()));
    }
    let mut radii = Vec::with_capacity(parts.len());
    for (i, k) in parts.iter().enumerate() {
        let h = k.hrep.as_ref().ok_or_else(|| Error::Spec(format!("summand {i} has no H-representation")))?;
        if k.vrep.is_none() {
            return Err(Error::Spec(format!("summand {i} has no V-representation")));
        }
        if h.len() as u64 != k.closed.facet_count {
            return Err(Error::Spec(format!("summand {i} H-representation is not irredundant")));
        }
        let r = tangent_radius(h).ok_or_else(|| {
            Error::Spec(format!("summand {i} has facets at different distances from the origin"))
        })?;
        radii.push(r);
    }
    let dims: Vec<usize> = parts.iter().map(|k| k.dim).collect();
    let dim: usize = dims.iter().sum();
    let offsets: Vec<usize> = dims.iter().scan(0, |acc, &b| {
        let o = *acc;
        *acc += b;
        Some(o)
    }).collect();

    let mut vertices = Vec::new();
    for (k, &o) in parts.iter().zip(&offsets) {
        for v in k.vrep.as_ref().map(VPolytope::vertices).unwrap_or_default() {
            let mut p = vec![0.0; dim];
            p[o..o + k.dim].copy_from_slice(v);
            vertices.push(p);
        }
    }

    let inv_sq: f64 = radii.iter().map(|h| 1.0 / (h * h)).sum();
    let h = 1.0 / inv_sq.sqrt();
    let facet_count = parts.iter().try_fold(1u64, |acc, k| acc.checked_mul(k.closed.facet_count));
    let hrep = match facet_count {
        Some(c) if c <= MAX_LISTED => Some(sum_halfspaces(parts, &radii, &offsets, dim, h)?),
        _ => None,
    };

    let weighted: f64 = parts.iter().map(|k| factorial(k.dim) * k.closed.volume).product();
    let volume = weighted / factorial(dim);
    let surface = inv_sq.sqrt() / factorial(dim - 1) * weighted;
    let closed = ClosedForms::new(dim, volume, surface, facet_count.unwrap_or(u64::MAX), vertices.len() as u64)
        .with_inradius(Some(h))
        .with_minimal_iq(minimal_iq(spec, &radii)?);
    Ok(Construction { dim, hrep, vrep: Some(VPolytope::from_extreme_points(dim, vertices)?), closed })
}

fn sum_halfspaces(
    parts: &[Construction],
    radii: &[f64],
    offsets: &[usize],
    dim: usize,
    h: f64,
) -> Result<HPolytope> {
    let lists: Vec<&[Halfspace]> = parts.iter().filter_map(|k| k.hrep.as_ref().map(HPolytope::halfspaces)).collect();
    let mut choice = vec![0usize; parts.len()];
    let mut out = Vec::new();
    loop {
        let mut u = vec![0.0; dim];
        for (i, &j) in choice.iter().enumerate() {
            let hs = &lists[i][j];
            for (t, x) in hs.normal.iter().enumerate() {
                u[offsets[i] + t] = h * x / radii[i];
            }
        }
        out.push(Halfspace::from_unnormalized(&u, h)?);
        // odometer over facet choices
        let mut i = parts.len();
        loop {
            if i == 0 {
                return HPolytope::new(dim, out);
            }
            i -= 1;
            choice[i] += 1;
            if choice[i] < lists[i].len() {
                break;
            }
            choice[i] = 0;
        }
    }
}

/// Minimal iq of the sum when every summand hypothesis checks out.
fn minimal_iq(spec: &L1SumSpec, radii: &[f64]) -> Result<Option<f64>> {
    if !spec.origin_symmetric || !spec.congruent_facets {
        return Ok(None);
    }
    let mut minimal = Vec::with_capacity(radii.len());
    for (k, &h) in spec.summands.iter().zip(radii) {
        let b = k.dim as f64;
        if (h * b.sqrt() - 1.0).abs() > 1e-12 {
            return Ok(None);
        }
        let Ok(p) = k.polytope() else { return Ok(None) };
        if !p.is_origin_symmetric(HYPOTHESIS_TOL) {
            return Ok(None);
        }
        let first = p.facets()[0].measure;
        if p.facets().iter().any(|f| (f.measure - first).abs() > HYPOTHESIS_TOL * first) {
            return Ok(None);
        }
        let cov = p.area_measure().covariance();
        let scale = cov.trace() / b;
        let off_scalar = (0..k.dim)
            .flat_map(|i| (0..k.dim).map(move |j| (i, j)))
            .map(|(i, j)| (cov.get(i, j) - if i == j { scale } else { 0.0 }).abs())
            .fold(0.0, f64::max);
        if off_scalar > HYPOTHESIS_TOL * scale {
            return Ok(None);
        }
        minimal.push(p.iq());
    }
    let n: usize = spec.summands.iter().map(|k| k.dim).sum();
    let nf = n as f64;
    let ln_prefactor: f64 = spec
        .summands
        .iter()
        .map(|k| {
            let b = k.dim as f64;
            -1.5 * b * b.ln() + ln_factorial(k.dim)
        })
        .sum::<f64>()
        - ln_factorial(n);
    let ln_parts: f64 = spec.summands.iter().zip(&minimal).map(|(k, d)| k.dim as f64 / nf * d.ln()).sum();
    Ok(Some((ln_prefactor / nf + 1.5 * nf.ln() + ln_parts).exp()))
}

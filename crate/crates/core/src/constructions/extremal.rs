//! Polytopes with prescribed facet or vertex counts and nearly extremal iq.

use serde::{Deserialize, Serialize};

use super::{cartesian_product, cross_polytope, cube, l1_sum, pad_facets, pad_vertices, simplex_regular};
use super::{Construction, L1SumSpec};
use crate::error::{Error, Result};
use crate::polytope::Polytope;

/// Default padding offset as a fraction of the body's diameter.
pub const DEFAULT_PADDING_FRACTION: f64 = 1e-3;
/// Number of times the padding offset is halved before giving up.
pub const PADDING_RETRIES: usize = 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "branch", rename_all = "snake_case")]
pub enum FacetBranch {
    PaddedSimplex,
    PaddedCrossPolytope,
    /// `(B_{ℓ1}^m)^a × L` with `L` a padded `B_{ℓ1}^r` carrying `b` facets.
    Product { m: usize, a: usize, r: usize, b: u64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "branch", rename_all = "snake_case")]
pub enum VertexBranch {
    PaddedCube,
    /// Free sum of `a − 1` copies of `m^{-1/2}[−1,1]^m` and one
    /// `r^{-1/2}[−1,1]^r`.
    L1Sum { m: usize, a: usize, r: usize },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExtremalFacet {
    pub construction: Construction,
    pub branch: FacetBranch,
    /// `2n/√m` on the product branch.
    pub predicted_bound: Option<f64>,
    pub padding_perturbation: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExtremalVertex {
    /// The unpadded body, with its minimal iq when known.
    pub base: Construction,
    pub construction: Construction,
    pub branch: VertexBranch,
    /// `√(n log(β/n))`.
    pub target_band: f64,
    pub padding_perturbation: f64,
}

/// Whether `2ⁿ ≤ x`, without overflow.
fn pow2_at_most(n: usize, x: u64) -> bool {
    if n > 50 {
        return (n as f64) * std::f64::consts::LN_2 <= (x as f64).ln();
    }
    (1u64 << n) <= x
}

/// Branch selection and block arithmetic for a facet count.
pub fn facet_parameters(n: usize, phi: u64) -> Result<FacetBranch> {
    if n == 0 || phi < n as u64 + 1 {
        return Err(Error::Spec(format!("need φ ≥ n + 1, got n={n}, φ={phi}")));
    }
    if pow2_at_most(n, phi) {
        return Ok(FacetBranch::PaddedCrossPolytope);
    }
    if phi <= 3 * n as u64 {
        return Ok(FacetBranch::PaddedSimplex);
    }
    // φ/n > 2^m/m ⇔ φ·m > n·2^m; 2^m/m is nondecreasing, so scan upward.
    let holds = |m: usize| (phi as u128) * (m as u128) > (n as u128) << m;
    let mut m = 2;
    while m + 1 < n && holds(m + 1) {
        m += 1;
    }
    if !holds(m) {
        return Err(Error::Internal(format!("no admissible block size for n={n}, φ={phi}")));
    }
    let r = (n - 1) % m + 1;
    let a = (n - r) / m;
    let b = phi
        .checked_sub((a as u64) << m)
        .ok_or_else(|| Error::Internal(format!("facet budget exceeded for n={n}, φ={phi}")))?;
    assert!(a >= 1 && b >= 1u64 << r, "block arithmetic broke b ≥ 2^r for n={n}, φ={phi}");
    Ok(FacetBranch::Product { m, a, r, b })
}

/// Branch selection and block arithmetic for a vertex count.
pub fn vertex_parameters(n: usize, beta: u64) -> Result<VertexBranch> {
    if n == 0 || beta % 2 == 1 || beta < 2 * n as u64 {
        return Err(Error::Spec(format!("need β even and β ≥ 2n, got n={n}, β={beta}")));
    }
    if pow2_at_most(n, beta) {
        return Ok(VertexBranch::PaddedCube);
    }
    // 2^m/m ≤ β/n ⇔ n·2^m ≤ β·m
    let holds = |m: usize| (n as u128) << m <= (beta as u128) * (m as u128);
    let mut m = 2;
    while m + 1 < n && holds(m + 1) {
        m += 1;
    }
    let r = (n - 1) % m + 1;
    let a = (n - r) / m + 1;
    if a < 2 {
        return Err(Error::Internal(format!("block arithmetic gave a < 2 for n={n}, β={beta}")));
    }
    Ok(VertexBranch::L1Sum { m, a, r })
}

/// Runs `f` with the default padding offset, halving it on geometry errors.
fn with_retries<T>(diameter: f64, mut f: impl FnMut(f64) -> Result<T>) -> Result<T> {
    let mut delta = DEFAULT_PADDING_FRACTION * diameter;
    let mut last = None;
    for _ in 0..=PADDING_RETRIES {
        match f(delta) {
            Err(Error::Geometry(msg)) => last = Some(msg),
            other => return other,
        }
        delta /= 2.0;
    }
    Err(Error::Geometry(last.unwrap_or_default()))
}

fn padded_to_facets(base: &Construction, target: u64) -> Result<(Construction, f64)> {
    let p = base.polytope()?;
    if p.facet_count() as u64 == target {
        return Ok((base.clone(), 0.0));
    }
    let h = base.hrep.clone().map(Ok).unwrap_or_else(|| p.hrep())?;
    let padded = with_retries(p.diameter(), |d| pad_facets(&h, target as usize, d))?;
    let q = Polytope::from_hrep(&padded.hrep)?;
    Ok((Construction::from_polytope(&q)?, padded.perturbation))
}

/// Polytope in ℝⁿ with exactly `phi` facets and iq of the optimal order.
pub fn extremal_facet_polytope(n: usize, phi: u64) -> Result<ExtremalFacet> {
    let branch = facet_parameters(n, phi)?;
    match branch {
        FacetBranch::PaddedSimplex => {
            let (construction, pert) = padded_to_facets(&simplex_regular(n)?, phi)?;
            Ok(ExtremalFacet { construction, branch, predicted_bound: None, padding_perturbation: pert })
        }
        FacetBranch::PaddedCrossPolytope => {
            let (construction, pert) = padded_to_facets(&cross_polytope(n, 1.0)?, phi)?;
            Ok(ExtremalFacet { construction, branch, predicted_bound: None, padding_perturbation: pert })
        }
        FacetBranch::Product { m, a, r, b } => {
            let block = cross_polytope(m, 1.0)?;
            let mut factors = vec![block.clone(); a];
            let mut pert = 0.0;
            if r == 1 && b > 2 {
                // A segment has two facets; the surplus goes to the first block.
                let (first, p) = padded_to_facets(&block, (1u64 << m) + b - 2)?;
                factors[0] = first;
                pert += p;
                factors.push(cross_polytope(1, 1.0)?);
            } else {
                let (last, p) = padded_to_facets(&cross_polytope(r, 1.0)?, b)?;
                factors.push(last);
                pert += p;
            }
            let construction = cartesian_product(&factors, true)?;
            if construction.closed.facet_count != phi {
                return Err(Error::Internal(format!(
                    "product has {} facets, expected {phi}",
                    construction.closed.facet_count
                )));
            }
            let predicted = 2.0 * n as f64 / (m as f64).sqrt();
            Ok(ExtremalFacet { construction, branch, predicted_bound: Some(predicted), padding_perturbation: pert })
        }
    }
}

/// Polytope in ℝⁿ with exactly `beta` vertices whose minimal iq is of the
/// optimal order.
pub fn extremal_vertex_polytope(n: usize, beta: u64) -> Result<ExtremalVertex> {
    let branch = vertex_parameters(n, beta)?;
    let base = match branch {
        VertexBranch::PaddedCube => cube(n, 1.0)?,
        VertexBranch::L1Sum { m, a, r } => {
            let mut summands = vec![cube(m, 1.0 / (m as f64).sqrt())?; a - 1];
            summands.push(cube(r, 1.0 / (r as f64).sqrt())?);
            l1_sum(&L1SumSpec::symmetric_congruent(summands))?
        }
    };
    let target_band = (n as f64 * (beta as f64 / n as f64).ln()).sqrt();
    if base.closed.vertex_count == beta {
        return Ok(ExtremalVertex { construction: base.clone(), base, branch, target_band, padding_perturbation: 0.0 });
    }
    let p = base.polytope()?;
    let v = p.vrep();
    let padded = with_retries(p.diameter(), |d| pad_vertices(&v, beta as usize, d, true))?;
    let q = Polytope::from_vrep(&padded.vrep)?;
    let construction = Construction::from_polytope(&q)?;
    Ok(ExtremalVertex { base, construction, branch, target_band, padding_perturbation: padded.perturbation })
}

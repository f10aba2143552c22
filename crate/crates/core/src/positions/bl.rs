//! The transform `B = (YYᵀ)^{1/2}` of a slab body
//! `K = {x : |⟨x, y_i⟩| ≤ 1}` and the decomposition of the identity it
//! induces.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numkit::{dot, norm, psd_power, sym_eig, GenMatrix, SymMatrix};
use crate::polytope::{mc_volume, HPolytope, Halfspace, Polytope, MAX_HALFSPACES, MAX_HULL_DIM};

const PAIR_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BLDecomposition {
    pub b: SymMatrix,
    pub weights: Vec<f64>,
    pub directions: Vec<Vec<f64>>,
    /// `‖Σ c_i u_i ⊗ u_i − I‖_max`.
    pub identity_residual: f64,
}

/// `{x : |⟨x, y_i⟩| ≤ 1}`.
pub fn slab_polytope(ys: &[Vec<f64>]) -> Result<HPolytope> {
    let dim = ys.first().map(Vec::len).ok_or_else(|| Error::Input("no slab vectors".into()))?;
    let mut hs = Vec::with_capacity(2 * ys.len());
    for y in ys {
        let s = norm(y);
        if !(s > 0.0) || y.len() != dim {
            return Err(Error::Input("slab vectors must be nonzero and of equal length".into()));
        }
        let u: Vec<f64> = y.iter().map(|x| x / s).collect();
        hs.push(Halfspace { normal: u.iter().map(|x| -x).collect(), offset: 1.0 / s });
        hs.push(Halfspace { normal: u, offset: 1.0 / s });
    }
    HPolytope::new(dim, hs)
}

/// Slab vectors `y_i = u_i/τ_i`, one per ± pair of halfspaces.
fn slab_vectors(h: &HPolytope) -> Result<Vec<Vec<f64>>> {
    let hs = h.halfspaces();
    let mut used = vec![false; hs.len()];
    let mut ys = Vec::new();
    for i in 0..hs.len() {
        if used[i] {
            continue;
        }
        let partner = (i + 1..hs.len()).find(|&j| {
            !used[j]
                && hs[i].normal.iter().zip(&hs[j].normal).all(|(a, b)| (a + b).abs() <= PAIR_TOL)
                && (hs[i].offset - hs[j].offset).abs() <= PAIR_TOL * hs[i].offset
        });
        let Some(j) = partner else {
            return Err(Error::Input(format!("halfspace {i} has no opposite partner; the body is not origin-symmetric")));
        };
        used[i] = true;
        used[j] = true;
        ys.push(hs[i].normal.iter().map(|x| x / hs[i].offset).collect());
    }
    Ok(ys)
}

/// Returns the decomposition and `BK = {x : |⟨x, u_i⟩| ≤ 1/√c_i}`.
pub fn bl_transform(h: &HPolytope) -> Result<(BLDecomposition, HPolytope)> {
    let n = h.dim();
    let ys = slab_vectors(h)?;
    let y = GenMatrix::from_columns(&ys)?;
    let yyt = y.gram();
    let eig = sym_eig(&yyt)?;
    if eig.values[n - 1] <= 1e-12 * eig.values[0] {
        return Err(Error::Degenerate("slab vectors do not span the space".into()));
    }
    let b = psd_power(&yyt, 0.5)?;
    let c = psd_power(&yyt, -0.5)?.to_gen().matmul(&y)?;
    let mut weights = Vec::with_capacity(ys.len());
    let mut directions = Vec::with_capacity(ys.len());
    for j in 0..ys.len() {
        let col = c.column(j);
        let cj = dot(&col, &col);
        if cj < 1e-12 {
            log::warn!("slab {j} has near-zero weight {cj:e}");
        }
        let s = cj.sqrt();
        weights.push(cj);
        directions.push(col.iter().map(|x| x / s).collect::<Vec<f64>>());
    }
    let mut sum = SymMatrix::zeros(n);
    for (w, u) in weights.iter().zip(&directions) {
        sum.add_outer(*w, u);
    }
    let identity_residual = sum.max_abs_diff(&SymMatrix::identity(n));
    let bk_slabs: Vec<Vec<f64>> =
        weights.iter().zip(&directions).map(|(w, u)| u.iter().map(|x| x * w.sqrt()).collect()).collect();
    let bk = slab_polytope(&bk_slabs)?;
    Ok((BLDecomposition { b, weights, directions, identity_residual }, bk))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VolumeBoundReport {
    /// `vol(BK)^{1/n}` (Monte Carlo mean above the exact cap).
    pub lhs: f64,
    /// `∏ (2/√c_i)^{c_i/n}`.
    pub product_bound: f64,
    /// `2√(m/n)`.
    pub weak_bound: f64,
    pub exact: bool,
    /// 4σ halfwidth of `lhs` on the Monte Carlo path, 0 otherwise.
    pub halfwidth: f64,
    pub samples: u64,
    pub holds: bool,
}

/// Checks `vol(BK)^{1/n} ≤ ∏(2/√c_i)^{c_i/n} ≤ 2√(m/n)`.
pub fn bl_volume_bound_check(
    bk: &HPolytope,
    dec: &BLDecomposition,
    samples: u64,
    seed: u64,
) -> Result<VolumeBoundReport> {
    let n = bk.dim() as f64;
    let m = dec.weights.len() as f64;
    let product_bound =
        dec.weights.iter().map(|c| c / n * (2.0 / c.sqrt()).ln()).sum::<f64>().exp();
    let weak_bound = 2.0 * (m / n).sqrt();
    let exact = bk.dim() <= MAX_HULL_DIM && bk.len() <= MAX_HALFSPACES;
    let (lhs, lower, halfwidth, used) = if exact {
        let v = Polytope::from_hrep(bk)?.volume().powf(1.0 / n);
        (v, v, 0.0, 0)
    } else {
        let est = mc_volume(bk, samples, seed)?;
        let lhs = est.mean.powf(1.0 / n);
        let lower = (est.mean - 4.0 * est.std_error).max(0.0).powf(1.0 / n);
        (lhs, lower, lhs - lower, samples)
    };
    let tol = 1e-9 * weak_bound;
    let holds = lower <= product_bound + tol && product_bound <= weak_bound + tol;
    Ok(VolumeBoundReport { lhs, product_bound, weak_bound, exact, halfwidth, samples: used, holds })
}

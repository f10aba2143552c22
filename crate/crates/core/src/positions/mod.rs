//! Volume-preserving linear positions: the minimal surface area position and
//! the surface-isotropic transform of a symmetric slab body.

mod bl;

use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numkit::{dot, normalize_det_one, psd_power, schatten1, sym_eig, GenMatrix, LinalgError, SymMatrix};
use crate::polytope::{AreaMeasure, Polytope};
use crate::rng::stream_rng;

pub use bl::{bl_transform, bl_volume_bound_check, slab_polytope, BLDecomposition, VolumeBoundReport};

pub const DEFAULT_TOL: f64 = 1e-8;
pub const DEFAULT_MAX_ITER: usize = 500;
/// Random restarts allowed once the damped iteration stalls.
pub const MAX_RESTARTS: usize = 20;
/// Size of the random SL perturbation used on restart.
const RESTART_SCALE: f64 = 1e-2;
/// Smallest damping exponent tried before declaring a stall.
const MIN_STEP: f64 = 1.0 / (1u64 << 30) as f64;
/// Halvings of the Newton step tried before the fixed-point step.
const NEWTON_HALVINGS: usize = 20;

/// `Σ w ‖A^{-T} u‖ · |det A|`, the surface area of `AK` from `σ_K`.
pub fn surface_area_of_image(sigma: &AreaMeasure, a: &GenMatrix) -> Result<f64> {
    if a.rows() != sigma.dim() || a.cols() != sigma.dim() {
        return Err(LinalgError::DimensionMismatch(format!(
            "{}x{} map for a measure in dimension {}",
            a.rows(),
            a.cols(),
            sigma.dim()
        ))
        .into());
    }
    let inv_t = a.inverse()?.transpose();
    let jac = a.det()?.abs();
    Ok(jac * sigma.atoms().iter().map(|at| at.weight * crate::numkit::norm(&inv_t.mul_vec(&at.normal))).sum::<f64>())
}

/// `‖Cov(σ)·n/tr Cov(σ) − I‖_max`.
pub fn isotropy_residual(sigma: &AreaMeasure) -> f64 {
    let cov = sigma.covariance();
    let n = sigma.dim();
    let s = n as f64 / cov.trace();
    let mut r: f64 = 0.0;
    for i in 0..n {
        for j in 0..n {
            let target = if i == j { 1.0 } else { 0.0 };
            r = r.max((cov.get(i, j) * s - target).abs());
        }
    }
    r
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PettyOptions {
    pub tol: f64,
    pub max_iter: usize,
    /// Seed for the restart perturbations.
    pub seed: u64,
}

impl Default for PettyOptions {
    fn default() -> Self {
        Self { tol: DEFAULT_TOL, max_iter: DEFAULT_MAX_ITER, seed: 0 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PositionResult {
    /// Volume-preserving map `A` with `AK` near the minimal position.
    pub map: GenMatrix,
    pub iq_before: f64,
    pub iq_after: f64,
    pub isotropy_residual: f64,
    pub schatten1_a: f64,
    pub iterations: usize,
    pub restarts: usize,
    /// Whether the isotropy residual reached the tolerance.
    pub certified: bool,
}

struct Iterate {
    a: GenMatrix,
    surface: f64,
    residual: f64,
}

/// Minimizes `iq(AK)` over `det A = 1`.
///
/// Each iteration first tries `A ← e^{θX} A` for the Newton step `X`, halving
/// θ from 1 until the surface area decreases. If none does, it falls back to
/// `A ← normalize(M^θ A)` with `M = Cov(σ_{AK})·n/tr`, θ again halved from 1.
/// When no step helps before the residual reaches `tol`, the best iterate is
/// perturbed by a small random SL map, up to [`MAX_RESTARTS`] times.
pub fn petty_minimize(k: &Polytope, opts: &PettyOptions) -> Result<PositionResult> {
    let n = k.dim();
    let sigma = k.area_measure();
    let vol_factor = k.volume().powf((n as f64 - 1.0) / n as f64);
    let iq_before = k.surface_area() / vol_factor;
    let evaluate = |a: GenMatrix| -> Result<Iterate> {
        let pushed = sigma.pushforward(&a)?;
        Ok(Iterate { surface: pushed.total_mass(), residual: isotropy_residual(&pushed), a })
    };

    let mut current = evaluate(GenMatrix::identity(n))?;
    let mut best = Iterate { a: current.a.clone(), surface: current.surface, residual: current.residual };
    let mut rng = stream_rng(opts.seed, 0);
    let mut iterations = 0;
    let mut restarts = 0;
    while current.residual >= opts.tol && iterations < opts.max_iter {
        iterations += 1;
        let pushed = sigma.pushforward(&current.a)?;
        let cov = pushed.covariance();
        let eig = sym_eig(&cov)?;
        if eig.values[n - 1] <= 1e-14 * eig.values[0] {
            return Err(Error::Degenerate("area measure is concentrated on a proper subspace".into()));
        }
        let mut accepted = None;
        if let Ok(x) = sym_eig(&newton_log_step(&pushed)?) {
            let mut theta = 1.0;
            for _ in 0..NEWTON_HALVINGS {
                let step = x.reconstruct_with(|l| (theta * l).exp()).to_gen().matmul(&current.a)?;
                let next = evaluate(normalize_det_one(&step)?)?;
                if improves(&next, &current) {
                    accepted = Some(next);
                    break;
                }
                theta /= 2.0;
            }
        }
        let m = cov.scale(n as f64 / cov.trace());
        let mut theta = 1.0;
        while accepted.is_none() && theta >= MIN_STEP {
            let step = psd_power(&m, theta)?.to_gen().matmul(&current.a)?;
            let next = evaluate(normalize_det_one(&step)?)?;
            if improves(&next, &current) {
                accepted = Some(next);
            }
            theta /= 2.0;
        }
        match accepted {
            Some(next) => current = next,
            None => {
                if restarts == MAX_RESTARTS {
                    break;
                }
                restarts += 1;
                let g: Vec<f64> = (0..n * n).map(|_| rng.sample::<f64, _>(StandardNormal) * RESTART_SCALE).collect();
                let mut p = GenMatrix::new(n, n, g)?;
                for i in 0..n {
                    p.set(i, i, p.get(i, i) + 1.0);
                }
                current = evaluate(normalize_det_one(&p.matmul(&best.a)?)?)?;
            }
        }
        if improves(&current, &best) {
            best = Iterate { a: current.a.clone(), surface: current.surface, residual: current.residual };
        }
    }

    Ok(PositionResult {
        schatten1_a: schatten1(&best.a)?,
        iq_after: best.surface / vol_factor,
        isotropy_residual: best.residual,
        certified: best.residual < opts.tol,
        map: best.a,
        iq_before,
        iterations,
        restarts,
    })
}

/// Newton step `X` (symmetric, trace zero) for `X ↦ Σ w‖e^{−X}v‖` at `X = 0`,
/// from the model `−⟨X, C⟩ + Σ w(‖Xv‖² − (vᵀXv)²/2)`.
fn newton_log_step(sigma: &AreaMeasure) -> Result<SymMatrix> {
    let n = sigma.dim();
    let mut basis = Vec::new();
    for i in 0..n {
        for j in i..n {
            basis.push((i, j));
        }
    }
    let d = basis.len();
    let apply = |(i, j): (usize, usize), v: &[f64]| {
        let mut y = vec![0.0; n];
        if i == j {
            y[i] = v[i];
        } else {
            let s = std::f64::consts::FRAC_1_SQRT_2;
            y[i] = s * v[j];
            y[j] = s * v[i];
        }
        y
    };
    let mut kkt = GenMatrix::zeros(d + 1, d + 1);
    let mut rhs = vec![0.0; d + 1];
    for at in sigma.atoms() {
        let v = &at.normal;
        let ys: Vec<Vec<f64>> = basis.iter().map(|&e| apply(e, v)).collect();
        let a: Vec<f64> = ys.iter().map(|y| dot(y, v)).collect();
        for k in 0..d {
            rhs[k] += at.weight * a[k];
            for l in 0..d {
                let h = kkt.get(k, l) + 2.0 * at.weight * (dot(&ys[k], &ys[l]) - 0.5 * a[k] * a[l]);
                kkt.set(k, l, h);
            }
        }
    }
    for (k, &(i, j)) in basis.iter().enumerate() {
        if i == j {
            kkt.set(k, d, 1.0);
            kkt.set(d, k, 1.0);
        }
    }
    let x = kkt.solve(&rhs)?;
    let mut data = vec![0.0; n * n];
    for (k, &(i, j)) in basis.iter().enumerate() {
        let c = if i == j { x[k] } else { x[k] * std::f64::consts::FRAC_1_SQRT_2 };
        data[i * n + j] = c;
        data[j * n + i] = c;
    }
    Ok(SymMatrix::new(n, data)?)
}

/// Strictly smaller surface, or equal up to round-off with a smaller residual.
fn improves(a: &Iterate, b: &Iterate) -> bool {
    let slack = 4.0 * f64::EPSILON * b.surface;
    a.surface < b.surface - slack || (a.surface <= b.surface + slack && a.residual < b.residual)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SchattenReport {
    /// `‖A‖_{S1}`.
    pub lhs: f64,
    /// `n · iq(K) / iq(AK)`.
    pub rhs: f64,
    pub slack: f64,
    pub holds: bool,
}

/// Checks `‖A‖_{S1} ≤ n·iq(K)/iq(AK)` for a minimal-position map `A`.
pub fn schatten_bound_check(k: &Polytope, result: &PositionResult) -> Result<SchattenReport> {
    if !result.certified {
        return Err(Error::Input("the position result is not certified".into()));
    }
    let n = k.dim() as f64;
    let lhs = result.schatten1_a;
    let rhs = n * k.iq() / result.iq_after;
    Ok(SchattenReport { lhs, rhs, slack: rhs - lhs, holds: lhs <= rhs + 1e-8 })
}

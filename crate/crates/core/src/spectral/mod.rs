//! Upper bounds on the first Dirichlet eigenvalue of `BK` through the test
//! function `φ(x) = ∏(1 − c_i⟨x, u_i⟩²)`.

pub mod quadrature;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numkit::dot;
use crate::polytope::{sample_box, vertex_enumeration, HPolytope, MAX_HALFSPACES, MAX_VERTEX_ENUM_DIM};
use crate::positions::{bl_transform, bl_volume_bound_check, BLDecomposition, VolumeBoundReport};
use crate::rng::{chunked, derive_seed};

pub const DEFAULT_SAMPLES: u64 = 1_000_000;
/// Width of the reported confidence interval in standard errors.
pub const CONFIDENCE_SIGMAS: f64 = 4.0;
/// Dimensions up to this use exact quadrature.
pub const QUADRATURE_MAX_DIM: usize = 2;
const MIN_ACCEPTANCE: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TestFunction {
    pub weights: Vec<f64>,
    pub directions: Vec<Vec<f64>>,
}

impl TestFunction {
    pub fn new(weights: Vec<f64>, directions: Vec<Vec<f64>>) -> Result<Self> {
        if weights.len() != directions.len() || weights.is_empty() {
            return Err(Error::Input("test function needs one weight per direction".into()));
        }
        Ok(Self { weights, directions })
    }

    pub fn from_decomposition(dec: &BLDecomposition) -> Self {
        Self { weights: dec.weights.clone(), directions: dec.directions.clone() }
    }

    pub fn dim(&self) -> usize {
        self.directions[0].len()
    }

    /// The test function of `sK`: `x ↦ φ(x/s)`.
    pub fn scaled(&self, s: f64) -> Self {
        Self { weights: self.weights.iter().map(|c| c / (s * s)).collect(), directions: self.directions.clone() }
    }

    /// `(φ(x), ‖∇φ(x)‖²)`.
    fn value_and_grad_sq(&self, x: &[f64], grad: &mut [f64]) -> (f64, f64) {
        let factors: Vec<f64> =
            self.weights.iter().zip(&self.directions).map(|(c, u)| 1.0 - c * dot(x, u).powi(2)).collect();
        self.fill_grad(x, &factors, grad);
        (factors.iter().product(), grad.iter().map(|g| g * g).sum())
    }

    fn fill_grad(&self, x: &[f64], factors: &[f64], grad: &mut [f64]) {
        grad.iter_mut().for_each(|g| *g = 0.0);
        for (i, (c, u)) in self.weights.iter().zip(&self.directions).enumerate() {
            let others: f64 = factors.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, f)| f).product();
            let coef = -2.0 * c * dot(x, u) * others;
            grad.iter_mut().zip(u).for_each(|(g, ui)| *g += coef * ui);
        }
    }
}

/// `∏(1 − c_i⟨x, u_i⟩²)`.
pub fn phi_eval(tf: &TestFunction, x: &[f64]) -> f64 {
    tf.weights.iter().zip(&tf.directions).map(|(c, u)| 1.0 - c * dot(x, u).powi(2)).product()
}

/// `−2 Σ_i c_i⟨x, u_i⟩ u_i ∏_{j≠i}(1 − c_j⟨x, u_j⟩²)`.
pub fn phi_grad(tf: &TestFunction, x: &[f64]) -> Vec<f64> {
    let factors: Vec<f64> =
        tf.weights.iter().zip(&tf.directions).map(|(c, u)| 1.0 - c * dot(x, u).powi(2)).collect();
    let mut g = vec![0.0; x.len()];
    tf.fill_grad(x, &factors, &mut g);
    g
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RayleighEstimate {
    /// `∫‖∇φ‖² / ∫φ²` over the body.
    pub lambda_bound: f64,
    /// Confidence halfwidth at [`CONFIDENCE_SIGMAS`]; zero on the quadrature path.
    pub halfwidth: f64,
    pub exact: bool,
    /// Samples drawn (zero on the quadrature path).
    pub samples: u64,
    pub seed: u64,
}

/// Rayleigh quotient of the test function over `bk`.
pub fn rayleigh_bound(bk: &HPolytope, tf: &TestFunction, samples: u64, seed: u64) -> Result<RayleighEstimate> {
    if tf.dim() != bk.dim() {
        return Err(Error::Input("test function and body dimensions differ".into()));
    }
    match bk.dim() {
        1 => Ok(exact_estimate(quadrature_1d(bk, tf), seed)),
        2 => Ok(exact_estimate(quadrature_2d(bk, tf)?, seed)),
        _ => monte_carlo(bk, tf, samples, seed),
    }
}

fn exact_estimate((num, den): (f64, f64), seed: u64) -> RayleighEstimate {
    RayleighEstimate { lambda_bound: num / den, halfwidth: 0.0, exact: true, samples: 0, seed }
}

fn rule_size(tf: &TestFunction) -> usize {
    // ∫φ² has degree 4m
    2 * tf.weights.len() + 2
}

fn quadrature_1d(bk: &HPolytope, tf: &TestFunction) -> (f64, f64) {
    let hi = bk.halfspaces().iter().filter(|h| h.normal[0] > 0.0).map(|h| h.offset).fold(f64::INFINITY, f64::min);
    let lo = -bk.halfspaces().iter().filter(|h| h.normal[0] < 0.0).map(|h| h.offset).fold(f64::INFINITY, f64::min);
    let mut grad = [0.0];
    let (mut num, mut den) = (0.0, 0.0);
    for (x, w) in quadrature::interval_rule(lo, hi, rule_size(tf)) {
        let (p, g2) = tf.value_and_grad_sq(&[x], &mut grad);
        num += w * g2;
        den += w * p * p;
    }
    (num, den)
}

fn quadrature_2d(bk: &HPolytope, tf: &TestFunction) -> Result<(f64, f64)> {
    let (v, _) = vertex_enumeration(bk)?;
    let mut pts: Vec<[f64; 2]> = v.vertices().iter().map(|p| [p[0], p[1]]).collect();
    pts.sort_by(|a, b| a[1].atan2(a[0]).total_cmp(&b[1].atan2(b[0])));
    let k = rule_size(tf);
    let mut grad = [0.0; 2];
    let (mut num, mut den) = (0.0, 0.0);
    for j in 0..pts.len() {
        let next = pts[(j + 1) % pts.len()];
        for (x, w) in quadrature::triangle_rule(&[0.0, 0.0], &pts[j], &next, k) {
            let (p, g2) = tf.value_and_grad_sq(&x, &mut grad);
            num += w * g2;
            den += w * p * p;
        }
    }
    Ok((num, den))
}

#[derive(Default, Clone, Copy)]
struct Moments {
    f: f64,
    g: f64,
    ff: f64,
    gg: f64,
    fg: f64,
    hits: u64,
}

/// Box bounding `bk`: from its vertices when enumeration is affordable,
/// otherwise `[−√m, √m]ⁿ`, which contains every body whose slab weights
/// decompose the identity.
fn sampling_box(bk: &HPolytope, tf: &TestFunction) -> Result<(Vec<f64>, Vec<f64>)> {
    let n = bk.dim();
    if n <= MAX_VERTEX_ENUM_DIM && bk.len() <= MAX_HALFSPACES {
        let (v, _) = vertex_enumeration(bk)?;
        return Ok(crate::polytope::bounding_box(v.vertices()));
    }
    let r = (tf.weights.len() as f64).sqrt();
    Ok((vec![-r; n], vec![r; n]))
}

fn monte_carlo(bk: &HPolytope, tf: &TestFunction, samples: u64, seed: u64) -> Result<RayleighEstimate> {
    if samples < 2 {
        return Err(Error::Input("Monte Carlo path needs at least two samples".into()));
    }
    let n = bk.dim();
    let (lo, hi) = sampling_box(bk, tf)?;
    let chunks = chunked(samples, seed, |rng, count| {
        let mut x = vec![0.0; n];
        let mut grad = vec![0.0; n];
        let mut m = Moments::default();
        for _ in 0..count {
            sample_box(rng, &lo, &hi, &mut x);
            if !bk.contains(&x) {
                continue;
            }
            let (p, g2) = tf.value_and_grad_sq(&x, &mut grad);
            let g = p * p;
            m.f += g2;
            m.g += g;
            m.ff += g2 * g2;
            m.gg += g * g;
            m.fg += g2 * g;
            m.hits += 1;
        }
        m
    });
    let mut t = Moments::default();
    for m in chunks {
        t.f += m.f;
        t.g += m.g;
        t.ff += m.ff;
        t.gg += m.gg;
        t.fg += m.fg;
        t.hits += m.hits;
    }
    let nf = samples as f64;
    if (t.hits as f64) < (MIN_ACCEPTANCE * nf).max(2.0) {
        return Err(Error::Sampling(format!("only {} of {samples} samples landed in the body", t.hits)));
    }
    let (mf, mg) = (t.f / nf, t.g / nf);
    let ratio = mf / mg;
    let var_f = t.ff / nf - mf * mf;
    let var_g = t.gg / nf - mg * mg;
    let cov = t.fg / nf - mf * mg;
    let var_ratio = (var_f - 2.0 * ratio * cov + ratio * ratio * var_g) / (mg * mg * nf);
    let scale = (var_f.abs() + ratio * ratio * var_g.abs()) / (mg * mg * nf);
    if var_ratio < -1e-9 * scale {
        return Err(Error::Internal(format!("negative ratio variance {var_ratio:e}")));
    }
    Ok(RayleighEstimate {
        lambda_bound: ratio,
        halfwidth: CONFIDENCE_SIGMAS * var_ratio.max(0.0).sqrt(),
        exact: false,
        samples,
        seed,
    })
}

/// First Dirichlet eigenvalue `Σ π²/s_i²` of a box with the given sides.
pub fn box_lambda_reference(sides: &[f64]) -> Result<f64> {
    if sides.is_empty() || sides.iter().any(|s| !(*s > 0.0)) {
        return Err(Error::Input("box sides must be positive".into()));
    }
    Ok(sides.iter().map(|s| std::f64::consts::PI.powi(2) / (s * s)).sum())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScalingReport {
    pub scale: f64,
    pub bound: f64,
    pub scaled_bound: f64,
    /// `bound / scaled_bound`, which should equal `scale²`.
    pub ratio: f64,
    pub exact: bool,
    pub holds: bool,
}

/// Compares the bound on `K` with the bound on `sK` for the rescaled test
/// function. Both use the same sample stream, so the check is tight on the
/// Monte Carlo path too.
pub fn scaling_law_check(
    bk: &HPolytope,
    tf: &TestFunction,
    s: f64,
    samples: u64,
    seed: u64,
) -> Result<ScalingReport> {
    if !(s > 0.0) {
        return Err(Error::Input("scale must be positive".into()));
    }
    let a = rayleigh_bound(bk, tf, samples, seed)?;
    let b = rayleigh_bound(&bk.scale(s), &tf.scaled(s), samples, seed)?;
    let ratio = a.lambda_bound / b.lambda_bound;
    let rel = (ratio / (s * s) - 1.0).abs();
    let tol = if a.exact { 1e-12 } else { a.halfwidth / a.lambda_bound + b.halfwidth / b.lambda_bound };
    Ok(ScalingReport {
        scale: s,
        bound: a.lambda_bound,
        scaled_bound: b.lambda_bound,
        ratio,
        exact: a.exact,
        holds: rel <= tol,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectralCertificate {
    pub n: usize,
    pub m: usize,
    pub lambda_bound: f64,
    pub halfwidth: f64,
    pub five_m: f64,
    /// `vol(BK)^{1/n}`.
    pub vol_bound_lhs: f64,
    /// `2√(m/n)`.
    pub vol_bound_rhs: f64,
    /// Halfwidth of `vol_bound_lhs`; zero when the volume is exact.
    pub vol_halfwidth: f64,
    /// `∏(2/√c_i)^{c_i/n}`.
    pub vol_product_bound: f64,
    pub volume_bound_slack: f64,
    pub identity_residual: f64,
    /// `Σ c_i`, which equals `n` for a decomposition of the identity.
    pub weight_sum: f64,
    pub exact: bool,
    pub samples: u64,
    pub seed: u64,
    pub passes: bool,
}

/// Runs the transform, the volume bound and the eigenvalue bound on an
/// origin-symmetric body given by `2m` paired halfspaces.
pub fn spectral_certificate(h: &HPolytope, samples: u64, seed: u64) -> Result<SpectralCertificate> {
    let (dec, bk) = bl_transform(h)?;
    let vol: VolumeBoundReport = bl_volume_bound_check(&bk, &dec, samples, derive_seed(seed, 0))?;
    let tf = TestFunction::from_decomposition(&dec);
    let ray = rayleigh_bound(&bk, &tf, samples, derive_seed(seed, 1))?;
    let m = dec.weights.len();
    let five_m = 5.0 * m as f64;
    Ok(SpectralCertificate {
        n: h.dim(),
        m,
        lambda_bound: ray.lambda_bound,
        halfwidth: ray.halfwidth,
        five_m,
        vol_bound_lhs: vol.lhs,
        vol_bound_rhs: vol.weak_bound,
        vol_halfwidth: vol.halfwidth,
        vol_product_bound: vol.product_bound,
        volume_bound_slack: vol.weak_bound - vol.lhs,
        identity_residual: dec.identity_residual,
        weight_sum: dec.weights.iter().sum(),
        exact: ray.exact && vol.exact,
        samples: ray.samples.max(vol.samples),
        seed,
        passes: ray.lambda_bound + ray.halfwidth <= five_m && vol.holds,
    })
}

impl SpectralCertificate {
    /// The fixed-key JSON object of the certificate.
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "lambda_bound": self.lambda_bound,
            "halfwidth": self.halfwidth,
            "five_m": self.five_m,
            "vol_bound_lhs": self.vol_bound_lhs,
            "vol_bound_rhs": self.vol_bound_rhs,
            "samples": self.samples,
            "seed": self.seed,
        })
    }
}

#[cfg(test)]
mod tests;

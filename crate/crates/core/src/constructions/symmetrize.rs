//! Central symmetrization `K'' = (K − x/2) ∩ (x/2 − K)` with `x` chosen to
//! make `vol(K ∩ (x − K))` large.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numkit::{dot, SymMatrix};
use crate::polytope::{bounding_box, dist, sample_box, Polytope, VPolytope};
use crate::rng;

/// Exact intersection volumes are used up to this dimension.
pub const SYMMETRIZE_EXACT_MAX_DIM: usize = 4;
/// Coordinate sweeps of the ascent.
const MAX_SWEEPS: usize = 50;
/// Golden-section steps per coordinate.
const LINE_STEPS: usize = 40;
/// Iterations of the exact-path gradient ascent.
const GRADIENT_STEPS: usize = 200;
/// Samples for the Monte Carlo objective; one fixed stream is shared by every
/// evaluation.
const MC_SAMPLES: u64 = 1 << 17;
const MC_SEED: u64 = 0x5eed_cafe;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Symmetrization {
    /// Maximizer of `vol(K ∩ (x − K))` found by the ascent.
    pub x: Vec<f64>,
    /// `x/2`; the output is `(K − z) ∩ (z − K)`.
    pub shift: Vec<f64>,
    pub body: Polytope,
    /// `vol(K'')/vol(K)`.
    pub volume_ratio: f64,
    /// Whether the ascent result was replaced by twice the centroid.
    pub fell_back: bool,
}

struct Objective {
    dim: usize,
    rows: Vec<(Vec<f64>, f64)>,
    samples: Option<(Vec<f64>, Vec<f64>, Vec<Vec<f64>>)>,
}

impl Objective {
    fn new(p: &Polytope) -> Self {
        let rows: Vec<(Vec<f64>, f64)> = p.facets().iter().map(|f| (f.normal.clone(), f.offset)).collect();
        let samples = (p.dim() > SYMMETRIZE_EXACT_MAX_DIM).then(|| {
            let (lo, hi) = p.bounding_box();
            let chunks = rng::chunked(MC_SAMPLES, MC_SEED, |rng, count| {
                let mut out = Vec::with_capacity(count as usize);
                for _ in 0..count {
                    let mut x = vec![0.0; lo.len()];
                    sample_box(rng, &lo, &hi, &mut x);
                    out.push(x);
                }
                out
            });
            (lo, hi, chunks.into_iter().flatten().filter(|x| p.contains(x)).collect())
        });
        Self { dim: p.dim(), rows, samples }
    }

    /// Rows of `K ∩ (x − K)`.
    fn intersection_rows(&self, x: &[f64]) -> Vec<(Vec<f64>, f64)> {
        let mut rows = self.rows.clone();
        rows.extend(self.rows.iter().map(|(a, b)| (a.iter().map(|v| -v).collect(), b - dot(a, x))));
        rows
    }

    /// Exact value and gradient. The gradient is `Σ area·normal` over the
    /// facets contributed by `x − K`.
    fn value_grad(&self, x: &[f64]) -> Option<(f64, Vec<f64>)> {
        let rows = self.intersection_rows(x);
        let q = Polytope::from_rows(self.dim, &rows).ok()?;
        let scale = 1.0 + x.iter().map(|v| v.abs()).fold(0.0, f64::max);
        let mut g = vec![0.0; self.dim];
        for f in q.facets() {
            let moving = rows[self.rows.len()..].iter().any(|(a, b)| {
                dist(a, &f.normal) <= 1e-9 && (b - f.offset).abs() <= 1e-9 * scale
            });
            if moving {
                g.iter_mut().zip(&f.normal).for_each(|(gi, v)| *gi += f.measure * v);
            }
        }
        Some((q.volume(), g))
    }

    fn value(&self, x: &[f64]) -> f64 {
        match &self.samples {
            None => Polytope::from_rows(self.dim, &self.intersection_rows(x)).map(|p| p.volume()).unwrap_or(0.0),
            Some((lo, hi, inside)) => {
                let box_vol: f64 = lo.iter().zip(hi).map(|(a, b)| b - a).product();
                let hits = inside
                    .iter()
                    .filter(|y| {
                        self.rows.iter().all(|(a, b)| dot(a, y) >= dot(a, x) - b - 1e-12)
                    })
                    .count();
                box_vol * hits as f64 / MC_SAMPLES as f64
            }
        }
    }
}

/// Symmetric body inside a translate of `K` with `vol(K'')^{1/n} ≥ vol(K)^{1/n}/2`.
pub fn central_symmetrize(k: &VPolytope) -> Result<Symmetrization> {
    let p = Polytope::from_vrep(k)?;
    let n = p.dim();
    let vol = p.volume();
    let obj = Objective::new(&p);
    let seed: Vec<f64> = p.volume_centroid()?.iter().map(|c| 2.0 * c).collect();
    let (lo, hi) = bounding_box(p.vertices());

    let x = if obj.samples.is_none() {
        gradient_ascent(&obj, &p, seed.clone())
    } else {
        coordinate_ascent(&obj, seed.clone(), &lo, &hi)
    };

    let guarantee = |body: &Polytope| body.volume().powf(1.0 / n as f64) >= 0.5 * vol.powf(1.0 / n as f64) - 1e-12;
    let body = symmetric_body(&p, &x)?;
    if guarantee(&body) {
        let volume_ratio = body.volume() / vol;
        return Ok(Symmetrization { shift: half(&x), x, body, volume_ratio, fell_back: false });
    }
    let body = symmetric_body(&p, &seed)?;
    if !guarantee(&body) {
        return Err(Error::Internal("symmetrization violates the volume guarantee at twice the centroid".into()));
    }
    let volume_ratio = body.volume() / vol;
    Ok(Symmetrization { shift: half(&seed), x: seed, body, volume_ratio, fell_back: true })
}

fn half(x: &[f64]) -> Vec<f64> {
    x.iter().map(|v| v / 2.0).collect()
}

fn coordinate_ascent(obj: &Objective, mut x: Vec<f64>, lo: &[f64], hi: &[f64]) -> Vec<f64> {
    let mut best = obj.value(&x);
    for _ in 0..MAX_SWEEPS {
        let start = best;
        for j in 0..x.len() {
            let (xj, fj) = line_search(obj, &x, j, 2.0 * lo[j], 2.0 * hi[j]);
            if fj > best * (1.0 + 1e-12) {
                x[j] = xj;
                best = fj;
            }
        }
        if best <= start * (1.0 + 1e-12) {
            break;
        }
    }
    x
}

/// Ascent on `ln vol(K ∩ (x − K))`, which is concave, along the gradient
/// preconditioned by the vertex covariance of `K`.
fn gradient_ascent(obj: &Objective, p: &Polytope, mut x: Vec<f64>) -> Vec<f64> {
    let n = x.len();
    let c = p.centroid();
    let mut cov = SymMatrix::zeros(n);
    for v in p.vertices() {
        let d: Vec<f64> = v.iter().zip(&c).map(|(a, b)| a - b).collect();
        cov.add_outer(1.0 / p.vertex_count() as f64, &d);
    }
    let cov = cov.to_gen();
    let Some((mut f, mut g)) = obj.value_grad(&x) else { return x };
    let mut t: f64 = 1.0;
    for _ in 0..GRADIENT_STEPS {
        let dir = cov.mul_vec(&g.iter().map(|v| v / f).collect::<Vec<_>>());
        let slope: f64 = dot(&dir, &g) / f;
        if !(slope > 0.0) {
            break;
        }
        t = (2.0 * t).min(1.0);
        let mut moved = None;
        while t > 1e-12 {
            let y: Vec<f64> = x.iter().zip(&dir).map(|(a, d)| a + t * d).collect();
            if let Some((fy, gy)) = obj.value_grad(&y) {
                if fy > 0.0 && fy.ln() >= f.ln() + 1e-4 * t * slope {
                    moved = Some((y, fy, gy));
                    break;
                }
            }
            t /= 2.0;
        }
        let Some((y, fy, gy)) = moved else { break };
        let gain = fy / f - 1.0;
        if gain <= 1e-12 {
            break;
        }
        (x, f, g) = (y, fy, gy);
    }
    x
}

/// `(K − z) ∩ (z − K)` with `z = x/2`, built from exactly paired rows.
fn symmetric_body(p: &Polytope, x: &[f64]) -> Result<Polytope> {
    let z = half(x);
    let mut rows = Vec::with_capacity(2 * p.facet_count());
    for f in p.facets() {
        let b = f.offset - dot(&f.normal, &z);
        rows.push((f.normal.clone(), b));
        rows.push((f.normal.iter().map(|v| -v).collect(), b));
    }
    Polytope::from_rows(p.dim(), &rows)
}

/// Golden-section maximization of the objective along coordinate `j`.
fn line_search(obj: &Objective, x: &[f64], j: usize, mut a: f64, mut b: f64) -> (f64, f64) {
    let g = (5f64.sqrt() - 1.0) / 2.0;
    let at = |t: f64| {
        let mut y = x.to_vec();
        y[j] = t;
        obj.value(&y)
    };
    let here = x[j];
    let mut c = b - g * (b - a);
    let mut d = a + g * (b - a);
    let mut fc = at(c);
    let mut fd = at(d);
    for _ in 0..LINE_STEPS {
        let move_left = if fc == 0.0 && fd == 0.0 {
            // both probes outside the support; keep the side holding x
            here < d
        } else {
            fc >= fd
        };
        if move_left {
            b = d;
            d = c;
            fd = fc;
            c = b - g * (b - a);
            fc = at(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + g * (b - a);
            fd = at(d);
        }
    }
    if fc >= fd { (c, fc) } else { (d, fd) }
}

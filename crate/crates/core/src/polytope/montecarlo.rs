use rand::Rng;
use serde::{Deserialize, Serialize};

use super::{bounding_box, vertex_enumeration, HPolytope};
use crate::error::{Error, Result};
use crate::rng::chunked;

/// Acceptance rates below this are reported as degenerate sampling.
pub const MIN_ACCEPTANCE: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VolumeEstimate {
    pub mean: f64,
    pub std_error: f64,
    pub samples: u64,
    pub seed: u64,
}

/// Rejection-sampling volume estimate inside the vertex bounding box.
///
/// The result depends only on `(samples, seed)`, not on the thread count.
pub fn mc_volume(h: &HPolytope, samples: u64, seed: u64) -> Result<VolumeEstimate> {
    if samples == 0 {
        return Err(Error::Input("mc_volume needs at least one sample".into()));
    }
    let (v, _) = vertex_enumeration(h)?;
    let (lo, hi) = bounding_box(v.vertices());
    let box_volume: f64 = lo.iter().zip(&hi).map(|(a, b)| b - a).product();
    let n = h.dim();
    let hits: u64 = chunked(samples, seed, |rng, count| {
        let mut x = vec![0.0; n];
        let mut inside = 0u64;
        for _ in 0..count {
            sample_box(rng, &lo, &hi, &mut x);
            if h.contains(&x) {
                inside += 1;
            }
        }
        inside
    })
    .into_iter()
    .sum();
    let p = hits as f64 / samples as f64;
    if p < MIN_ACCEPTANCE {
        return Err(Error::Sampling(format!(
            "acceptance rate {p:e} is below {MIN_ACCEPTANCE:e}; use a tighter bounding box"
        )));
    }
    Ok(VolumeEstimate {
        mean: box_volume * p,
        std_error: box_volume * (p * (1.0 - p) / samples as f64).sqrt(),
        samples,
        seed,
    })
}

#[inline]
pub(crate) fn sample_box<R: Rng>(rng: &mut R, lo: &[f64], hi: &[f64], out: &mut [f64]) {
    for k in 0..out.len() {
        out[k] = lo[k] + rng.random::<f64>() * (hi[k] - lo[k]);
    }
}

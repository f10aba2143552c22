//! Verification campaigns. Cells run on the current rayon pool and come back
//! in index order, so reports do not depend on the worker count.

mod spectral;
mod theorem1;
mod theorem2;

use rand::Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;

use isoperilab_core::rng::derive_seed;

use crate::report::Cell;

pub use spectral::{spectral_campaign, SpectralConfig};
pub use theorem1::{lindelof_trials, theorem1_campaign, LindelofSummary, Theorem1Config};
pub use theorem2::{theorem2_campaign, Theorem2Config};

/// What a cell should compute, before it has a seed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CellSpec<K> {
    pub kind: K,
    pub n: usize,
    pub param: u64,
    pub trial: usize,
}

/// Runs `work` on every spec with seed `derive_seed(seed, index)`.
pub fn run_cells<K, F>(specs: &[CellSpec<K>], seed: u64, work: F) -> Vec<Cell>
where
    K: Sync,
    F: Fn(&CellSpec<K>, Cell) -> Cell + Sync,
{
    specs
        .par_iter()
        .enumerate()
        .map(|(i, s)| {
            let cell_seed = derive_seed(seed, i as u64);
            let cell = Cell::new(i, "", s.n, s.param, s.trial, cell_seed);
            work(s, cell)
        })
        .collect()
}

/// Uniform point on the unit sphere.
pub fn random_unit<R: Rng>(rng: &mut R, n: usize) -> Vec<f64> {
    loop {
        let v: Vec<f64> = (0..n).map(|_| rng.sample(StandardNormal)).collect();
        let s = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if s > 1e-12 {
            return v.into_iter().map(|x| x / s).collect();
        }
    }
}

/// Parses `a..b` (inclusive) or a single value.
pub fn parse_range(s: &str) -> Result<Vec<u64>, String> {
    let parse = |t: &str| t.trim().parse::<u64>().map_err(|e| format!("bad range bound {t:?}: {e}"));
    match s.split_once("..") {
        Some((a, b)) => {
            let b = b.strip_prefix('=').unwrap_or(b);
            let (a, b) = (parse(a)?, parse(b)?);
            if a > b {
                return Err(format!("empty range {s:?}"));
            }
            Ok((a..=b).collect())
        }
        None => Ok(vec![parse(s)?]),
    }
}

fn sorted_unique(mut v: Vec<u64>) -> Vec<u64> {
    v.sort_unstable();
    v.dedup();
    v
}

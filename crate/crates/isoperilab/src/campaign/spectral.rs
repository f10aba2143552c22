//! Eigenvalue-bound campaign on random origin-symmetric slab bodies.

use isoperilab_core::constructions::cube;
use isoperilab_core::positions::slab_polytope;
use isoperilab_core::rng::stream_rng;
use isoperilab_core::spectral::{spectral_certificate, SpectralCertificate};

use super::{random_unit, run_cells, sorted_unique, CellSpec};
use crate::report::{CampaignReport, Cell, Grid};

pub const IDENTITY_TOL: f64 = 1e-9;
pub const WEIGHT_SUM_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq)]
pub struct SpectralConfig {
    pub n: Vec<usize>,
    /// Explicit slab counts; the default is `m ∈ {n..8}`.
    pub m: Option<Vec<u64>>,
    pub trials: usize,
    pub samples: u64,
    pub seed: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Kind {
    /// `[−1,1]ⁿ`, whose bound is `5n/2` exactly.
    Anchor,
    Random,
}

pub fn spectral_campaign(cfg: &SpectralConfig) -> CampaignReport {
    let mut specs = vec![
        CellSpec { kind: Kind::Anchor, n: 1, param: 1, trial: 0 },
        CellSpec { kind: Kind::Anchor, n: 2, param: 2, trial: 0 },
    ];
    let mut all = Vec::new();
    for &n in &cfg.n {
        let ms = match &cfg.m {
            Some(v) => sorted_unique(v.clone()),
            None => (n as u64..=8).collect(),
        };
        for m in ms {
            all.push(m);
            for trial in 0..cfg.trials {
                specs.push(CellSpec { kind: Kind::Random, n, param: m, trial });
            }
        }
    }
    let cells = run_cells(&specs, cfg.seed, |s, mut cell| {
        match s.kind {
            Kind::Anchor => anchor(&mut cell, cfg.samples),
            Kind::Random => random(&mut cell, cfg.samples),
        }
        cell
    });
    let grid = Grid { n: cfg.n.clone(), params: sorted_unique(all), trials: cfg.trials, samples: cfg.samples };
    CampaignReport::new("spectral", cfg.seed, grid, cells)
}

/// Records a certificate and checks every inequality it carries.
pub fn record_certificate(cell: &mut Cell, c: &SpectralCertificate) {
    cell.exact = c.exact;
    cell.samples = c.samples;
    cell.metric("lambda_bound", c.lambda_bound);
    cell.metric("halfwidth", c.halfwidth);
    cell.metric("five_m", c.five_m);
    cell.metric("vol_bound_lhs", c.vol_bound_lhs);
    cell.metric("vol_bound_rhs", c.vol_bound_rhs);
    cell.metric("vol_halfwidth", c.vol_halfwidth);
    cell.metric("vol_product_bound", c.vol_product_bound);
    cell.metric("identity_residual", c.identity_residual);
    cell.metric("weight_sum", c.weight_sum);
    let phi = 2.0 * c.m as f64;
    let n = c.n as f64;
    cell.metric("spectral_product", c.lambda_bound * c.vol_bound_lhs.powi(2) * n / (phi * phi));
    cell.check_le("λ_bound + 4σ ≤ 5m", c.lambda_bound + c.halfwidth, c.five_m, 0.0);
    cell.check_le("vol(BK)^{1/n} ≤ 2√(m/n)", c.vol_bound_lhs - c.vol_halfwidth, c.vol_bound_rhs, 1e-9 * c.vol_bound_rhs);
    cell.check_le("‖Σc_i u_i⊗u_i − I‖_max ≤ 1e-9", c.identity_residual, IDENTITY_TOL, 0.0);
    cell.check_le("|Σc_i − n| ≤ 1e-10", (c.weight_sum - n).abs(), WEIGHT_SUM_TOL, 0.0);
    if !c.passes {
        cell.fail("certificate did not pass");
    }
}

fn anchor(cell: &mut Cell, samples: u64) {
    cell.kind = "anchor".into();
    let n = cell.n;
    let h = match cube(n, 1.0) {
        Ok(c) => c.hrep.expect("cubes carry an H-representation"),
        Err(e) => return cell.fail(format!("anchor construction failed: {e}")),
    };
    match spectral_certificate(&h, samples, cell.seed) {
        Ok(c) => {
            record_certificate(cell, &c);
            let target = 2.5 * n as f64;
            cell.check_close("λ_bound([-1,1]^n) = 5n/2", c.lambda_bound, target, 1e-9 * target);
        }
        Err(e) => cell.fail(format!("certificate failed: {e}")),
    }
}

fn random(cell: &mut Cell, samples: u64) {
    cell.kind = "random_slab".into();
    let (n, m) = (cell.n, cell.param as usize);
    if m < n {
        return cell.skip(format!("m = {m} slabs cannot bound a body in dimension {n}"));
    }
    let mut rng = stream_rng(cell.seed, 0);
    let ys: Vec<Vec<f64>> = (0..m).map(|_| random_unit(&mut rng, n)).collect();
    cell.note("symmetrization", "skipped: body is origin-symmetric");
    let result = slab_polytope(&ys).and_then(|h| spectral_certificate(&h, samples, cell.seed));
    match result {
        Ok(c) => record_certificate(cell, &c),
        Err(e) => cell.fail(format!("certificate failed: {e}")),
    }
}

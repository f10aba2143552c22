//! Vertex-count campaign: extremal vertex constructions in their minimal
//! surface area position.

use isoperilab_core::constructions::{extremal_vertex_polytope, Construction};
use isoperilab_core::polytope::Polytope;
use isoperilab_core::positions::{petty_minimize, schatten_bound_check, PettyOptions, PositionResult};
use isoperilab_core::Error;

use super::{run_cells, sorted_unique, CellSpec};
use crate::report::{CampaignReport, Cell, Grid};

/// Largest dimension with exact cells.
pub const EXACT_MAX_DIM: usize = 5;
/// Agreement required between the solver and a closed-form minimal iq.
pub const MINIMAL_IQ_TOL: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq)]
pub struct Theorem2Config {
    pub n: Vec<usize>,
    /// Explicit β values; the default grid is `{2n, 4n, 2ⁿ}`.
    pub beta: Option<Vec<u64>>,
    pub seed: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Kind {
    Anchor,
    Extremal,
}

fn betas(n: usize, explicit: &Option<Vec<u64>>) -> Vec<u64> {
    match explicit {
        Some(v) => sorted_unique(v.clone()),
        None => {
            let k = n as u64;
            let mut v = vec![2 * k, 4 * k];
            if n < 63 {
                v.push(1 << n);
            }
            sorted_unique(v)
        }
    }
}

pub fn theorem2_campaign(cfg: &Theorem2Config) -> CampaignReport {
    let mut specs = vec![CellSpec { kind: Kind::Anchor, n: 3, param: 8, trial: 0 }];
    let mut all = Vec::new();
    for &n in &cfg.n {
        for beta in betas(n, &cfg.beta) {
            all.push(beta);
            specs.push(CellSpec { kind: Kind::Extremal, n, param: beta, trial: 0 });
        }
    }
    let cells = run_cells(&specs, cfg.seed, |s, mut cell| {
        match s.kind {
            Kind::Anchor => anchor(&mut cell),
            Kind::Extremal => extremal(&mut cell),
        }
        cell
    });
    let grid = Grid { n: cfg.n.clone(), params: sorted_unique(all), trials: 1, samples: 0 };
    CampaignReport::new("theorem2", cfg.seed, grid, cells)
}

fn minimize(cell: &mut Cell, k: &Polytope, prefix: &str) -> Option<PositionResult> {
    let opts = PettyOptions { seed: cell.seed, ..PettyOptions::default() };
    let r = match petty_minimize(k, &opts) {
        Ok(r) => r,
        Err(e) => {
            cell.fail(format!("{prefix}solver failed: {e}"));
            return None;
        }
    };
    cell.metric(&format!("{prefix}iq_before"), r.iq_before);
    cell.metric(&format!("{prefix}iq_after"), r.iq_after);
    cell.metric(&format!("{prefix}isotropy_residual"), r.isotropy_residual);
    cell.metric(&format!("{prefix}iterations"), r.iterations as f64);
    cell.metric(&format!("{prefix}restarts"), r.restarts as f64);
    if !r.certified {
        cell.fail(format!("{prefix}solver did not converge: isotropy residual {:e}", r.isotropy_residual));
        return Some(r);
    }
    match schatten_bound_check(k, &r) {
        Ok(s) => {
            cell.metric(&format!("{prefix}schatten_lhs"), s.lhs);
            cell.metric(&format!("{prefix}schatten_rhs"), s.rhs);
            if !s.holds {
                cell.fail(format!("{prefix}‖A‖_S1 ≤ n·iq(K)/iq(AK): {} > {}", s.lhs, s.rhs));
            }
        }
        Err(e) => cell.fail(format!("{prefix}Schatten check failed: {e}")),
    }
    Some(r)
}

/// `n = 3, β = 8` is the cube, whose minimal iq is `2n`.
fn anchor(cell: &mut Cell) {
    cell.kind = "anchor".into();
    let k = match extremal_vertex_polytope(cell.n, cell.param).and_then(|e| e.construction.polytope()) {
        Ok(k) => k,
        Err(e) => return cell.fail(format!("anchor construction failed: {e}")),
    };
    if let Some(r) = minimize(cell, &k, "") {
        let target = 2.0 * cell.n as f64;
        cell.check_close("minimal iq of [-1,1]^3 = 2n", r.iq_after, target, 1e-9 * target);
    }
}

fn extremal(cell: &mut Cell) {
    cell.kind = "extremal_vertex".into();
    let (n, beta) = (cell.n, cell.param);
    if n > EXACT_MAX_DIM {
        return cell.skip(format!("n = {n} is above the exact cap {EXACT_MAX_DIM}"));
    }
    let e = match extremal_vertex_polytope(n, beta) {
        Ok(e) => e,
        Err(Error::Size(msg)) => return cell.skip(msg),
        Err(e) => return cell.fail(format!("construction failed: {e}")),
    };
    cell.note("branch", format!("{:?}", e.branch));
    cell.metric("padding_perturbation", e.padding_perturbation);
    cell.metric("target_band", e.target_band);
    let k = match e.construction.polytope() {
        Ok(k) => k,
        Err(Error::Size(msg)) => return cell.skip(msg),
        Err(err) => return cell.fail(format!("exact geometry failed: {err}")),
    };
    cell.metric("vertex_count", k.vertex_count() as f64);
    if k.vertex_count() as u64 != beta {
        cell.fail(format!("vertex count {} != β = {beta}", k.vertex_count()));
    }
    let Some(r) = minimize(cell, &k, "") else { return };
    if e.target_band > 0.0 {
        cell.metric("band", r.iq_after / e.target_band);
    }
    check_base(cell, &e.base, &e.construction, &r);
}

/// Compares the solver with the closed-form minimal iq of the unpadded base.
fn check_base(cell: &mut Cell, base: &Construction, built: &Construction, r: &PositionResult) {
    let Some(closed) = base.closed.minimal_iq else {
        cell.note("minimal_iq", "no closed form");
        return;
    };
    cell.metric("minimal_iq_closed_form", closed);
    let solved = if base == built {
        r.iq_after
    } else {
        let k = match base.polytope() {
            Ok(k) => k,
            Err(e) => return cell.fail(format!("base geometry failed: {e}")),
        };
        match minimize(cell, &k, "base_") {
            Some(b) => b.iq_after,
            None => return,
        }
    };
    cell.check_close("solver iq_after = closed-form minimal iq", solved, closed, MINIMAL_IQ_TOL);
}

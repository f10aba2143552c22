//! Facet-count campaign: extremal facet constructions and Lindelöf bodies.

use isoperilab_core::constructions::{cross_polytope, extremal_facet_polytope, lindelof_body};
use isoperilab_core::polytope::{iq_circumscribed, Polytope, MAX_HALFSPACES, MAX_VERTEX_ENUM_DIM};
use isoperilab_core::rng::stream_rng;
use isoperilab_core::Error;
use rand::Rng;

use super::{random_unit, run_cells, sorted_unique, CellSpec};
use crate::report::{CampaignReport, Cell, Grid};

/// Largest dimension with exact cells.
pub const EXACT_MAX_DIM: usize = 6;
const HEMISPHERE_RETRIES: usize = 10_000;

#[derive(Debug, Clone, PartialEq)]
pub struct Theorem1Config {
    pub n: Vec<usize>,
    /// Explicit φ values; the default grid is `{n+1, 2n, 3n, 4n, 2ⁿ}`.
    pub phi: Option<Vec<u64>>,
    /// Random bodies per Lindelöf cell.
    pub trials: usize,
    pub seed: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Kind {
    Anchor,
    Extremal,
    Lindelof,
}

fn phis(n: usize, explicit: &Option<Vec<u64>>) -> Vec<u64> {
    match explicit {
        Some(v) => sorted_unique(v.clone()),
        None => {
            let k = n as u64;
            let mut v = vec![k + 1, 2 * k, 3 * k, 4 * k];
            if n < 63 {
                v.push(1 << n);
            }
            sorted_unique(v)
        }
    }
}

pub fn theorem1_campaign(cfg: &Theorem1Config) -> CampaignReport {
    let mut specs = vec![CellSpec { kind: Kind::Anchor, n: 3, param: 8, trial: 0 }];
    let mut all_phis = Vec::new();
    for &n in &cfg.n {
        for phi in phis(n, &cfg.phi) {
            all_phis.push(phi);
            specs.push(CellSpec { kind: Kind::Extremal, n, param: phi, trial: 0 });
            specs.push(CellSpec { kind: Kind::Lindelof, n, param: phi, trial: 0 });
        }
    }
    let cells = run_cells(&specs, cfg.seed, |s, mut cell| {
        match s.kind {
            Kind::Anchor => anchor(&mut cell),
            Kind::Extremal => extremal(&mut cell),
            Kind::Lindelof => lindelof(&mut cell, cfg.trials),
        }
        cell
    });
    let grid = Grid { n: cfg.n.clone(), params: sorted_unique(all_phis), trials: cfg.trials, samples: 0 };
    CampaignReport::new("theorem1", cfg.seed, grid, cells)
}

/// `n = 3, φ = 8` is the cross-polytope, whose iq has a closed form.
fn anchor(cell: &mut Cell) {
    cell.kind = "anchor".into();
    let n = cell.n;
    let closed = cross_polytope(n, 1.0).map(|c| c.closed.iq);
    let built = extremal_facet_polytope(n, cell.param).and_then(|e| e.construction.polytope());
    match (closed, built) {
        (Ok(closed), Ok(p)) => {
            let nf = n as f64;
            let fact: f64 = (1..=n).map(|i| i as f64).product();
            let formula = 2.0 * nf.powf(1.5) / fact.powf(1.0 / nf);
            cell.metric("iq", p.iq());
            cell.metric("iq_closed_form", formula);
            cell.check_close("iq(extremal_facet(3, 8)) = 2n^{3/2}/(n!)^{1/n}", p.iq(), formula, 1e-9 * formula);
            cell.check_close("closed-form iq of the cross-polytope", closed, formula, 1e-9 * formula);
        }
        (Err(e), _) | (_, Err(e)) => cell.fail(format!("anchor construction failed: {e}")),
    }
}

fn extremal(cell: &mut Cell) {
    cell.kind = "extremal_facet".into();
    let (n, phi) = (cell.n, cell.param);
    if phi <= n as u64 {
        cell.skip(format!("φ = {phi} is below n + 1"));
        return;
    }
    let e = match extremal_facet_polytope(n, phi) {
        Ok(e) => e,
        Err(Error::Size(msg)) => {
            cell.skip(msg);
            return;
        }
        Err(e) => {
            cell.fail(format!("construction failed: {e}"));
            return;
        }
    };
    let closed = &e.construction.closed;
    cell.note("branch", format!("{:?}", e.branch));
    cell.metric("facet_count", closed.facet_count as f64);
    cell.metric("padding_perturbation", e.padding_perturbation);
    if let Some(b) = e.predicted_bound {
        cell.metric("predicted_bound", b);
    }
    if closed.facet_count != phi {
        cell.fail(format!("facet count {} != φ = {phi}", closed.facet_count));
    }
    let mut iq = closed.iq;
    if n <= EXACT_MAX_DIM {
        match e.construction.polytope() {
            Ok(p) => {
                iq = p.iq();
                cell.check_close("exact iq = closed-form iq", iq, closed.iq, 1e-9 * closed.iq);
                if p.facet_count() as u64 != phi {
                    cell.fail(format!("measured facet count {} != φ = {phi}", p.facet_count()));
                }
            }
            Err(Error::Size(msg)) => {
                cell.exact = false;
                cell.note("geometry", msg);
            }
            Err(e) => cell.fail(format!("exact geometry failed: {e}")),
        }
    } else {
        cell.exact = false;
    }
    let nf = n as f64;
    cell.metric("iq", iq);
    cell.metric("band", iq * (1.0 + (phi as f64 / nf).ln()).sqrt() / nf);
}

/// Outcome of a batch of Lindelöf comparisons on one random normal set.
#[derive(Debug, Clone, PartialEq)]
pub struct LindelofSummary {
    pub iq_lindelof: f64,
    /// `n·vol(K₀)^{1/n}·√(1 + log(φ/n))`.
    pub cp_constant: f64,
    /// `min iq(K) − iq(K₀)` over the random bodies.
    pub min_gap: f64,
    pub violations: Vec<String>,
    pub hemisphere_retries: usize,
}

/// Draws φ unit normals that are not in a closed hemisphere, builds `K₀`
/// and compares it with `trials` bodies `{⟨x, u_i⟩ ≤ t_i}`, `t_i ∈ [1/2, 3/2]`.
pub fn lindelof_trials(n: usize, phi: usize, trials: usize, seed: u64) -> Result<LindelofSummary, Error> {
    let mut rng = stream_rng(seed, 0);
    let mut retries = 0;
    let (normals, h0) = loop {
        let normals: Vec<Vec<f64>> = (0..phi).map(|_| random_unit(&mut rng, n)).collect();
        match lindelof_body(&normals) {
            Ok(h) => break (normals, h),
            Err(Error::Unbounded(_)) if retries < HEMISPHERE_RETRIES => retries += 1,
            Err(e) => return Err(e),
        }
    };
    let iq0 = iq_circumscribed(&h0)?;
    let p0 = Polytope::from_hrep(&h0)?;
    let nf = n as f64;
    let mut min_gap = f64::INFINITY;
    let mut violations = Vec::new();
    for t in 0..trials {
        let rows: Vec<(Vec<f64>, f64)> = normals.iter().map(|u| (u.clone(), rng.random_range(0.5..1.5))).collect();
        let k = Polytope::from_rows(n, &rows)?;
        let gap = k.iq() - iq0;
        min_gap = min_gap.min(gap);
        if gap < -1e-9 {
            violations.push(format!("trial {t}: iq(K) = {} < iq(K0) = {iq0}", k.iq()));
        }
    }
    Ok(LindelofSummary {
        iq_lindelof: iq0,
        cp_constant: nf * p0.volume().powf(1.0 / nf) * (1.0 + (phi as f64 / nf).ln()).sqrt(),
        min_gap,
        violations,
        hemisphere_retries: retries,
    })
}

fn lindelof(cell: &mut Cell, trials: usize) {
    cell.kind = "lindelof".into();
    let (n, phi) = (cell.n, cell.param);
    if phi <= n as u64 {
        cell.skip(format!("φ = {phi} is below n + 1"));
        return;
    }
    if n > MAX_VERTEX_ENUM_DIM.min(EXACT_MAX_DIM) || phi as usize > MAX_HALFSPACES {
        cell.skip(format!("n = {n}, φ = {phi} is above the exact-geometry caps"));
        return;
    }
    match lindelof_trials(n, phi as usize, trials, cell.seed) {
        Ok(s) => {
            cell.metric("iq_lindelof", s.iq_lindelof);
            cell.metric("cp_constant", s.cp_constant);
            if trials > 0 {
                cell.metric("min_gap", s.min_gap);
            }
            cell.metric("violations", s.violations.len() as f64);
            cell.metric("hemisphere_retries", s.hemisphere_retries as f64);
            for v in s.violations {
                cell.fail(v);
            }
        }
        Err(e) => cell.fail(format!("Lindelöf trial failed: {e}")),
    }
}

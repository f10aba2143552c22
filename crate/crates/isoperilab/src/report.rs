//! Campaign reports and their JSON/CSV serializations.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

/// One unit of campaign work and what it measured.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Cell {
    pub index: usize,
    pub kind: String,
    pub n: usize,
    /// φ, β or m depending on the campaign.
    pub param: u64,
    pub trial: usize,
    pub seed: u64,
    /// Every quantity came from exact geometry or quadrature.
    pub exact: bool,
    pub samples: u64,
    pub metrics: BTreeMap<String, f64>,
    pub notes: BTreeMap<String, String>,
    pub passed: bool,
    pub skipped: Option<String>,
    pub failures: Vec<String>,
}

impl Cell {
    pub fn new(index: usize, kind: &str, n: usize, param: u64, trial: usize, seed: u64) -> Self {
        Self {
            index,
            kind: kind.to_string(),
            n,
            param,
            trial,
            seed,
            exact: true,
            samples: 0,
            metrics: BTreeMap::new(),
            notes: BTreeMap::new(),
            passed: true,
            skipped: None,
            failures: Vec::new(),
        }
    }

    /// Non-finite values are recorded as failures since JSON cannot hold them.
    pub fn metric(&mut self, key: &str, value: f64) {
        if value.is_finite() {
            self.metrics.insert(key.to_string(), value);
        } else {
            self.fail(format!("{key} is not finite ({value})"));
        }
    }

    pub fn note(&mut self, key: &str, value: impl Into<String>) {
        self.notes.insert(key.to_string(), value.into());
    }

    pub fn fail(&mut self, msg: impl Into<String>) {
        self.passed = false;
        self.failures.push(msg.into());
    }

    pub fn skip(&mut self, reason: impl Into<String>) {
        self.skipped = Some(reason.into());
    }

    /// Fails unless `lhs ≤ rhs + tol`, quoting the inequality.
    pub fn check_le(&mut self, what: &str, lhs: f64, rhs: f64, tol: f64) {
        if !(lhs <= rhs + tol) {
            self.fail(format!("{what}: {lhs} > {rhs} (tol {tol:e})"));
        }
    }

    /// Fails unless `|a − b| ≤ tol`.
    pub fn check_close(&mut self, what: &str, a: f64, b: f64, tol: f64) {
        if !((a - b).abs() <= tol) {
            self.fail(format!("{what}: |{a} - {b}| > {tol:e}"));
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Grid {
    pub n: Vec<usize>,
    pub params: Vec<u64>,
    pub trials: usize,
    pub samples: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CampaignReport {
    pub campaign: String,
    pub seed: u64,
    pub grid: Grid,
    pub cells: Vec<Cell>,
    pub cells_failed: usize,
    pub cells_skipped: usize,
    pub passed: bool,
}

impl CampaignReport {
    pub fn new(campaign: &str, seed: u64, grid: Grid, cells: Vec<Cell>) -> Self {
        let cells_failed = cells.iter().filter(|c| !c.passed).count();
        let cells_skipped = cells.iter().filter(|c| c.skipped.is_some()).count();
        Self { campaign: campaign.to_string(), seed, grid, cells, cells_failed, cells_skipped, passed: cells_failed == 0 }
    }

    /// Pretty JSON with keys sorted at every level.
    pub fn to_json(&self) -> String {
        let v = serde_json::to_value(self).expect("reports serialize");
        let mut s = serde_json::to_string_pretty(&v).expect("reports serialize");
        s.push('\n');
        s
    }

    pub fn from_json(s: &str) -> serde_json::Result<Self> {
        serde_json::from_str(s)
    }

    /// Fixed columns followed by one column per metric name, sorted.
    pub fn to_csv(&self) -> csv::Result<String> {
        let keys: BTreeSet<&str> = self.cells.iter().flat_map(|c| c.metrics.keys().map(String::as_str)).collect();
        let mut w = csv::Writer::from_writer(Vec::new());
        let mut header: Vec<&str> = CSV_COLUMNS.to_vec();
        header.extend(keys.iter().copied());
        w.write_record(&header)?;
        for c in &self.cells {
            let notes: Vec<String> = c.notes.iter().map(|(k, v)| format!("{k}={v}")).collect();
            let mut row = vec![
                self.campaign.clone(),
                c.index.to_string(),
                c.kind.clone(),
                c.n.to_string(),
                c.param.to_string(),
                c.trial.to_string(),
                c.seed.to_string(),
                c.exact.to_string(),
                c.samples.to_string(),
                c.passed.to_string(),
                c.skipped.clone().unwrap_or_default(),
                c.failures.join("; "),
                notes.join("; "),
            ];
            row.extend(keys.iter().map(|k| c.metrics.get(*k).map(|v| v.to_string()).unwrap_or_default()));
            w.write_record(&row)?;
        }
        let bytes = w.into_inner().map_err(|e| e.into_error())?;
        Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
    }
}

pub const CSV_COLUMNS: [&str; 13] = [
    "campaign", "index", "kind", "n", "param", "trial", "seed", "exact", "samples", "passed", "skipped", "failures",
    "notes",
];

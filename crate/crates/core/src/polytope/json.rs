//! On-disk polytope document:
//! `{"dim": n, "hrep": [{"normal": [...], "offset": t}, ...], "vrep": [[...], ...]}`.
//! Either representation may be absent. Floats use serde_json's shortest
//! round-trip formatting.

use serde::{Deserialize, Serialize};

use super::{HPolytope, Halfspace, Polytope, VPolytope};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PolytopeDocument {
    pub dim: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub hrep: Option<Vec<Halfspace>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub vrep: Option<Vec<Vec<f64>>>,
}

impl PolytopeDocument {
    pub fn from_parts(dim: usize, hrep: Option<&HPolytope>, vrep: Option<&VPolytope>) -> Self {
        Self {
            dim,
            hrep: hrep.map(|h| h.halfspaces().to_vec()),
            vrep: vrep.map(|v| v.vertices().to_vec()),
        }
    }

    pub fn from_polytope(p: &Polytope) -> Self {
        let h = p.hrep().ok();
        Self::from_parts(p.dim(), h.as_ref(), Some(&p.vrep()))
    }

    pub fn hpolytope(&self) -> Result<Option<HPolytope>> {
        self.hrep.as_ref().map(|hs| HPolytope::new(self.dim, hs.clone())).transpose()
    }

    /// Full polytope, preferring the halfspace form when both are present.
    pub fn to_polytope(&self) -> Result<Polytope> {
        if let Some(h) = self.hpolytope()? {
            return Polytope::from_hrep(&h);
        }
        match &self.vrep {
            Some(v) => Polytope::from_points(self.dim, v.clone()),
            None => Err(Error::Input("polytope document has neither hrep nor vrep".into())),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("polytope document serializes")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::Input(format!("bad polytope JSON: {e}")))
    }
}

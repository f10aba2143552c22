//! JSON recipes: `{"family": ..., "params": {...}}`.

use serde::{Deserialize, Serialize};

use super::{
    cartesian_product, cross_polytope, cube, extremal_facet_polytope, extremal_vertex_polytope, l1_sum,
    lindelof_body, simplex_regular, Construction, L1SumSpec,
};
use crate::error::{Error, Result};
use crate::polytope::Polytope;

fn one() -> f64 {
    1.0
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", content = "params", rename_all = "snake_case", deny_unknown_fields)]
pub enum Recipe {
    Simplex {
        n: usize,
    },
    Cross {
        n: usize,
        #[serde(default = "one")]
        scale: f64,
    },
    Cube {
        n: usize,
        #[serde(default = "one")]
        scale: f64,
    },
    Product {
        factors: Vec<Recipe>,
        #[serde(default)]
        normalize: bool,
    },
    #[serde(rename = "l1sum")]
    L1Sum {
        summands: Vec<Recipe>,
        #[serde(default)]
        origin_symmetric: bool,
        #[serde(default)]
        congruent_facets: bool,
    },
    Lindelof {
        normals: Vec<Vec<f64>>,
    },
    ExtremalFacet {
        n: usize,
        phi: u64,
    },
    ExtremalVertex {
        n: usize,
        beta: u64,
    },
}

impl Recipe {
    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::Input(format!("invalid recipe: {e}")))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("recipes always serialize")
    }

    pub fn build(&self) -> Result<Construction> {
        match self {
            Recipe::Simplex { n } => simplex_regular(*n),
            Recipe::Cross { n, scale } => cross_polytope(*n, *scale),
            Recipe::Cube { n, scale } => cube(*n, *scale),
            Recipe::Product { factors, normalize } => {
                let parts = factors.iter().map(Recipe::build).collect::<Result<Vec<_>>>()?;
                cartesian_product(&parts, *normalize)
            }
            Recipe::L1Sum { summands, origin_symmetric, congruent_facets } => {
                let summands = summands.iter().map(Recipe::build).collect::<Result<Vec<_>>>()?;
                l1_sum(&L1SumSpec {
                    summands,
                    origin_symmetric: *origin_symmetric,
                    congruent_facets: *congruent_facets,
                })
            }
            Recipe::Lindelof { normals } => {
                let h = lindelof_body(normals)?;
                Construction::from_polytope(&Polytope::from_hrep(&h)?)
            }
            Recipe::ExtremalFacet { n, phi } => Ok(extremal_facet_polytope(*n, *phi)?.construction),
            Recipe::ExtremalVertex { n, beta } => Ok(extremal_vertex_polytope(*n, *beta)?.construction),
        }
    }
}

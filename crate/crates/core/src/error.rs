use thiserror::Error;

use crate::numkit::LinalgError;

#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    /// Degenerate or malformed geometry (not full-dimensional, empty, degenerate facet).
    #[error("structural error: {0}")]
    Structural(String),
    /// The normals lie in a closed hemisphere, so the halfspace intersection is unbounded.
    #[error("unbounded: {0}")]
    Unbounded(String),
    /// Input exceeds a combinatorial cap of the exact kernels.
    #[error("size limit exceeded: {0}")]
    Size(String),
    #[error("facets {facets:?} are not tangent to the inscribed ball of radius {inradius}")]
    Tangency { facets: Vec<usize>, inradius: f64 },
    /// A padding cut or placement did not produce the expected combinatorics.
    #[error("geometry error: {0}")]
    Geometry(String),
    #[error("invalid construction: {0}")]
    Spec(String),
    #[error("degenerate input: {0}")]
    Degenerate(String),
    #[error("sampling error: {0}")]
    Sampling(String),
    #[error("invalid input: {0}")]
    Input(String),
    /// An internal consistency check failed; indicates a bug rather than bad input.
    #[error("internal check failed: {0}")]
    Internal(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

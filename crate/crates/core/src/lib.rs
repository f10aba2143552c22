//! Computational isoperimetry for convex polytopes.
//!
//! * [`numkit`]: dense symmetric linear algebra (Jacobi eigensolver, matrix powers).
//! * [`polytope`]: halfspace/vertex representations, exact volume, surface area and
//!   area measures, Monte Carlo volume.
//! * [`constructions`]: simplices, cubes, cross-polytopes, products, ℓ1-sums,
//!   Lindelöf bodies, facet/vertex padding, extremal families, central symmetrization.
//! * [`positions`]: minimal-surface-area positions and the Brascamp-Lieb transform.
//! * [`spectral`]: Rayleigh-quotient upper bounds for the first Dirichlet eigenvalue.

pub mod constructions;
pub mod error;
pub mod numkit;
pub mod polytope;
pub mod positions;
pub mod rng;
pub mod spectral;

pub use error::{Error, Result};

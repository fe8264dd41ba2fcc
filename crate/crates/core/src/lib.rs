//! Heat kernels of homogeneous bundles over symmetric spaces.
//!
//! The pipeline starts from a Riemann tensor, builds the curvature algebra,
//! expands the heat kernel diagonal as a Gaussian average over the holonomy
//! algebra, and evaluates the exact diagonal on rank-one spaces.

pub mod cli;
pub mod curvature;
pub mod diagonal;
pub mod error;
pub mod gaussian;
pub mod index;
pub mod json;
pub mod linalg;
pub mod quadrature;
pub mod representation;

pub use error::{Error, Result};

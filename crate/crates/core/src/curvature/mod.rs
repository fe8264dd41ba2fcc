//! Curvature algebra of a symmetric space built from its Riemann tensor.

mod algebra;
mod catalog;
mod riemann;
mod validate;

pub use algebra::{
    assemble, build_generators, curvature_operator, holonomy_structure_constants, projectors, spectral_split,
    CurvatureAlgebra, SpectralSplit, Tolerances,
};
pub use catalog::{sphere_volume, Factor, Space};
pub use riemann::{RiemannData, SymmetryResiduals};
pub use validate::{validate, validate_riemann, IdentityResidual, ValidationReport};

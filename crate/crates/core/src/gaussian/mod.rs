//! Small-t expansion of the heat kernel diagonal as a Gaussian average over
//! the holonomy algebra.

mod bernoulli;
mod polynomial;
mod series;
mod wick;

pub use bernoulli::{bernoulli_numbers, BernoulliSeries};
pub use polynomial::{Coefficient, MultiIndex, OmegaPolynomial, Polynomial};
pub use series::{
    expand_generating_function, heat_coefficients, heat_invariants, GeneratingSeries, HeatCoefficients, DEFAULT_ORDER,
    MAX_ORDER,
};
pub use wick::{gaussian_moment, GaussianMeasure};

//! Exact heat kernel diagonals: contour integrals, spectral sums and
//! independent oracles.

mod general;
mod rank_one;
mod spectral;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{ctrace, pairwise_sum, CMatrix};
use crate::quadrature::gauss_hermite;

pub use general::{det_sinhc_sqrt, diagonal_general, heat_trace, integrand, sinhc, ContourKind, IntegrandSpec};
pub use rank_one::{diagonal_h2, diagonal_s2, rank_one_kernel};
pub use spectral::{
    plancherel_h2, s2_spectrum, sphere_harmonic_oracle, spectral_sum_s2, spectral_sum_s2_as_printed, spectral_sum_s2_auto,
    SpectralLine,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Integral,
    SpectralSum,
    Plancherel,
    Oracle,
}

impl Method {
    pub fn as_str(&self) -> &'static str {
        match self {
            Method::Integral => "integral",
            Method::SpectralSum => "spectral_sum",
            Method::Plancherel => "plancherel",
            Method::Oracle => "oracle",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QuadOptions {
    /// Stop doubling once the relative change drops below this.
    pub rel_tol: f64,
    pub min_nodes: usize,
    /// Cap on nodes per direction.
    pub max_nodes: usize,
    /// Cap on tensor-product points for p > 1.
    pub max_points: usize,
    /// Imaginary shift of compact directions, in units of the Gaussian width.
    pub shift: f64,
    pub tol_pole: f64,
}

impl Default for QuadOptions {
    fn default() -> Self {
        QuadOptions { rel_tol: 1e-12, min_nodes: 16, max_nodes: 1 << 14, max_points: 1 << 18, shift: 1.0, tol_pole: 1e-12 }
    }
}

impl QuadOptions {
    pub fn with_rel_tol(mut self, rel_tol: f64) -> Self {
        self.rel_tol = rel_tol;
        self
    }
}

/// Heat kernel diagonal at one t. Scalar results are 1×1.
#[derive(Clone, Debug)]
pub struct DiagonalResult {
    pub value: CMatrix,
    pub method: Method,
    /// Absolute error estimate.
    pub est_error: f64,
    pub t: f64,
    /// Quadrature nodes per direction, or spectral terms summed.
    pub nodes: usize,
}

impl DiagonalResult {
    pub fn scalar(value: Complex64, method: Method, est_error: f64, t: f64, nodes: usize) -> Self {
        DiagonalResult { value: CMatrix::from_element(1, 1, value), method, est_error, t, nodes }
    }

    pub fn trace(&self) -> Complex64 {
        ctrace(&self.value)
    }

    pub fn relative_error(&self) -> f64 {
        self.est_error / self.trace().norm().max(f64::MIN_POSITIVE)
    }
}

/// Σ_k w_k f(x_k) for the N-point Hermite rule, summed in a fixed tree.
fn hermite_sum<T, F>(n: usize, f: &F) -> Result<(T, f64)>
where
    T: Clone + Send + std::ops::Add<Output = T>,
    F: Fn(f64) -> Result<T> + Sync,
    T: Magnitude,
{
    let rule = gauss_hermite(n);
    let terms: Vec<T> = rule
        .nodes
        .par_iter()
        .zip(rule.weights.par_iter())
        .map(|(&x, &w)| f(x).map(|v| v.scale(w)))
        .collect::<Result<Vec<T>>>()?;
    let size: f64 = terms.iter().map(Magnitude::magnitude).sum();
    Ok((pairwise_sum(&terms).expect("nonempty rule"), size))
}

/// Quantities the doubling driver can compare.
pub trait Magnitude {
    fn magnitude(&self) -> f64;
    fn scale(self, w: f64) -> Self;
    fn distance(&self, other: &Self) -> f64;
}

impl Magnitude for Complex64 {
    fn magnitude(&self) -> f64 {
        self.norm()
    }
    fn scale(self, w: f64) -> Self {
        self * w
    }
    fn distance(&self, other: &Self) -> f64 {
        (self - other).norm()
    }
}

impl Magnitude for CMatrix {
    fn magnitude(&self) -> f64 {
        self.iter().fold(0.0, |m, z| m.max(z.norm()))
    }
    fn scale(self, w: f64) -> Self {
        self * Complex64::new(w, 0.0)
    }
    fn distance(&self, other: &Self) -> f64 {
        (self - other).iter().fold(0.0, |m, z| m.max(z.norm()))
    }
}

/// Doubles the rule size until the relative change is below `rel_tol` or
/// sits at the rounding floor. Returns (value, absolute error, nodes).
fn hermite_converge<T, F>(opts: &QuadOptions, f: F) -> Result<(T, f64, usize)>
where
    T: Clone + Send + std::ops::Add<Output = T> + Magnitude,
    F: Fn(f64) -> Result<T> + Sync,
{
    let mut n = opts.min_nodes.max(2);
    let (mut prev, _) = hermite_sum(n, &f)?;
    let mut change = f64::INFINITY;
    while n < opts.max_nodes {
        n *= 2;
        let (cur, size) = hermite_sum(n, &f)?;
        let diff = cur.distance(&prev);
        let floor = 64.0 * f64::EPSILON * size;
        let mag = cur.magnitude().max(f64::MIN_POSITIVE);
        change = diff / mag;
        if diff <= opts.rel_tol * mag || diff <= floor {
            return Ok((cur, diff.max(floor), n));
        }
        prev = cur;
    }
    Err(Error::QuadratureNotConverged { change, nodes: n })
}

use num_complex::Complex64;
use pyo3::create_exception;
use pyo3::exceptions::{PyException, PyValueError};
use pyo3::prelude::*;

use symkernel::cli::parse_representation;
use symkernel::curvature::{validate_riemann, CurvatureAlgebra, Space, Tolerances};
use symkernel::diagonal::{self, DiagonalResult, QuadOptions};
use symkernel::error::Error;
use symkernel::gaussian::heat_coefficients as engine_coefficients;
use symkernel::representation::{Representation, Weight};

create_exception!(pysymkernel, SymkernelError, PyException);

fn to_py(e: Error) -> PyErr {
    match e {
        Error::Parse(_) | Error::BadParams(_) => PyValueError::new_err(e.to_string()),
        _ => SymkernelError::new_err(e.to_string()),
    }
}

fn space(spec: &str) -> PyResult<(Space, CurvatureAlgebra)> {
    let space: Space = spec.parse().map_err(to_py)?;
    let riem = space.riemann().map_err(to_py)?;
    let alg = CurvatureAlgebra::from_riemann(&riem, Tolerances::default()).map_err(to_py)?;
    Ok((space, alg))
}

fn weight(alpha: Option<&str>) -> PyResult<Option<Weight>> {
    alpha.map(|a| a.parse::<Weight>().map_err(to_py)).transpose()
}

fn rep(alg: &CurvatureAlgebra, text: &str, alpha: Option<&str>) -> PyResult<Representation> {
    parse_representation(text, weight(alpha)?, alg, Tolerances::default().tol_alg).map_err(to_py)
}

fn triple(r: DiagonalResult) -> (Complex64, f64, &'static str) {
    (r.trace(), r.est_error, r.method.as_str())
}

/// (pass, [(family, residual)], construction error).
type Validation = (bool, Vec<(String, f64)>, Option<String>);

#[pyfunction]
fn validate(spec: &str) -> PyResult<Validation> {
    let space: Space = spec.parse().map_err(to_py)?;
    let report = validate_riemann(&space.riemann().map_err(to_py)?, Tolerances::default());
    let families = report.families.iter().map(|f| (f.family.clone(), f.residual)).collect();
    Ok((report.pass, families, report.construction_error))
}

/// Traces of a_0..a_K.
#[pyfunction]
#[pyo3(signature = (spec, rep_spec = "scalar", order = 2, alpha = None))]
fn heat_coefficients(spec: &str, rep_spec: &str, order: usize, alpha: Option<&str>) -> PyResult<Vec<Complex64>> {
    let (_, alg) = space(spec)?;
    let r = rep(&alg, rep_spec, alpha)?;
    let hc = engine_coefficients(&alg, &r, order, Tolerances::default().tol_alg, spec).map_err(to_py)?;
    Ok(hc.traces())
}

/// Fiber trace of the heat kernel diagonal by contour integration:
/// (value, est_error, method).
#[pyfunction]
#[pyo3(signature = (spec, t, rep_spec = "scalar", alpha = None))]
fn diagonal_trace(spec: &str, t: f64, rep_spec: &str, alpha: Option<&str>) -> PyResult<(Complex64, f64, &'static str)> {
    let (_, alg) = space(spec)?;
    let r = rep(&alg, rep_spec, alpha)?;
    let opts = QuadOptions::default();
    diagonal::diagonal_general(&alg, &r, t, &opts, Tolerances::default().tol_alg).map(triple).map_err(to_py)
}

#[pyfunction]
#[pyo3(signature = (r, t, alpha = "0"))]
fn diagonal_s2(r: f64, t: f64, alpha: &str) -> PyResult<(Complex64, f64, &'static str)> {
    let a = alpha.parse::<Weight>().map_err(to_py)?;
    diagonal::diagonal_s2(r, a, t, &QuadOptions::default()).map(triple).map_err(to_py)
}

#[pyfunction]
#[pyo3(signature = (a, t, alpha = "0"))]
fn diagonal_h2(a: f64, t: f64, alpha: &str) -> PyResult<(Complex64, f64, &'static str)> {
    let w = alpha.parse::<Weight>().map_err(to_py)?;
    diagonal::diagonal_h2(a, w, t, &QuadOptions::default()).map(triple).map_err(to_py)
}

#[pyfunction]
#[pyo3(signature = (a, t, alpha = "0"))]
fn plancherel_h2(a: f64, t: f64, alpha: &str) -> PyResult<(Complex64, f64, &'static str)> {
    let w = alpha.parse::<Weight>().map_err(to_py)?;
    diagonal::plancherel_h2(a, w, t, &QuadOptions::default()).map(triple).map_err(to_py)
}

#[pyfunction]
#[pyo3(signature = (r, t, lmax = 2000))]
fn sphere_harmonic_oracle(r: f64, t: f64, lmax: usize) -> PyResult<(Complex64, f64, &'static str)> {
    diagonal::sphere_harmonic_oracle(r, t, lmax).map(triple).map_err(to_py)
}

/// Dirac index on a compact catalog space; the volume defaults to the
/// catalog one.
#[pyfunction]
#[pyo3(signature = (spec, rep_spec = "spinor", vol = None))]
fn index(spec: &str, rep_spec: &str, vol: Option<f64>) -> PyResult<(f64, i64)> {
    let (space, alg) = space(spec)?;
    let r = rep(&alg, rep_spec, None)?;
    let vol = vol.or_else(|| space.volume()).ok_or_else(|| to_py(Error::NotCompact))?;
    let res = symkernel::index::index(&alg, &r, vol, Tolerances::default().tol_alg).map_err(to_py)?;
    Ok((res.index, res.nearest_integer))
}

/// Runs the command-line interface in-process and returns its exit code.
#[pyfunction]
fn run_cli(args: Vec<String>) -> i32 {
    symkernel::cli::run(std::iter::once("symkernel".to_string()).chain(args))
}

#[pymodule]
fn pysymkernel(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("SymkernelError", m.py().get_type::<SymkernelError>())?;
    m.add_function(wrap_pyfunction!(validate, m)?)?;
    m.add_function(wrap_pyfunction!(heat_coefficients, m)?)?;
    m.add_function(wrap_pyfunction!(diagonal_trace, m)?)?;
    m.add_function(wrap_pyfunction!(diagonal_s2, m)?)?;
    m.add_function(wrap_pyfunction!(diagonal_h2, m)?)?;
    m.add_function(wrap_pyfunction!(plancherel_h2, m)?)?;
    m.add_function(wrap_pyfunction!(sphere_harmonic_oracle, m)?)?;
    m.add_function(wrap_pyfunction!(index, m)?)?;
    m.add_function(wrap_pyfunction!(run_cli, m)?)?;
    Ok(())
}

use std::f64::consts::PI;

use nalgebra::Schur;
use num_complex::Complex64;
use rayon::prelude::*;

use crate::curvature::CurvatureAlgebra;
use crate::diagonal::{DiagonalResult, Magnitude, Method, QuadOptions};
use crate::error::{Error, Result};
use crate::linalg::{c, pairwise_sum, to_complex, CMatrix, RMatrix};
use crate::quadrature::gauss_hermite;
use crate::representation::{holonomy_action, HolonomyAction, Representation};

const MAX_DIRECTIONS: usize = 3;

/// sinh z / z, Taylor near the origin.
pub fn sinhc(z: Complex64) -> Complex64 {
    if z.norm() < 1e-4 {
        let z2 = z * z;
        1.0 + z2 / 6.0 + z2 * z2 / 120.0
    } else {
        z.sinh() / z
    }
}

fn eigenvalues(m: &CMatrix) -> Result<Vec<Complex64>> {
    if m.nrows() == 0 {
        return Ok(Vec::new());
    }
    let schur = Schur::try_new(m.clone(), 1e-15, 10_000)
        .ok_or_else(|| Error::Unsupported("Schur decomposition did not converge".into()))?;
    let (_, t) = schur.unpack();
    Ok(t.diagonal().iter().copied().collect())
}

/// det(sinh A / A)^{1/2} for A with spectrum symmetric under μ → −μ.
///
/// Eigenvalues are paired greedily with their negatives and each pair
/// contributes sinhc(μ), which fixes the branch of the square root
/// continuously from A = 0. Returns the value and the smallest |sinhc| seen.
pub fn det_sinhc_sqrt(a: &CMatrix) -> Result<(Complex64, f64)> {
    let mut ev = eigenvalues(a)?;
    ev.sort_by(|x, y| y.norm().total_cmp(&x.norm()));
    let mut used = vec![false; ev.len()];
    let mut value = Complex64::new(1.0, 0.0);
    let mut smallest = f64::INFINITY;
    for i in 0..ev.len() {
        if used[i] {
            continue;
        }
        used[i] = true;
        let partner = (0..ev.len())
            .filter(|&j| !used[j])
            .min_by(|&j, &k| (ev[i] + ev[j]).norm().total_cmp(&(ev[i] + ev[k]).norm()));
        let s = sinhc(ev[i]);
        smallest = smallest.min(s.norm());
        match partner {
            Some(j) => {
                used[j] = true;
                value *= s;
            }
            None => value *= s.sqrt(),
        }
    }
    Ok((value, smallest))
}

/// How a holonomy direction is placed in the complex ω plane.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum ContourKind {
    /// λ > 0: ω = √(4/λ)(x + iη), averaged over ±η.
    Shifted { eta: f64 },
    /// λ < 0: ω = i√(4/|λ|)x, where the integrand is pole free.
    Rotated,
}

/// The integrand after the Gaussian has been moved onto e^{−x²} in every
/// direction. Carries √t inside the scale factors.
#[derive(Clone, Debug)]
pub struct IntegrandSpec {
    pub t: f64,
    pub kinds: Vec<ContourKind>,
    /// √(4t/|λ_i|).
    pub scales: Vec<f64>,
}

impl IntegrandSpec {
    pub fn new(alg: &CurvatureAlgebra, t: f64, shift: f64) -> Result<Self> {
        let beta = alg.beta();
        let compact: Vec<usize> = (0..beta.len()).filter(|&i| beta[i] > 0.0).collect();
        let d = alg.generators();
        // A shifted direction stays pole free only if it acts on its own block.
        for &i in &compact {
            for j in 0..beta.len() {
                if j != i {
                    let prod = (&d[i] * &d[j]).abs().max() + (&d[j] * &d[i]).abs().max();
                    if prod > 1e-12 * alg.curvature_scale().powi(2) {
                        return Err(Error::MixedContourUnsupported(format!(
                            "compact holonomy direction {i} mixes with direction {j}"
                        )));
                    }
                }
            }
        }
        let kinds = beta
            .iter()
            .map(|&l| if l > 0.0 { ContourKind::Shifted { eta: shift } } else { ContourKind::Rotated })
            .collect();
        let scales = beta.iter().map(|&l| (4.0 * t / l.abs()).sqrt()).collect();
        Ok(IntegrandSpec { t, kinds, scales })
    }

    pub fn directions(&self) -> usize {
        self.kinds.len()
    }

    fn sign_patterns(&self) -> usize {
        1 << self.kinds.iter().filter(|k| matches!(k, ContourKind::Shifted { .. })).count()
    }

    /// √t ω and the phase e^{−(ω-Gaussian)} / e^{−x²} for one sign pattern.
    fn point(&self, x: &[f64], pattern: usize) -> (Vec<Complex64>, Complex64) {
        let mut bit = 0;
        let mut phase = Complex64::new(1.0, 0.0);
        let omega = self
            .kinds
            .iter()
            .zip(&self.scales)
            .zip(x)
            .map(|((kind, &s), &xi)| match *kind {
                ContourKind::Shifted { eta } => {
                    let h = if pattern >> bit & 1 == 0 { eta } else { -eta };
                    bit += 1;
                    phase *= Complex64::new(h * h, -2.0 * xi * h).exp();
                    Complex64::new(xi, h) * s
                }
                ContourKind::Rotated => Complex64::new(0.0, xi * s),
            })
            .collect();
        (omega, phase)
    }
}

fn combine(mats: &[RMatrix], omega: &[Complex64], half: f64) -> CMatrix {
    let n = mats.first().map_or(0, |m| m.nrows());
    mats.iter().zip(omega).fold(CMatrix::zeros(n, n), |acc, (m, w)| acc + to_complex(m) * (w * half))
}

fn cosh(m: &CMatrix) -> CMatrix {
    (m.clone().exp() + (-m).exp()) * c(0.5, 0.0)
}

/// cosh(𝓡(ω)) det_H(sinhc(F(ω)/2))^{1/2} / det_TM(sinhc(D(ω)/2))^{1/2}
/// times the contour phase and π^{−p/2}, averaged over shift signs. The
/// e^{−Σx²} weight is left to the quadrature rule.
pub fn integrand(
    alg: &CurvatureAlgebra,
    action: &HolonomyAction,
    spec: &IntegrandSpec,
    x: &[f64],
    tol_pole: f64,
) -> Result<CMatrix> {
    let dim = action.casimir.nrows();
    let patterns = spec.sign_patterns();
    let mut acc = CMatrix::zeros(dim, dim);
    for pattern in 0..patterns {
        let (omega, phase) = spec.point(x, pattern);
        let (tangent, smallest) = det_sinhc_sqrt(&combine(alg.generators(), &omega, 0.5))?;
        if smallest < tol_pole {
            return Err(Error::PoleHit { modulus: smallest });
        }
        let (holonomy, _) = det_sinhc_sqrt(&combine(alg.adjoint(), &omega, 0.5))?;
        acc += cosh(&action.at(&omega)) * (phase * holonomy / tangent);
    }
    let norm = PI.powf(-(spec.directions() as f64) / 2.0) / patterns as f64;
    Ok(acc * c(norm, 0.0))
}

/// Tensor-product Hermite sum over p directions with n nodes each.
fn tensor_sum(n: usize, p: usize, f: &(dyn Fn(&[f64]) -> Result<CMatrix> + Sync)) -> Result<(CMatrix, f64)> {
    let rule = gauss_hermite(n);
    let total = n.pow(p as u32);
    let terms: Vec<CMatrix> = (0..total)
        .into_par_iter()
        .map(|mut idx| {
            let mut x = [0.0; MAX_DIRECTIONS];
            let mut w = 1.0;
            for xi in x.iter_mut().take(p) {
                let k = idx % n;
                idx /= n;
                *xi = rule.nodes[k];
                w *= rule.weights[k];
            }
            f(&x[..p]).map(|v| v.scale(w))
        })
        .collect::<Result<Vec<_>>>()?;
    let size = terms.iter().map(Magnitude::magnitude).sum();
    Ok((pairwise_sum(&terms).expect("nonempty rule"), size))
}

/// Heat kernel diagonal of any homogeneous bundle with at most three
/// holonomy directions, by contour integration over the holonomy algebra.
pub fn diagonal_general(
    alg: &CurvatureAlgebra,
    rep: &Representation,
    t: f64,
    opts: &QuadOptions,
    tol: f64,
) -> Result<DiagonalResult> {
    if !(t > 0.0 && t.is_finite()) {
        return Err(Error::BadParams(format!("t must be positive, got {t}")));
    }
    let p = alg.p();
    if p > MAX_DIRECTIONS {
        return Err(Error::Unsupported(format!("{p} holonomy directions (at most {MAX_DIRECTIONS})")));
    }
    let action = holonomy_action(alg, rep, tol)?;
    let dim = rep.dim();
    let n = alg.n();

    let mut pref = c((4.0 * PI * t).powf(-(n as f64) / 2.0), 0.0);
    pref *= ((alg.scalar_curvature() / 8.0 + alg.holonomy_curvature() / 6.0) * t).exp();
    if let Some(b) = rep.abelian_field() {
        let (det, smallest) = det_sinhc_sqrt(&(to_complex(b) * c(t, 0.0)))?;
        if smallest < opts.tol_pole {
            return Err(Error::PoleHit { modulus: smallest });
        }
        pref /= det;
    }
    let left = (&action.casimir * c(-t, 0.0)).exp() * pref;

    if p == 0 {
        let est = 4.0 * f64::EPSILON * left.magnitude();
        return Ok(DiagonalResult { value: left, method: Method::Integral, est_error: est, t, nodes: 0 });
    }

    let spec = IntegrandSpec::new(alg, t, opts.shift)?;
    let f = |x: &[f64]| integrand(alg, &action, &spec, x, opts.tol_pole);
    let mut m = opts.min_nodes.max(2);
    let (mut prev, _) = tensor_sum(m, p, &f)?;
    let mut change = f64::INFINITY;
    loop {
        let next = m * 2;
        if next > opts.max_nodes || next.pow(p as u32) > opts.max_points {
            return Err(Error::QuadratureNotConverged { change, nodes: m });
        }
        m = next;
        let (cur, size) = tensor_sum(m, p, &f)?;
        let diff = cur.distance(&prev);
        let floor = 64.0 * f64::EPSILON * size;
        let mag = cur.magnitude().max(f64::MIN_POSITIVE);
        change = diff / mag;
        if diff <= opts.rel_tol * mag || diff <= floor {
            let value = &left * cur;
            let est = diff.max(floor) * left.magnitude() * dim as f64;
            return Ok(DiagonalResult { value, method: Method::Integral, est_error: est, t, nodes: m });
        }
        prev = cur;
    }
}

/// Tr e^{−tΔ} = vol · tr U(t), available only for compact spaces.
pub fn heat_trace(
    alg: &CurvatureAlgebra,
    rep: &Representation,
    volume: Option<f64>,
    t: f64,
    opts: &QuadOptions,
    tol: f64,
) -> Result<Complex64> {
    let vol = match volume {
        Some(v) if alg.is_compact() => v,
        _ => return Err(Error::NotCompact),
    };
    Ok(diagonal_general(alg, rep, t, opts, tol)?.trace() * vol)
}

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;

use crate::diagonal::{DiagonalResult, Method, QuadOptions};
use crate::error::{Error, Result};
use crate::quadrature::integrate;
use crate::representation::Weight;

/// Plancherel form on H²(a):
/// U = (1/4πa²)[∫ dν μ(ν) e^{−(¼+α²+ν²)t/a²} + Σ_j 2ν_j e^{−(¼+α²−ν_j²)t/a²}]
/// with μ = ν tanh(πν) (integer α) or ν coth(πν) (half-integer α) and the
/// discrete terms ν_j = |α| − ½ − j > 0.
pub fn plancherel_h2(a: f64, alpha: Weight, t: f64, opts: &QuadOptions) -> Result<DiagonalResult> {
    if !(a > 0.0 && t > 0.0) {
        return Err(Error::BadParams("plancherel_h2 needs a > 0 and t > 0".into()));
    }
    let tau = t / (a * a);
    let al = alpha.value();
    // ν tanh(πν) = |ν| − 2|ν|/(e^{2π|ν|}+1), ν coth(πν) = |ν| + 2|ν|/(e^{2π|ν|}−1).
    let integer = alpha.is_integer();
    let correction = |nu: f64| -> f64 {
        let damp = (-tau * nu * nu).exp();
        if integer {
            -2.0 * nu * damp / ((2.0 * PI * nu).exp() + 1.0)
        } else if nu == 0.0 {
            damp / PI
        } else {
            2.0 * nu * damp / (2.0 * PI * nu).exp_m1()
        }
    };
    const CUTOFF: f64 = 8.0;
    let (rem, quad_err) = integrate(correction, 0.0, CUTOFF, 1e-18, opts.rel_tol.min(1e-13));
    // |correction(ν)| ≤ 2ν e^{−2πν}/(1 − e^{−2πL}) beyond L.
    let tail = 2.0 * (CUTOFF / (2.0 * PI) + 1.0 / (4.0 * PI * PI)) * (-2.0 * PI * CUTOFF).exp()
        / (1.0 - (-2.0 * PI * CUTOFF).exp());
    let continuous = 1.0 / tau + 2.0 * rem;
    let envelope = (-(0.25 + al * al) * tau).exp();
    let mut discrete = 0.0;
    let mut nu = al.abs() - 0.5;
    while nu > 0.0 {
        discrete += 2.0 * nu * (-(0.25 + al * al - nu * nu) * tau).exp();
        nu -= 1.0;
    }
    let norm = 1.0 / (4.0 * PI * a * a);
    let value = norm * (envelope * continuous + discrete);
    let err = norm * envelope * 2.0 * (quad_err + tail) + 4.0 * f64::EPSILON * value.abs();
    Ok(DiagonalResult::scalar(Complex64::new(value, 0.0), Method::Plancherel, err, t, 0))
}

/// One eigenvalue of the weight-α Laplacian on S²(r): l ≥ |α|,
/// λ = (l(l+1) − α²)/r², multiplicity 2l + 1.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SpectralLine {
    pub l: f64,
    pub eigenvalue: f64,
    pub multiplicity: f64,
}

pub fn s2_spectrum(r: f64, alpha: Weight, count: usize) -> Vec<SpectralLine> {
    let a = alpha.value().abs();
    (0..count)
        .map(|k| {
            let l = a + k as f64;
            SpectralLine { l, eigenvalue: (l * (l + 1.0) - a * a) / (r * r), multiplicity: 2.0 * l + 1.0 }
        })
        .collect()
}

/// Σ_{l ≥ |α|} (2l+1) e^{−(l(l+1)−α²)t/r²} / (4πr²) through l = |α| + kmax,
/// with the integral tail bound in `est_error`.
pub fn spectral_sum_s2(r: f64, alpha: Weight, t: f64, kmax: usize, tol: f64) -> Result<DiagonalResult> {
    if !(r > 0.0 && t > 0.0) {
        return Err(Error::BadParams("spectral_sum_s2 needs r > 0 and t > 0".into()));
    }
    let tau = t / (r * r);
    let a = alpha.value().abs();
    let lines = s2_spectrum(r, alpha, kmax + 1);
    let terms: Vec<f64> = lines.iter().map(|ln| ln.multiplicity * (-ln.eigenvalue * t).exp()).collect();
    let sum: f64 = terms.iter().rev().sum();
    let last = a + kmax as f64;
    let tail = if (2.0 * last + 1.0).powi(2) * tau > 2.0 {
        (a * a * tau - last * (last + 1.0) * tau).exp() / tau
    } else {
        f64::INFINITY
    };
    if tail > tol * sum.abs() {
        return Err(Error::TailTooLarge { tail, kmax });
    }
    let norm = 1.0 / (4.0 * PI * r * r);
    let err = norm * (tail + 4.0 * f64::EPSILON * sum);
    Ok(DiagonalResult::scalar(Complex64::new(norm * sum, 0.0), Method::SpectralSum, err, t, kmax + 1))
}

/// Smallest kmax whose tail bound is below `tol` (relative), then the sum.
pub fn spectral_sum_s2_auto(r: f64, alpha: Weight, t: f64, tol: f64) -> Result<DiagonalResult> {
    let mut kmax = 8;
    loop {
        match spectral_sum_s2(r, alpha, t, kmax, tol) {
            Err(Error::TailTooLarge { .. }) if kmax < 1 << 16 => kmax *= 2,
            other => return other,
        }
    }
}

/// The sum exactly as written in the closed form being cross-checked:
/// integer α = m: Σ_{k≥0} (k+½) e^{−((k+½)² − ¼ − m²)t/r²};
/// half-integer α: Σ_{k≥1} k e^{−(k² − ¼ − α²)t/r²}; both over 4πr².
pub fn spectral_sum_s2_as_printed(r: f64, alpha: Weight, t: f64, kmax: usize) -> f64 {
    let a = alpha.value();
    let mut sum = 0.0;
    if alpha.is_integer() {
        for k in (0..=kmax).rev() {
            let kf = k as f64;
            let lam = ((kf + 0.5).powi(2) - 0.25 - a * a) / (r * r);
            sum += (kf + 0.5) * (-lam * t).exp();
        }
    } else {
        for k in (1..=kmax).rev() {
            let kf = k as f64;
            let lam = (kf * kf - 0.25 - a * a) / (r * r);
            sum += kf * (-lam * t).exp();
        }
    }
    sum / (4.0 * PI * r * r)
}

/// Scalar Laplacian on S²(r) from spherical harmonics:
/// U = Σ_{l=0}^{lmax} (2l+1) e^{−l(l+1)t/r²} / (4πr²).
pub fn sphere_harmonic_oracle(r: f64, t: f64, lmax: usize) -> Result<DiagonalResult> {
    let tau = t / (r * r);
    let mut sum = 0.0;
    for l in (0..=lmax).rev() {
        let lf = l as f64;
        sum += (2.0 * lf + 1.0) * (-lf * (lf + 1.0) * tau).exp();
    }
    let lf = lmax as f64;
    let tail = if (2.0 * lf + 1.0).powi(2) * tau > 2.0 { (-lf * (lf + 1.0) * tau).exp() / tau } else { f64::INFINITY };
    if tail > 1e-15 * sum {
        return Err(Error::TailTooLarge { tail, kmax: lmax });
    }
    let norm = 1.0 / (4.0 * PI * r * r);
    Ok(DiagonalResult::scalar(Complex64::new(norm * sum, 0.0), Method::Oracle, norm * (tail + 4.0 * f64::EPSILON * sum), t, lmax + 1))
}

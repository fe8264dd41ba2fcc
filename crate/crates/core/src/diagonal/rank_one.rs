use std::f64::consts::PI;

use num_complex::Complex64;

use crate::diagonal::{hermite_converge, DiagonalResult, Method, QuadOptions};
use crate::error::{Error, Result};
use crate::representation::Weight;

fn z_over_sinh(z: Complex64) -> Complex64 {
    if z.norm() < 1e-4 {
        let z2 = z * z;
        1.0 - z2 / 6.0 + 7.0 * z2 * z2 / 360.0
    } else {
        z / z.sinh()
    }
}

/// e^{−ω²/4}/√(4π) · (ωc)/sinh(ωc) · cosh(2αωc) with c = √(t/(4a²)).
///
/// The function depends on t only through t/a², which is how the sphere
/// (a² = −r²) and the hyperbolic plane share one analytic form.
pub fn rank_one_kernel(a_sq: Complex64, alpha: f64, t: f64, omega: Complex64) -> Complex64 {
    let c = (Complex64::new(t, 0.0) / (4.0 * a_sq)).sqrt();
    let z = omega * c;
    (-omega * omega / 4.0).exp() / (4.0 * PI).sqrt() * z_over_sinh(z) * (2.0 * alpha * z).cosh()
}

/// ∫ dω/√(4π) e^{−ω²/4} K(ωc) cosh(2αωc) along ω = 2(x + iη), averaged over ±η.
fn rank_one_integral(a_sq: Complex64, alpha: f64, t: f64, eta: f64, opts: &QuadOptions) -> Result<(Complex64, f64, usize)> {
    let c = (Complex64::new(t, 0.0) / (4.0 * a_sq)).sqrt();
    let shifts: &[f64] = if eta == 0.0 { &[0.0] } else { &[eta, -eta] };
    let count = shifts.len() as f64;
    hermite_converge(opts, |x| {
        let mut acc = Complex64::new(0.0, 0.0);
        for &h in shifts {
            // e^{−(x+ih)²} = e^{−x²} e^{h²} e^{−2ixh}; e^{−x²} is in the rule.
            let phase = Complex64::new(h * h, -2.0 * x * h).exp();
            let z = 2.0 * Complex64::new(x, h) * c;
            acc += phase * z_over_sinh(z) * (2.0 * alpha * z).cosh();
        }
        Ok(acc / (count * PI.sqrt()))
    })
}

fn check_args(radius: f64, t: f64) -> Result<()> {
    if !(radius > 0.0 && radius.is_finite()) {
        return Err(Error::BadParams(format!("radius must be positive, got {radius}")));
    }
    if !(t > 0.0 && t.is_finite()) {
        return Err(Error::BadParams(format!("t must be positive, got {t}")));
    }
    Ok(())
}

/// Scalar heat kernel diagonal of weight α on S²(r).
///
/// Evaluated on the pole-free line ω ∈ ℝ ± iη: the integrand is the
/// continuation a² → −r² of the hyperbolic one, whose poles sit on the real
/// ω axis at physical t.
pub fn diagonal_s2(r: f64, alpha: Weight, t: f64, opts: &QuadOptions) -> Result<DiagonalResult> {
    check_args(r, t)?;
    let a = alpha.value();
    let (j, err, nodes) = rank_one_integral(Complex64::new(-r * r, 0.0), a, t, opts.shift, opts)?;
    let pref = ((0.25 + a * a) * t / (r * r)).exp() / (4.0 * PI * t);
    Ok(DiagonalResult::scalar(j * pref, Method::Integral, err * pref, t, nodes))
}

/// Scalar heat kernel diagonal of weight α on H²(a), real ω axis.
pub fn diagonal_h2(a: f64, alpha: Weight, t: f64, opts: &QuadOptions) -> Result<DiagonalResult> {
    check_args(a, t)?;
    let al = alpha.value();
    let (j, err, nodes) = rank_one_integral(Complex64::new(a * a, 0.0), al, t, 0.0, opts)?;
    let pref = (-(0.25 + al * al) * t / (a * a)).exp() / (4.0 * PI * t);
    Ok(DiagonalResult::scalar(j * pref, Method::Integral, err * pref, t, nodes))
}

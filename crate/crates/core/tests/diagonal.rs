use std::f64::consts::PI;

use num_complex::Complex64;
use symkernel::curvature::{CurvatureAlgebra, Space, Tolerances};
use symkernel::diagonal::*;
use symkernel::error::Error;
use symkernel::gaussian::heat_coefficients;
use symkernel::linalg::{cmax_abs, CMatrix};
use symkernel::representation::{Representation, Weight};

fn alg(spec: &str) -> CurvatureAlgebra {
    let space: Space = spec.parse().unwrap();
    CurvatureAlgebra::from_riemann(&space.riemann().unwrap(), Tolerances::default()).unwrap()
}

fn opts() -> QuadOptions {
    QuadOptions::default()
}

fn weights() -> Vec<Weight> {
    vec![Weight::ZERO, Weight::HALF, Weight::integer(1), Weight::new(3, 2).unwrap(), Weight::integer(2)]
}

#[test]
fn sphere_integral_matches_harmonics() {
    for &t in &[0.1, 0.25, 0.5, 1.0, 2.0] {
        let exact = sphere_harmonic_oracle(1.0, t, 400).unwrap().trace().re;
        let got = diagonal_s2(1.0, Weight::ZERO, t, &opts()).unwrap();
        let rel = (got.trace().re - exact).abs() / exact;
        assert!(rel < 1e-6, "t={t}: {} vs {exact} ({rel:e})", got.trace());
        assert!(got.trace().im.abs() < 1e-12 * exact);
    }
}

#[test]
fn sphere_integral_matches_weighted_spectrum() {
    for alpha in weights() {
        for &(r, t) in &[(1.0, 0.2), (1.0, 1.0), (2.0, 1.5), (0.5, 0.1)] {
            let exact = spectral_sum_s2_auto(r, alpha, t, 1e-15).unwrap().trace().re;
            let got = diagonal_s2(r, alpha, t, &opts()).unwrap().trace();
            let rel = (got.re - exact).abs() / exact;
            assert!(rel < 1e-8, "α={alpha} r={r} t={t}: {got} vs {exact}");
        }
    }
}

#[test]
fn hyperbolic_integral_matches_plancherel() {
    for alpha in [Weight::ZERO, Weight::HALF, Weight::integer(1)] {
        for &t in &[0.01, 0.1, 1.0, 5.0] {
            let exact = plancherel_h2(1.0, alpha, t, &opts()).unwrap();
            let got = diagonal_h2(1.0, alpha, t, &opts()).unwrap();
            let rel = (got.trace().re - exact.trace().re).abs() / exact.trace().re;
            assert!(rel < 1e-8, "α={alpha} t={t}: {} vs {} ({rel:e})", got.trace(), exact.trace());
            assert!(exact.relative_error() < 1e-10);
        }
    }
}

#[test]
fn hyperbolic_plancherel_with_discrete_terms() {
    for alpha in [Weight::new(3, 2).unwrap(), Weight::integer(2)] {
        for &t in &[0.1, 1.0, 3.0] {
            let exact = plancherel_h2(1.0, alpha, t, &opts()).unwrap().trace().re;
            let got = diagonal_h2(1.0, alpha, t, &opts()).unwrap().trace().re;
            assert!((got - exact).abs() / exact < 1e-8, "α={alpha} t={t}: {got} vs {exact}");
        }
    }
}

#[test]
fn as_printed_sum_is_half_at_zero_weight() {
    for &t in &[0.3, 1.0, 2.0] {
        let printed = spectral_sum_s2_as_printed(1.0, Weight::ZERO, t, 2000);
        let exact = sphere_harmonic_oracle(1.0, t, 2000).unwrap().trace().re;
        assert!((printed / exact - 0.5).abs() < 1e-12, "t={t}: ratio {}", printed / exact);
    }
}

#[test]
fn rank_one_duality_and_positivity() {
    // The S² integrand is the H² one at a² = −r².
    let w = Complex64::new(0.7, 0.3);
    let s = rank_one_kernel(Complex64::new(-1.0, 0.0), 0.5, 0.4, w);
    let h = rank_one_kernel(Complex64::new(1.0, 0.0), 0.5, -0.4, w);
    assert!((s - h).norm() < 1e-15);
    for alpha in weights() {
        for &t in &[0.05, 0.5, 3.0] {
            assert!(diagonal_s2(1.0, alpha, t, &opts()).unwrap().trace().re > 0.0);
            assert!(diagonal_h2(1.0, alpha, t, &opts()).unwrap().trace().re > 0.0);
        }
    }
}

#[test]
fn hyperbolic_scalar_decreases() {
    let mut last = f64::INFINITY;
    for k in 1..30 {
        let t = 0.1 * k as f64;
        let u = plancherel_h2(1.0, Weight::ZERO, t, &opts()).unwrap().trace().re;
        assert!(u < last);
        last = u;
    }
}

#[test]
fn spectral_sum_reports_tail() {
    let err = spectral_sum_s2(1.0, Weight::ZERO, 0.01, 3, 1e-12).unwrap_err();
    assert!(matches!(err, Error::TailTooLarge { .. }));
    let lines = s2_spectrum(1.0, Weight::integer(2), 3);
    assert_eq!(lines[0].eigenvalue, 2.0);
    assert_eq!(lines[0].multiplicity, 5.0);
}

#[test]
fn general_matches_rank_one() {
    let s2 = alg("S2:r=1");
    let h2 = alg("H2:a=1");
    for alpha in weights() {
        let rep = Representation::weight(2, alpha).unwrap();
        for &t in &[0.1, 1.0] {
            let g = diagonal_general(&s2, &rep, t, &opts(), 1e-10).unwrap().trace();
            let r = diagonal_s2(1.0, alpha, t, &opts()).unwrap().trace();
            assert!((g - r).norm() / r.norm() < 1e-9, "S² α={alpha} t={t}: {g} vs {r}");
            let g = diagonal_general(&h2, &rep, t, &opts(), 1e-10).unwrap().trace();
            let r = diagonal_h2(1.0, alpha, t, &opts()).unwrap().trace();
            assert!((g - r).norm() / r.norm() < 1e-9, "H² α={alpha} t={t}: {g} vs {r}");
        }
    }
}

#[test]
fn flat_space_is_gaussian() {
    for n in 1..5 {
        let a = alg(&format!("flat:n={n}"));
        let u = diagonal_general(&a, &Representation::scalar(n), 0.7, &opts(), 1e-10).unwrap();
        assert!((u.trace().re - (4.0 * PI * 0.7f64).powf(-(n as f64) / 2.0)).abs() < 1e-15);
    }
}

#[test]
fn product_factorizes() {
    let t = 0.6;
    let prod = alg("S2:r=1*H2:a=1");
    let u = diagonal_general(&prod, &Representation::scalar(4), t, &opts(), 1e-10).unwrap().trace();
    let s = sphere_harmonic_oracle(1.0, t, 400).unwrap().trace();
    let h = plancherel_h2(1.0, Weight::ZERO, t, &opts()).unwrap().trace();
    assert!((u - s * h).norm() / (s * h).norm() < 1e-9, "{u} vs {}", s * h);
    let prod = alg("S2:r=1*flat:n=1");
    let u = diagonal_general(&prod, &Representation::scalar(3), t, &opts(), 1e-10).unwrap().trace();
    let f = (4.0 * PI * t).powf(-0.5);
    assert!((u - s * f).norm() / (s * f).norm() < 1e-9);
}

#[test]
fn small_t_matches_series() {
    for spec in ["S2:r=1", "H2:a=1", "S2:r=1*H2:a=1"] {
        let a = alg(spec);
        let n = a.n();
        let rep = if n == 2 { Representation::weight(2, Weight::HALF).unwrap() } else { Representation::vector(n) };
        let hc = heat_coefficients(&a, &rep, 3, 1e-10, spec).unwrap();
        let t: f64 = 0.02;
        let mut series = CMatrix::zeros(rep.dim(), rep.dim());
        for (k, ak) in hc.a.iter().enumerate() {
            series += ak * Complex64::new(t.powi(k as i32), 0.0);
        }
        series *= Complex64::new((4.0 * PI * t).powf(-(n as f64) / 2.0), 0.0);
        let u = diagonal_general(&a, &rep, t, &opts(), 1e-10).unwrap().value;
        let rel = cmax_abs(&(&u - &series)) / cmax_abs(&series);
        assert!(rel < 1e-7, "{spec}: {rel:e}");
    }
}

#[test]
fn non_commuting_compact_directions_are_refused() {
    let err = diagonal_general(&alg("S3:r=1"), &Representation::scalar(3), 0.5, &opts(), 1e-10).unwrap_err();
    assert!(matches!(err, Error::MixedContourUnsupported(_)));
    let err = diagonal_general(&alg("S2:r=1*S2:r=1*S2:r=1*S2:r=1"), &Representation::scalar(8), 0.5, &opts(), 1e-10).unwrap_err();
    assert!(matches!(err, Error::Unsupported(_)));
}

#[test]
fn heat_trace_needs_compactness() {
    let h2 = alg("H2:a=1");
    let err = heat_trace(&h2, &Representation::scalar(2), None, 1.0, &opts(), 1e-10).unwrap_err();
    assert!(matches!(err, Error::NotCompact));
    let s2 = alg("S2:r=1");
    let z = heat_trace(&s2, &Representation::scalar(2), Some(4.0 * PI), 1.0, &opts(), 1e-10).unwrap();
    let exact: f64 = (0..200).map(|l| (2 * l + 1) as f64 * (-(l * (l + 1)) as f64).exp()).sum();
    assert!((z.re - exact).abs() < 1e-9 * exact);
}

#[test]
fn hyperbolic_three_space_closed_form() {
    // U = (4πt)^{−3/2} e^{−t/a²} for the scalar Laplacian on H³(a).
    let a = alg("H3:a=1");
    for &t in &[0.5, 1.0] {
        let u = diagonal_general(&a, &Representation::scalar(3), t, &opts(), 1e-10).unwrap().trace().re;
        let exact = (4.0 * PI * t).powf(-1.5) * (-t).exp();
        assert!((u - exact).abs() < 1e-9 * exact, "t={t}: {u} vs {exact}");
    }
}

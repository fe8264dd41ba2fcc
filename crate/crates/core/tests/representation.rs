use num_complex::Complex64;
use symkernel::curvature::{CurvatureAlgebra, Space, Tolerances};
use symkernel::error::Error;
use symkernel::linalg::{cmax_abs, CMatrix, RMatrix};
use symkernel::representation::*;

fn alg(spec: &str) -> CurvatureAlgebra {
    let space: Space = spec.parse().unwrap();
    CurvatureAlgebra::from_riemann(&space.riemann().unwrap(), Tolerances::default()).unwrap()
}

#[test]
fn builtin_reps_satisfy_so_relations() {
    for n in 1..6 {
        assert_eq!(Representation::scalar(n).so_relations_residual(), 0.0);
        assert!(Representation::vector(n).so_relations_residual() < 1e-15);
    }
    for n in [2, 4, 6, 8] {
        let s = Representation::spinor(n).unwrap();
        assert_eq!(s.dim(), 1 << (n / 2));
        assert!(s.so_relations_residual() < 1e-14, "n={n}");
    }
    assert!(matches!(Representation::spinor(3), Err(Error::Unsupported(_))));
    assert!(matches!(Representation::weight(3, Weight::HALF), Err(Error::Unsupported(_))));
    let w = Representation::weight(2, Weight::new(3, 2).unwrap()).unwrap();
    assert!(w.so_relations_residual() < 1e-15);
}

#[test]
fn custom_rep_rejects_broken_relations() {
    let mut gens = vector_generators(3);
    gens[1] *= Complex64::new(1.5, 0.0);
    assert!(Representation::custom(3, gens, 1e-10).is_err());
    assert!(Representation::custom(3, vector_generators(3), 1e-10).is_ok());
}

#[test]
fn weight_casimir_on_sphere() {
    // 𝓡 = iα/r², so 𝓡² = −α²/r².
    for &r in &[1.0, 2.0] {
        let a = alg(&format!("S2:r={r}"));
        for alpha in [Weight::HALF, Weight::integer(1), Weight::new(-3, 2).unwrap()] {
            let act = holonomy_action(&a, &Representation::weight(2, alpha).unwrap(), 1e-10).unwrap();
            let expect = -alpha.value().powi(2) / (r * r);
            assert!((act.casimir[(0, 0)] - Complex64::new(expect, 0.0)).norm() < 1e-14);
            let g = act.generators[0][(0, 0)];
            assert!((g.norm() - alpha.value().abs() / (r * r)).abs() < 1e-14 && g.re == 0.0);
        }
    }
}

#[test]
fn spinor_casimir_identity_holds() {
    for spec in ["S2:r=1", "S4:r=1", "H2:a=1", "S2:r=1*H2:a=1", "S4:r=2"] {
        let a = alg(spec);
        assert!(spinor_casimir_identity(&a, None, 1e-10).unwrap() < 1e-12, "{spec}");
        let twist = Representation::vector(a.n());
        assert!(spinor_casimir_identity(&a, Some(&twist), 1e-10).unwrap() < 1e-12, "{spec} twisted");
    }
    let s2 = alg("S2:r=1");
    let w = Representation::weight(2, Weight::integer(2)).unwrap();
    assert!(spinor_casimir_identity(&s2, Some(&w), 1e-10).unwrap() < 1e-12);
}

#[test]
fn holonomy_generators_represent_the_algebra() {
    for spec in ["S3:r=1", "S4:r=1", "H3:a=1", "S2:r=1*H2:a=1"] {
        let a = alg(spec);
        for rep in [Representation::vector(a.n()), Representation::scalar(a.n())] {
            let g = holonomy_generators(&a, &rep, 1e-10).unwrap();
            assert!(representation_residual(&a, &g) < 1e-12);
        }
        assert!(two_form_consistency(&a, &Representation::vector(a.n()), 1e-10).unwrap() < 1e-12, "{spec}");
    }
}

#[test]
fn gauge_curvature_is_integrable() {
    for spec in ["S2:r=1", "S4:r=1", "S3:r=1", "S2:r=1*flat:n=2"] {
        let a = alg(spec);
        let rep = Representation::vector(a.n());
        let t = holonomy_generators(&a, &rep, 1e-10).unwrap();
        let f = gauge_curvature(&a, &t, rep.dim(), None, 1e-10).unwrap();
        assert!(gauge_integrability_residual(&a, &f) < 1e-12, "{spec}");
    }
    // A constant field on the flat block is allowed, one on the sphere is not.
    let a = alg("S2:r=1*flat:n=2");
    let mut b = RMatrix::zeros(4, 4);
    b[(2, 3)] = 0.4;
    b[(3, 2)] = -0.4;
    let rep = Representation::scalar(4).with_abelian_field(b.clone(), &a, 1e-10).unwrap();
    assert!(rep.abelian_field().is_some());
    let f = gauge_curvature(&a, &[CMatrix::zeros(1, 1)], 1, Some(&b), 1e-10).unwrap();
    assert!(gauge_integrability_residual(&a, &f) < 1e-14);
    let mut bad = RMatrix::zeros(4, 4);
    bad[(0, 1)] = 0.4;
    bad[(1, 0)] = -0.4;
    let err = Representation::scalar(4).with_abelian_field(bad, &a, 1e-10).unwrap_err();
    assert!(matches!(err, Error::BadAbelianField { .. }));
}

#[test]
fn unitary_conjugation_preserves_relations() {
    let s = Representation::spinor(4).unwrap();
    let h = CMatrix::from_fn(4, 4, |i, j| Complex64::new((i + 2 * j) as f64 * 0.1, (i as f64 - j as f64) * 0.2));
    let herm = (&h + h.adjoint()) * Complex64::new(0.5, 0.0);
    let u = (herm * Complex64::new(0.0, 1.0)).exp();
    let c = s.conjugated(&u);
    assert!(c.so_relations_residual() < 1e-13);
    let a = alg("S4:r=1");
    let g1 = holonomy_action(&a, &s, 1e-10).unwrap().casimir;
    let g2 = holonomy_action(&a, &c, 1e-10).unwrap().casimir;
    assert!(cmax_abs(&(&u * g1 * u.adjoint() - g2)) < 1e-12);
}

#[test]
fn representation_json_round_trip() {
    let a = alg("S2:r=1");
    let rep = Representation::weight(2, Weight::new(3, 2).unwrap()).unwrap();
    let text = serde_json::to_string(&RepresentationJson::from(&rep)).unwrap();
    let back: RepresentationJson = serde_json::from_str(&text).unwrap();
    let back = back.into_representation(&a, 1e-10).unwrap();
    assert_eq!(back.alpha(), rep.alpha());
    assert_eq!(back.generators(), rep.generators());
    assert_eq!(serde_json::to_string(&Weight::new(-1, 2).unwrap()).unwrap(), "[-1,2]");
    assert!("2/3".parse::<Weight>().is_err());
}

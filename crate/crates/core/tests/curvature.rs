use nalgebra::{DMatrix, SymmetricEigen};
use symkernel::curvature::*;
use symkernel::linalg::{commutator, max_abs, pairs};
use symkernel::Error;

fn alg(spec: &str) -> CurvatureAlgebra {
    let space: Space = spec.parse().unwrap();
    CurvatureAlgebra::from_riemann(&space.riemann().unwrap(), Tolerances::default()).unwrap()
}

const CATALOG: [&str; 8] = ["S2:r=1", "H2:a=1", "S3:r=1", "S4:r=1", "H3:a=1", "S2:r=1*H2:a=1", "S2:r=1*flat:n=1", "S2:r=0.7*S2:r=1.3"];

/// Eigenvalues of the pair operator assembled straight from the components.
fn brute_eigenvalues(riem: &RiemannData) -> Vec<f64> {
    let pr = pairs(riem.dim());
    let m = DMatrix::from_fn(pr.len(), pr.len(), |i, j| riem.get(pr[i].0, pr[i].1, pr[j].0, pr[j].1));
    let mut ev: Vec<f64> = SymmetricEigen::new(m).eigenvalues.iter().copied().collect();
    ev.sort_by(|a, b| b.total_cmp(a));
    ev
}

#[test]
fn curvature_operator_examples() {
    let s2 = RiemannData::sphere(2, 1.0).unwrap();
    assert_eq!(curvature_operator(&s2, 1e-10).unwrap(), DMatrix::from_element(1, 1, 1.0));
    let flat = RiemannData::flat(3).unwrap();
    assert_eq!(curvature_operator(&flat, 1e-10).unwrap(), DMatrix::zeros(3, 3));
    let prod: Space = "S2:r=1*H2:a=1".parse().unwrap();
    let op = curvature_operator(&prod.riemann().unwrap(), 1e-10).unwrap();
    assert_eq!(op.nrows(), 6);
    let ev = brute_eigenvalues(&prod.riemann().unwrap());
    let expected = [1.0, 0.0, 0.0, 0.0, 0.0, -1.0];
    for (a, b) in ev.iter().zip(expected) {
        assert!((a - b).abs() < 1e-14);
    }
}

#[test]
fn spectral_split_examples() {
    let a = alg("S2:r=2");
    assert_eq!(a.p(), 1);
    assert_eq!(a.n0(), 0);
    assert!((a.beta()[0] - 0.25).abs() < 1e-15);

    let f = alg("flat:n=4");
    assert_eq!((f.p(), f.n0()), (0, 4));
    assert!(f.beta().is_empty());

    let s4 = alg("S4:r=1");
    assert_eq!(s4.p(), 6);
    assert!(s4.beta().iter().all(|l| (l - 1.0).abs() < 1e-13));

    let mixed = alg("S2:r=1*flat:n=1");
    assert_eq!((mixed.p(), mixed.n0(), mixed.ns()), (1, 1, 2));
}

#[test]
fn spectrum_matches_brute_force() {
    for spec in CATALOG {
        let space: Space = spec.parse().unwrap();
        let riem = space.riemann().unwrap();
        let a = alg(spec);
        let mut nonzero: Vec<f64> = brute_eigenvalues(&riem).into_iter().filter(|x| x.abs() > 1e-12).collect();
        let mut beta = a.beta().to_vec();
        nonzero.sort_by(|x, y| x.total_cmp(y));
        beta.sort_by(|x, y| x.total_cmp(y));
        assert_eq!(nonzero.len(), beta.len(), "{spec}");
        for (x, y) in nonzero.iter().zip(&beta) {
            assert!((x - y).abs() < 1e-12, "{spec}");
        }
        // ½X_ab Y^ab orthonormality of the two-forms.
        for (i, ei) in a.forms().iter().enumerate() {
            for (j, ej) in a.forms().iter().enumerate() {
                let dot = 0.5 * ei.dot(ej);
                let target = if i == j { 1.0 } else { 0.0 };
                assert!((dot - target).abs() < 1e-12, "{spec}");
            }
        }
    }
}

#[test]
fn generators_of_rank_one_surfaces() {
    let s2 = alg("S2:r=1");
    let d = &s2.generators()[0];
    assert_eq!((d[(0, 1)], d[(1, 0)]), (-1.0, 1.0));
    let h2 = alg("H2:a=1");
    let d = &h2.generators()[0];
    assert_eq!((d[(0, 1)], d[(1, 0)]), (1.0, -1.0));
    assert!(alg("flat:n=2").generators().is_empty());
}

#[test]
fn structure_constants() {
    assert_eq!(alg("S2:r=1").structure_constants(), &[0.0]);
    assert!(alg("flat:n=3").structure_constants().is_empty());
    let s4 = alg("S4:r=1");
    let d = s4.generators();
    for i in 0..6 {
        for k in 0..6 {
            let mut m = commutator(&d[i], &d[k]);
            for j in 0..6 {
                m -= &d[j] * s4.f(j, i, k);
            }
            assert!(max_abs(&m) < 1e-12);
        }
    }
    assert!(validate(&s4, 1e-12).residual("holonomy_jacobi").unwrap() < 1e-12);
}

#[test]
fn not_closed_is_detected() {
    // Two generators of so(3): their commutator leaves the span.
    let mut x12 = DMatrix::zeros(3, 3);
    x12[(0, 1)] = 1.0;
    x12[(1, 0)] = -1.0;
    let mut x23 = DMatrix::zeros(3, 3);
    x23[(1, 2)] = 1.0;
    x23[(2, 1)] = -1.0;
    assert!(matches!(holonomy_structure_constants(&[x12, x23], 1e-10), Err(Error::NotClosed { .. })));
}

#[test]
fn gray_zone_rank_is_rejected() {
    let op = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![1.0, 1.5e-8, 0.0]));
    assert!(matches!(spectral_split(&op, 3, 1e-8), Err(Error::DegenerateSplit { .. })));
    let op = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![1.0, 0.5e-8, 0.0]));
    assert_eq!(spectral_split(&op, 3, 1e-8).unwrap().p, 1);
}

#[test]
fn scalar_invariants() {
    let s2 = alg("S2:r=1");
    assert!((s2.scalar_curvature() - 2.0).abs() < 1e-14);
    assert_eq!(s2.holonomy_curvature(), 0.0);
    assert!((alg("H2:a=1").scalar_curvature() + 2.0).abs() < 1e-14);
    let f = alg("flat:n=3");
    assert_eq!((f.scalar_curvature(), f.holonomy_curvature(), f.group_curvature()), (0.0, 0.0, 0.0));
    // Sⁿ(r): R = n(n−1)/r².
    for (n, r) in [(3usize, 1.0f64), (4, 2.0)] {
        let a = alg(&format!("S{n}:r={r}"));
        let target = (n * (n - 1)) as f64 / (r * r);
        assert!((a.scalar_curvature() - target).abs() < 1e-12);
    }
    // R_G = ¾R + R_H.
    for spec in CATALOG {
        let a = alg(spec);
        let rg = 0.75 * a.scalar_curvature() + a.holonomy_curvature();
        assert!((a.group_curvature() - rg).abs() < 1e-12, "{spec}");
    }
}

#[test]
fn catalog_validates() {
    for spec in CATALOG {
        let report = validate(&alg(spec), 1e-10);
        assert!(report.pass, "{spec}: {report:?}");
        assert!(report.families.len() >= 12);
    }
    let flat = validate(&alg("flat:n=3"), 1e-10);
    assert!(flat.families.iter().all(|f| f.residual == 0.0));
}

#[test]
fn perturbed_tensor_fails_integrability() {
    let mut riem = RiemannData::sphere(3, 1.0).unwrap();
    // A symmetric perturbation that keeps the algebraic symmetries.
    for (a, b, c, d) in [(0, 1, 0, 2), (1, 0, 2, 0), (0, 2, 0, 1), (2, 0, 1, 0)] {
        riem.set(a, b, c, d, riem.get(a, b, c, d) + 0.1);
    }
    for (a, b, c, d) in [(1, 0, 0, 2), (0, 1, 2, 0), (2, 0, 0, 1), (0, 2, 1, 0)] {
        riem.set(a, b, c, d, riem.get(a, b, c, d) - 0.1);
    }
    let report = validate_riemann(&riem, Tolerances::default());
    assert!(report.residual("symmetries").unwrap() < 1e-15);
    assert!(report.residual("integrability").unwrap() > 1e-3);
    assert!(!report.pass);

    let mut s2 = RiemannData::sphere(2, 1.0).unwrap();
    s2.set(0, 1, 0, 1, 1.1);
    let report = validate_riemann(&s2, Tolerances::default());
    assert!(!report.pass);
    assert!(report.construction_error.is_some());
}

#[test]
fn symmetry_violation() {
    let mut s2 = RiemannData::sphere(2, 1.0).unwrap();
    s2.set(0, 1, 0, 1, 1.1);
    assert!(matches!(curvature_operator(&s2, 1e-10), Err(Error::SymmetryViolation { .. })));
}

#[test]
fn sign_gauge_independence() {
    for spec in ["S3:r=1", "S2:r=1*H2:a=1", "H3:a=1"] {
        let a = alg(spec);
        for i in 0..a.p() {
            let b = a.with_flipped_form(i);
            assert!(validate(&b, 1e-10).pass);
            for (x, y) in [
                (a.scalar_curvature(), b.scalar_curvature()),
                (a.holonomy_curvature(), b.holonomy_curvature()),
                (a.group_curvature(), b.group_curvature()),
            ] {
                assert!((x - y).abs() < 1e-12);
            }
        }
    }
}

#[test]
fn compact_type_and_bookkeeping() {
    for spec in CATALOG {
        let a = alg(spec);
        let g = a.gamma();
        let ginv = g.clone().try_inverse().unwrap();
        for c in a.c_matrices() {
            assert!(max_abs(&(c.transpose() + &g * c * &ginv)) < 1e-10, "{spec}");
        }
        assert_eq!(a.n0() + a.ns(), a.n());
        assert!(a.p() <= a.ns() * a.ns().saturating_sub(1) / 2);
        let killing: f64 = (0..a.p()).map(|i| a.rho()[(i, i)] / a.beta()[i]).sum();
        assert!((killing - a.scalar_curvature()).abs() < 1e-10);
    }
}

#[test]
fn radius_scaling() {
    for c in [0.5, 3.0] {
        let a = alg(&format!("S3:r={c}"));
        assert!(a.beta().iter().all(|l| (l - 1.0 / (c * c)).abs() < 1e-12));
        assert!(validate(&a, 1e-10).residual("holonomy_jacobi").unwrap() < 1e-12);
    }
}

#[test]
fn builtin_products() {
    let prod: Space = "S2:r=1*flat:n=1".parse().unwrap();
    let r = prod.riemann().unwrap();
    assert_eq!(r.dim(), 3);
    assert_eq!(r.get(0, 1, 0, 1), 1.0);
    assert_eq!(r.components().iter().filter(|x| **x != 0.0).count(), 4);
    assert!(RiemannData::flat(3).unwrap().components().iter().all(|x| *x == 0.0));
    assert!(matches!(RiemannData::sphere(2, 0.0), Err(Error::BadParams(_))));
}

#[test]
fn riemann_json_round_trip() {
    let riem = "S2:r=1*H2:a=2".parse::<Space>().unwrap().riemann().unwrap();
    let text = symkernel::json::to_string(&riem).unwrap();
    let back: RiemannData = serde_json::from_str(&text).unwrap();
    assert_eq!(back, riem);
    let r1 = validate_riemann(&riem, Tolerances::default());
    let r2 = validate_riemann(&back, Tolerances::default());
    assert_eq!(r1, r2);
}

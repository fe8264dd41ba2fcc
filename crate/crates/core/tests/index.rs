use std::f64::consts::PI;

use num_complex::Complex64;
use symkernel::curvature::{CurvatureAlgebra, Space, Tolerances};
use symkernel::diagonal::QuadOptions;
use symkernel::error::Error;
use symkernel::index::*;
use symkernel::linalg::{cmax_abs, CMatrix, RMatrix};
use symkernel::representation::{clifford_generators, holonomy_generators, Representation, Weight};

fn alg(spec: &str) -> CurvatureAlgebra {
    let space: Space = spec.parse().unwrap();
    CurvatureAlgebra::from_riemann(&space.riemann().unwrap(), Tolerances::default()).unwrap()
}

fn twisted_s2(m: i64) -> Representation {
    let spin = Representation::spinor(2).unwrap();
    Representation::product(&spin, &Representation::weight(2, Weight::integer(m)).unwrap()).unwrap()
}

fn permutations(n: usize) -> Vec<(Vec<usize>, f64)> {
    if n == 1 {
        return vec![(vec![0], 1.0)];
    }
    let mut out = Vec::new();
    for (perm, sign) in permutations(n - 1) {
        for pos in 0..n {
            let mut p = perm.clone();
            p.insert(pos, n - 1);
            // Inserting at `pos` moves the new element past n − 1 − pos others.
            let s = if (n - 1 - pos) % 2 == 0 { sign } else { -sign };
            out.push((p, s));
        }
    }
    out
}

#[test]
fn chirality_matches_antisymmetrized_product() {
    for n in [2usize, 4] {
        let g = clifford_generators(n).unwrap();
        let dim = g[0].nrows();
        let mut sum = CMatrix::zeros(dim, dim);
        let perms = permutations(n);
        for (p, s) in &perms {
            let prod = p.iter().fold(CMatrix::identity(dim, dim), |acc, &a| acc * &g[a]);
            sum += prod * Complex64::new(*s, 0.0);
        }
        let phase = Complex64::i().powu((n * (n - 1) / 2) as u32);
        let expect = sum * (phase / perms.len() as f64);
        let ch = chirality(n).unwrap();
        assert!(cmax_abs(&(&ch.gamma - expect)) < 1e-14);
        assert!(ch.square_residual() < 1e-12);
        assert!(ch.anticommutator_residual() < 1e-12);
        assert!(symkernel::linalg::ctrace(&ch.gamma).norm() < 1e-14);
        // Commutes with every even product γ_aγ_b.
        for a in 0..n {
            for b in 0..n {
                let e = &g[a] * &g[b];
                assert!(cmax_abs(&(&ch.gamma * &e - &e * &ch.gamma)) < 1e-14);
            }
        }
    }
    assert!(matches!(chirality(3), Err(Error::Unsupported(_))));
}

#[test]
fn chirality_commutes_with_holonomy() {
    for spec in ["S2:r=1", "S4:r=1", "S2:r=1*H2:a=1"] {
        let a = alg(spec);
        let n = a.n();
        let gens = holonomy_generators(&a, &Representation::spinor(n).unwrap(), 1e-10).unwrap();
        let g = chirality(n).unwrap().gamma;
        for t in gens {
            assert!(cmax_abs(&(&g * &t - &t * &g)) < 1e-12, "{spec}");
        }
    }
}

#[test]
fn dirac_square_examples() {
    let s2 = alg("S2:r=1");
    let v = dirac_square_terms(&s2, &Representation::spinor(2).unwrap(), 1e-10).unwrap();
    assert!(cmax_abs(&(v + CMatrix::identity(2, 2) * Complex64::new(0.5, 0.0))) < 1e-15);

    let flat = alg("flat:n=2");
    let mut b = RMatrix::zeros(2, 2);
    b[(0, 1)] = 0.7;
    b[(1, 0)] = -0.7;
    let rep = Representation::spinor(2).unwrap().with_abelian_field(b, &flat, 1e-10).unwrap();
    let v = dirac_square_terms(&flat, &rep, 1e-10).unwrap();
    let g = clifford_generators(2).unwrap();
    let g12 = (&g[0] * &g[1] - &g[1] * &g[0]) * Complex64::new(0.5, 0.0);
    // ½(B_12γ^{12} + B_21γ^{21}) = B_12γ^{12}
    assert!(cmax_abs(&(v - g12 * Complex64::new(0.7, 0.0))) < 1e-15);

    let s4 = alg("S4:r=1");
    let twist = Representation::vector(4);
    let rep = Representation::product(&Representation::spinor(4).unwrap(), &twist).unwrap();
    assert!(dirac_square_consistency(&s4, &rep, 1e-10).unwrap() < 1e-12);
    for m in -2..=2 {
        assert!(dirac_square_consistency(&s2, &twisted_s2(m), 1e-10).unwrap() < 1e-12);
    }
}

#[test]
fn untwisted_indices_vanish() {
    let s2 = alg("S2:r=1");
    let r = index(&s2, &Representation::spinor(2).unwrap(), 4.0 * PI, 1e-10).unwrap();
    assert_eq!(r.nearest_integer, 0);
    assert!(r.index.abs() < 1e-12);
    let s4 = alg("S4:r=1");
    let vol = symkernel::curvature::sphere_volume(4);
    let r = index(&s4, &Representation::spinor(4).unwrap(), vol, 1e-10).unwrap();
    assert!(r.index.abs() < 1e-12);
    let flat = alg("flat:n=2");
    assert!(index(&flat, &Representation::spinor(2).unwrap(), 1.0, 1e-10).unwrap().index.abs() < 1e-15);
}

#[test]
fn twisted_sphere_index_matches_zero_mode_count() {
    let s2 = alg("S2:r=1");
    for m in -3..=3 {
        let rep = twisted_s2(m);
        let ind = index(&s2, &rep, 4.0 * PI, 1e-10).unwrap();
        let oracle = s2_spectral_index(&s2, &rep, 1.0, 2.0, 1e-10).unwrap();
        assert_eq!(ind.nearest_integer, oracle.zero_mode_index, "m={m}");
        assert_eq!(ind.nearest_integer, -2 * m, "m={m}");
        assert!((oracle.graded_trace - ind.index).abs() < 1e-8, "m={m}: {}", oracle.graded_trace);
    }
    // Radius does not matter.
    let s2r = alg("S2:r=2.5");
    let ind = index(&s2r, &twisted_s2(2), 4.0 * PI * 6.25, 1e-10).unwrap();
    assert_eq!(ind.nearest_integer, index(&s2, &twisted_s2(2), 4.0 * PI, 1e-10).unwrap().nearest_integer);
}

#[test]
fn graded_trace_is_t_independent() {
    let s2 = alg("S2:r=1");
    let opts = QuadOptions::default();
    let ts = [0.2, 0.5, 1.0];
    for m in -2..=2 {
        let rep = twisted_s2(m);
        let rep_check = t_independence_check(&s2, &rep, 4.0 * PI, &ts, &opts, 1e-10).unwrap();
        let ind = index(&s2, &rep, 4.0 * PI, 1e-10).unwrap();
        assert!(rep_check.spread < 1e-6, "m={m}: {:?}", rep_check.graded_trace);
        assert!((rep_check.graded_trace[0] - ind.index).abs() < 1e-6, "m={m}");
    }
    let untwisted = t_independence_check(&s2, &Representation::spinor(2).unwrap(), 4.0 * PI, &ts, &opts, 1e-10).unwrap();
    assert!(untwisted.graded_trace.iter().all(|g| g.abs() < 1e-10));
    let flat = alg("flat:n=2");
    let f = t_independence_check(&flat, &Representation::spinor(2).unwrap(), 1.0, &ts, &opts, 1e-10).unwrap();
    assert!(f.graded_trace.iter().all(|g| g.abs() < 1e-15));
}

#[test]
fn index_needs_compact_even_dimension() {
    let h2 = alg("H2:a=1");
    assert!(matches!(index(&h2, &Representation::spinor(2).unwrap(), 1.0, 1e-10), Err(Error::NotCompact)));
    let s3 = alg("S3:r=1");
    assert!(index(&s3, &Representation::scalar(3), 1.0, 1e-10).is_err());
    let s2 = alg("S2:r=1");
    let err = index(&s2, &twisted_s2(1), 1.3, 1e-10).unwrap_err();
    assert!(matches!(err, Error::NotInteger { .. }));
}

use num_complex::Complex64;
use proptest::prelude::*;
use symkernel::curvature::{validate, CurvatureAlgebra, Factor, Space, Tolerances};
use symkernel::diagonal::{det_sinhc_sqrt, diagonal_h2, diagonal_s2, sinhc, QuadOptions};
use symkernel::gaussian::{gaussian_moment, heat_coefficients};
use symkernel::linalg::{to_complex, RMatrix};
use symkernel::representation::{Representation, Weight};

fn factor() -> impl Strategy<Value = Factor> {
    prop_oneof![
        (2usize..5, 0.3f64..3.0).prop_map(|(n, r)| Factor::Sphere { n, r }),
        (2usize..4, 0.3f64..3.0).prop_map(|(n, a)| Factor::Hyperbolic { n, a }),
        (1usize..3).prop_map(|n| Factor::Flat { n }),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn random_products_satisfy_all_identities(factors in prop::collection::vec(factor(), 1..3)) {
        let space = Space::new(factors).unwrap();
        prop_assume!(space.dim() <= 6);
        let alg = CurvatureAlgebra::from_riemann(&space.riemann().unwrap(), Tolerances::default()).unwrap();
        let report = validate(&alg, 1e-10);
        prop_assert!(report.pass, "{space}: {:?}", report.families);
        let hc = heat_coefficients(&alg, &Representation::vector(alg.n()), 1, 1e-10, "").unwrap();
        prop_assert!(hc.a1_residual(alg.scalar_curvature()).unwrap() < 1e-10 * alg.curvature_scale());
    }

    #[test]
    fn space_spec_round_trips(factors in prop::collection::vec(factor(), 1..4)) {
        let space = Space::new(factors).unwrap();
        let back: Space = space.to_string().parse().unwrap();
        prop_assert_eq!(back, space);
    }

    #[test]
    fn moments_are_permutation_invariant(
        b in (0.3f64..3.0, -0.4f64..0.4, 0.3f64..3.0),
        mut idx in prop::collection::vec(0u8..2, 0..7),
        seed in any::<u64>(),
    ) {
        let beta = RMatrix::from_row_slice(2, 2, &[b.0, b.1, b.1, b.2]);
        let m = gaussian_moment(&beta, &idx).unwrap();
        let k = idx.len();
        if k > 1 {
            idx.rotate_left((seed as usize) % k);
            idx.swap(0, (seed as usize / 7) % k);
        }
        let m2 = gaussian_moment(&beta, &idx).unwrap();
        prop_assert!((m - m2).abs() <= 1e-12 * m.abs().max(1.0));
    }

    #[test]
    fn weight_text_round_trips(num in -20i64..20, half in any::<bool>()) {
        let w = Weight::new(if half { 2 * num + 1 } else { num }, if half { 2 } else { 1 }).unwrap();
        let back: Weight = w.to_string().parse().unwrap();
        prop_assert_eq!(back, w);
    }

    #[test]
    fn rank_one_diagonals_are_positive(r in 0.5f64..3.0, t in 0.05f64..3.0, twice in -4i64..5) {
        let alpha = Weight::from_twice(twice);
        let opts = QuadOptions::default();
        let s = diagonal_s2(r, alpha, t, &opts).unwrap().trace();
        let h = diagonal_h2(r, alpha, t, &opts).unwrap().trace();
        prop_assert!(s.re > 0.0 && s.im.abs() < 1e-10 * s.re);
        prop_assert!(h.re > 0.0 && h.im.abs() < 1e-10 * h.re);
    }

    #[test]
    fn sinhc_determinant_of_block_rotation(mus in prop::collection::vec(-3.0f64..3.0, 1..4)) {
        let n = 2 * mus.len();
        let mut a = RMatrix::zeros(n, n);
        for (k, mu) in mus.iter().enumerate() {
            a[(2 * k, 2 * k + 1)] = *mu;
            a[(2 * k + 1, 2 * k)] = -mu;
        }
        let (det, _) = det_sinhc_sqrt(&to_complex(&a)).unwrap();
        let expect: Complex64 = mus.iter().map(|&m| sinhc(Complex64::new(0.0, m))).product();
        prop_assert!((det - expect).norm() < 1e-10);
    }
}

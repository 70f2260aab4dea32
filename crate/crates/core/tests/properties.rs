use jordan_wishart::algebra::{AlgebraKind, JordanAlgebra};
use jordan_wishart::cli::config::SigmaSpec;
use jordan_wishart::regression::{constants_from_shapes, diff_constants, recover_structure};
use jordan_wishart::stats::ThetaGridSpec;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn algebra_strategy() -> impl Strategy<Value = JordanAlgebra> {
    prop_oneof![
        (2usize..=4).prop_map(|r| JordanAlgebra::matrix(AlgebraKind::SymReal, r).unwrap()),
        (2usize..=3).prop_map(|r| JordanAlgebra::matrix(AlgebraKind::HermComplex, r).unwrap()),
        (2usize..=3).prop_map(|r| JordanAlgebra::matrix(AlgebraKind::HermQuaternion, r).unwrap()),
        (2usize..=6).prop_map(|m| JordanAlgebra::spin(m).unwrap()),
        Just(JordanAlgebra::albert()),
    ]
}

fn close(x: f64, y: f64, tol: f64) -> bool {
    (x - y).abs() <= tol * x.abs().max(y.abs()).max(1.0)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn jordan_axioms(alg in algebra_strategy(), seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let x = alg.random_element(&mut rng);
        let y = alg.random_element(&mut rng);
        let xy = alg.product(&x, &y).unwrap();
        prop_assert!(xy.max_abs_diff(&alg.product(&y, &x).unwrap()) < 1e-12);
        let x2 = alg.square(&x).unwrap();
        let lhs = alg.product(&alg.product(&x2, &y).unwrap(), &x).unwrap();
        let rhs = alg.product(&x2, &xy).unwrap();
        prop_assert!(lhs.max_abs_diff(&rhs) < 1e-10 * (1.0 + lhs.norm()));
        prop_assert!(alg.product(&alg.identity(), &x).unwrap().max_abs_diff(&x) < 1e-14);
    }

    #[test]
    fn determinant_of_quadratic_representation(alg in algebra_strategy(), seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let x = alg.random_element(&mut rng);
        let y = alg.random_element(&mut rng);
        let pxy = alg.pmap(&x).unwrap().apply(&y).unwrap();
        let dx = alg.determinant(&x).unwrap();
        let want = dx * dx * alg.determinant(&y).unwrap();
        prop_assert!(close(alg.determinant(&pxy).unwrap(), want, 1e-8), "{} vs {}", alg.determinant(&pxy).unwrap(), want);
    }

    #[test]
    fn constants_are_ordered(d in prop::sample::select(vec![1usize, 2, 4, 8]), u in 0.01f64..20.0, pp in 0.01f64..20.0) {
        let p = d as f64 / 2.0 + u;
        let c = constants_from_shapes(p, pp, d).unwrap();
        prop_assert!(c.ordering_holds());
        let dc = diff_constants(&c).unwrap();
        prop_assert!(close(dc.p1, 1.0 / p, 1e-9));
        prop_assert!(close(dc.p2, -(d as f64) / (2.0 * p), 1e-9));
    }

    #[test]
    fn recovery_round_trip(alg in algebra_strategy(), u in 0.1f64..5.0, v in 0.1f64..5.0) {
        let (r, d) = (alg.rank(), alg.peirce_d());
        let thr = (r - 1) as f64 * d as f64 / 2.0;
        let c = constants_from_shapes(thr + u, thr + v, d).unwrap();
        let rec = recover_structure(c.a, c.b1, c.b2, alg.dim()).unwrap();
        prop_assert_eq!((rec.d_int, rec.r_int), (d, r));
        prop_assert!(rec.kind_candidates.iter().any(|k| k.kind == alg.kind()));
    }

    #[test]
    fn sigma_spec_round_trip(values in prop::collection::vec(0.01f64..100.0, 1..5), seed in any::<u64>()) {
        for spec in [SigmaSpec::Identity, SigmaSpec::Diag(values.clone()), SigmaSpec::Random(seed)] {
            let parsed: SigmaSpec = spec.to_string().parse().unwrap();
            prop_assert_eq!(parsed, spec);
        }
    }

    #[test]
    fn theta_grid_spec_round_trip(scales in prop::collection::vec(0.001f64..10.0, 1..6)) {
        let spec = ThetaGridSpec::Scales(scales);
        let parsed: ThetaGridSpec = spec.to_string().parse().unwrap();
        prop_assert_eq!(parsed, spec);
    }
}

use super::*;
use crate::stats::{theta_grid, ThetaGridSpec};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn close(a: f64, b: f64) -> bool {
    (a - b).abs() <= 1e-14 * b.abs().max(1.0)
}

#[test]
fn constants_example() {
    let c = constants_from_shapes(1.0, 2.0, 1).unwrap();
    assert!(close(c.a, 1.0 / 3.0) && close(c.b1, 1.0 / 6.0) && close(c.b2, 1.0 / 15.0));
    assert!(c.ordering_holds());
    let c = constants_from_shapes(2.5, 2.5, 4).unwrap();
    assert!(close(c.a, 0.5));
    assert!(constants_from_shapes(0.0, 1.0, 1).is_err());
    assert!(constants_from_shapes(1.0, -1.0, 1).is_err());
    // p + p' = d/2
    assert!(constants_from_shapes(1.0, 1.0, 4).is_err());
    assert!(constants_from_shapes(2.0, 2.0, 8).is_err());
}

#[test]
fn recovery_examples() {
    let rec = recover_structure(1.0 / 3.0, 1.0 / 6.0, 1.0 / 15.0, 6).unwrap();
    assert_eq!((rec.d_int, rec.r_int), (1, 3));
    assert_eq!(rec.kind_candidates.len(), 1);
    assert_eq!(rec.kind_candidates[0].kind, AlgebraKind::SymReal);

    let c = constants_from_shapes(2.0, 3.0, 2).unwrap();
    let rec = recover_structure(c.a, c.b1, c.b2, 4).unwrap();
    assert_eq!((rec.d_int, rec.r_int), (2, 2));
    let kinds: Vec<_> = rec
        .kind_candidates
        .iter()
        .map(|k| (k.kind, k.spin_ambient_dim))
        .collect();
    assert_eq!(
        kinds,
        vec![
            (AlgebraKind::HermComplex, None),
            (AlgebraKind::SpinFactor, Some(3))
        ]
    );

    let c = constants_from_shapes(9.0, 10.0, 8).unwrap();
    let rec = recover_structure(c.a, c.b1, c.b2, 27).unwrap();
    assert_eq!(rec.kind_candidates[0].kind, AlgebraKind::Albert);

    // d = 3 only exists as a spin factor
    let c = constants_from_shapes(2.0, 2.0, 3).unwrap();
    let rec = recover_structure(c.a, c.b1, c.b2, 5).unwrap();
    assert_eq!(rec.kind_candidates.len(), 1);
    assert_eq!(rec.kind_candidates[0].spin_ambient_dim, Some(4));
    // ... and not at rank 3
    assert!(recover_structure(c.a, c.b1, c.b2, 12).is_err());
}

#[test]
fn recovery_rejects_inconsistent_constants() {
    let c = constants_from_shapes(1.0, 2.0, 1).unwrap();
    assert!(matches!(
        recover_structure(c.a, c.b1 * 1.1, c.b2, 6),
        Err(Error::InconsistentConstants(_))
    ));
    assert!(recover_structure(c.a, c.b2, c.b1, 6).is_err());
    assert!(recover_structure(c.a, c.b1, c.b2, 7).is_err());
    assert!(recover_structure(c.a, c.b1, c.b2, 2).is_err());
}

#[test]
fn differential_constants() {
    let c = constants_from_shapes(1.0, 2.0, 1).unwrap();
    let dc = diff_constants(&c).unwrap();
    assert!((dc.p1 - 1.0).abs() < 1e-12);
    assert!((dc.p2 + 0.5).abs() < 1e-12);
    for (p, pp, d) in [
        (1.0, 1.0, 1),
        (1.5, 1.0, 1),
        (2.0, 3.0, 2),
        (3.5, 0.7, 4),
        (9.0, 12.0, 8),
    ] {
        let c = constants_from_shapes(p, pp, d).unwrap();
        let q = diff_constants(&c).unwrap();
        let closed = diff_constants_closed_form(p, d);
        assert!((q.p1 - closed.p1).abs() < 1e-12, "{p} {pp} {d}");
        assert!((q.p2 - closed.p2).abs() < 1e-12, "{p} {pp} {d}");
        assert!(q.p2 < 0.0 && 0.0 < q.p1);
    }
}

#[test]
fn differential_identity_on_sym2() {
    let alg = JordanAlgebra::matrix(AlgebraKind::SymReal, 2).unwrap();
    let x = WishartParams::standard(&alg, 1.0).unwrap();
    let theta = alg.identity().scale(0.1);
    let report = verify_diff_identity(&x, 2.0, 1, &alg.identity(), &theta).unwrap();
    assert!(report.pass, "{report:?}");
    let mut rng = ChaCha8Rng::seed_from_u64(41);
    let s = alg.random_element(&mut rng);
    let report = verify_diff_identity(&x, 2.0, 2, &s, &theta).unwrap();
    assert!(report.pass, "{report:?}");
    let report = verify_diff_identity(&x, 2.0, 2, &s, &alg.zero()).unwrap();
    assert!(report.pass, "{report:?}");
}

#[test]
fn linear_identity_and_power() {
    let alg = JordanAlgebra::matrix(AlgebraKind::SymReal, 2).unwrap();
    let x = WishartParams::standard(&alg, 1.0).unwrap();
    let y = WishartParams::standard(&alg, 2.0).unwrap();
    let grid = theta_grid(&alg, &ThetaGridSpec::Default, 42);
    let constants = constants_from_shapes(1.0, 2.0, 1).unwrap();
    let samples = PairedSamples::draw(&x, &y, 50_000, 42).unwrap();
    let report = mc_verify_linear_with(&constants, &samples, &grid, None).unwrap();
    assert!(report.pass, "{report:?}");
    assert!((report.constant - 1.0 / 3.0).abs() < 1e-15);
    let wrong =
        mc_verify_linear_with(&constants, &samples, &grid, Some(constants.a + 0.05)).unwrap();
    assert!(!wrong.pass);

    let scalar = JordanAlgebra::matrix(AlgebraKind::SymReal, 1).unwrap();
    let x = WishartParams::standard(&scalar, 0.5).unwrap();
    let y = WishartParams::standard(&scalar, 1.5).unwrap();
    let grid = theta_grid(&scalar, &ThetaGridSpec::Default, 43);
    let report = mc_verify_linear(&x, &y, 50_000, 43, &grid).unwrap();
    assert!(report.pass, "{report:?}");
}

#[test]
fn quadratic_identities_small_sample() {
    let alg = JordanAlgebra::matrix(AlgebraKind::SymReal, 2).unwrap();
    let x = WishartParams::standard(&alg, 1.5).unwrap();
    let y = WishartParams::standard(&alg, 1.0).unwrap();
    let grid = theta_grid(&alg, &ThetaGridSpec::Scales(vec![0.1, 0.2]), 44);
    let constants = constants_from_shapes(1.5, 1.0, 1).unwrap();
    let samples = PairedSamples::draw(&x, &y, 50_000, 44).unwrap();
    let s_list = vec![alg.identity()];
    for i in [1, 2] {
        let report =
            mc_verify_quadratic_with(&alg, &constants, &samples, i, &s_list, &grid, None).unwrap();
        assert!(report.pass, "{report:?}");
    }
    let mut rng = ChaCha8Rng::seed_from_u64(45);
    let a = alg.random_element(&mut rng);
    let b = alg.random_element(&mut rng);
    let q = QuadraticForm::new(crate::endo::outer_sym(&a, &b).unwrap());
    let report = mc_verify_mixed(&alg, &constants, &samples, &q, &grid).unwrap();
    assert!(report.pass, "{report:?}");
}

#[test]
fn mismatched_scales_are_rejected() {
    let alg = JordanAlgebra::matrix(AlgebraKind::SymReal, 2).unwrap();
    let x = WishartParams::standard(&alg, 1.5).unwrap();
    let y = WishartParams::new(&alg, 1.0, alg.identity().scale(2.0)).unwrap();
    assert!(PairedSamples::draw(&x, &y, 10, 1).is_err());
    let quat = JordanAlgebra::matrix(AlgebraKind::HermQuaternion, 2).unwrap();
    let xq = WishartParams::standard(&quat, 3.0).unwrap();
    assert!(matches!(
        PairedSamples::draw(&xq, &xq, 10, 1),
        Err(Error::Unsupported(_))
    ));
}

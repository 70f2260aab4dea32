use std::ffi::CStr;
use std::ptr;

use jordan_wishart_ffi::*;

fn new_algebra(kind: JwKind, rank: usize, ambient: usize) -> *mut JwAlgebra {
    let mut alg = ptr::null_mut();
    assert_eq!(
        unsafe { jw_algebra_new(kind, rank, ambient, &mut alg) },
        JwStatus::Ok
    );
    assert!(!alg.is_null());
    alg
}

fn last_error() -> String {
    let p = jw_last_error_message();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

#[test]
fn algebra_lifecycle_and_info() {
    let alg = new_algebra(JwKind::Albert, 3, 0);
    let (mut kind, mut r, mut d, mut n) = (JwKind::SymReal, 0, 0, 0);
    assert_eq!(
        unsafe { jw_algebra_info(alg, &mut kind, &mut r, &mut d, &mut n) },
        JwStatus::Ok
    );
    assert_eq!((kind, r, d, n), (JwKind::Albert, 3, 8, 27));
    let (mut d1, mut d2) = (0, 0);
    assert_eq!(unsafe { jw_psi_dims(alg, &mut d1, &mut d2) }, JwStatus::Ok);
    assert_eq!((d1, d2), (351, 27));
    unsafe { jw_algebra_free(alg) };
    unsafe { jw_algebra_free(ptr::null_mut()) };
}

#[test]
fn invalid_algebra_reports_an_error() {
    let mut alg = ptr::null_mut();
    let status = unsafe { jw_algebra_new(JwKind::SpinFactor, 2, 1, &mut alg) };
    assert_eq!(status, JwStatus::InvalidAlgebra);
    assert!(alg.is_null());
    assert!(last_error().contains("dim E"));
    let status = unsafe { jw_algebra_new(JwKind::SymReal, 2, 0, ptr::null_mut()) };
    assert_eq!(status, JwStatus::NullPointer);
}

#[test]
fn arithmetic_on_sym2() {
    // coordinates (x11, x22, √2 x12) of the 2×2 symmetric matrix
    let alg = new_algebra(JwKind::SymReal, 2, 0);
    let mut e = [0.0; 3];
    assert_eq!(
        unsafe { jw_algebra_identity(alg, e.as_mut_ptr(), 3) },
        JwStatus::Ok
    );
    assert_eq!(e, [1.0, 1.0, 0.0]);
    let x = [2.0, 3.0, 2f64.sqrt()];
    let mut out = [0.0; 3];
    assert_eq!(
        unsafe { jw_product(alg, x.as_ptr(), e.as_ptr(), 3, out.as_mut_ptr(), 3) },
        JwStatus::Ok
    );
    assert!(out.iter().zip(&x).all(|(a, b)| (a - b).abs() < 1e-15));
    let (mut tr, mut det) = (0.0, 0.0);
    assert_eq!(
        unsafe { jw_trace(alg, x.as_ptr(), 3, &mut tr) },
        JwStatus::Ok
    );
    assert_eq!(
        unsafe { jw_determinant(alg, x.as_ptr(), 3, &mut det) },
        JwStatus::Ok
    );
    // [[2, 1], [1, 3]]
    assert!((tr - 5.0).abs() < 1e-14);
    assert!((det - 5.0).abs() < 1e-12);
    let status = unsafe { jw_product(alg, x.as_ptr(), e.as_ptr(), 3, out.as_mut_ptr(), 2) };
    assert_eq!(status, JwStatus::BufferTooSmall);
    let status = unsafe { jw_trace(alg, x.as_ptr(), 2, &mut tr) };
    assert_eq!(status, JwStatus::InvalidArgument);
    unsafe { jw_algebra_free(alg) };
}

#[test]
fn closed_forms_and_constants() {
    let (mut d1, mut d2) = (0, 0);
    assert_eq!(
        unsafe { jw_dims_closed_form(3, 1, &mut d1, &mut d2) },
        JwStatus::Ok
    );
    assert_eq!((d1, d2), (15, 6));
    let mut c = JwRegressionConstants {
        a: 0.0,
        b1: 0.0,
        b2: 0.0,
    };
    assert_eq!(
        unsafe { jw_regression_constants(1.0, 2.0, 1, &mut c) },
        JwStatus::Ok
    );
    assert!((c.a - 1.0 / 3.0).abs() < 1e-15);
    assert!((c.b1 - 1.0 / 6.0).abs() < 1e-15);
    assert!((c.b2 - 1.0 / 15.0).abs() < 1e-15);

    let mut rec = JwRecovered {
        d: 0,
        r: 0,
        candidate_count: 0,
        candidates: [JwKind::SymReal; 2],
        spin_ambient_dim: 0,
    };
    assert_eq!(
        unsafe { jw_recover_structure(c.a, c.b1, c.b2, 6, &mut rec) },
        JwStatus::Ok
    );
    assert_eq!((rec.d, rec.r, rec.candidate_count), (1, 3, 1));
    assert_eq!(rec.candidates[0], JwKind::SymReal);

    assert_eq!(
        unsafe { jw_regression_constants(2.0, 3.0, 2, &mut c) },
        JwStatus::Ok
    );
    assert_eq!(
        unsafe { jw_recover_structure(c.a, c.b1, c.b2, 4, &mut rec) },
        JwStatus::Ok
    );
    assert_eq!(rec.candidate_count, 2);
    assert_eq!(rec.candidates, [JwKind::HermComplex, JwKind::SpinFactor]);
    assert_eq!(rec.spin_ambient_dim, 3);

    let status = unsafe { jw_recover_structure(0.3, 0.5, 0.1, 6, &mut rec) };
    assert_eq!(status, JwStatus::InconsistentConstants);
}

#[test]
fn laplace_and_sampling() {
    let alg = new_algebra(JwKind::SymReal, 2, 0);
    let e = [1.0, 1.0, 0.0];
    let mut value = 0.0;
    assert_eq!(
        unsafe { jw_laplace(alg, 1.0, e.as_ptr(), e.as_ptr(), 3, &mut value) },
        JwStatus::Ok
    );
    assert!((value - 0.25).abs() < 1e-14);

    let count = 20_000;
    let mut buf = vec![0.0; count * 3];
    let status = unsafe {
        jw_wishart_sample(
            alg,
            1.0,
            e.as_ptr(),
            3,
            count,
            7,
            buf.as_mut_ptr(),
            buf.len(),
        )
    };
    assert_eq!(status, JwStatus::Ok);
    // the mean is p σ = e; per-coordinate variance is at most 2
    for (k, &want) in e.iter().enumerate().take(3) {
        let mean = buf.iter().skip(k).step_by(3).sum::<f64>() / count as f64;
        assert!(
            (mean - want).abs() < 4.0 * (2.0 / count as f64).sqrt(),
            "{k}: {mean}"
        );
    }
    let status =
        unsafe { jw_wishart_sample(alg, 1.0, e.as_ptr(), 3, count, 7, buf.as_mut_ptr(), 10) };
    assert_eq!(status, JwStatus::BufferTooSmall);
    unsafe { jw_algebra_free(alg) };

    let quat = new_algebra(JwKind::HermQuaternion, 2, 0);
    let mut eq = [0.0; 6];
    assert_eq!(
        unsafe { jw_algebra_identity(quat, eq.as_mut_ptr(), 6) },
        JwStatus::Ok
    );
    let status =
        unsafe { jw_wishart_sample(quat, 3.0, eq.as_ptr(), 6, 1, 7, buf.as_mut_ptr(), buf.len()) };
    assert_eq!(status, JwStatus::Unsupported);
    assert!(last_error().contains("sym, herm"));
    unsafe { jw_algebra_free(quat) };
}

#[test]
fn identity_report_as_json() {
    let alg = new_algebra(JwKind::HermComplex, 2, 0);
    let mut json = ptr::null_mut();
    let mut passed = false;
    assert_eq!(
        unsafe { jw_check_identities(alg, 3, &mut passed, &mut json) },
        JwStatus::Ok
    );
    assert!(passed);
    let text = unsafe { CStr::from_ptr(json) }.to_str().unwrap().to_owned();
    unsafe { jw_string_free(json) };
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(v["dim_F1"], 9);
    assert_eq!(v["trace_psi_closed"], 8.0);
    unsafe { jw_algebra_free(alg) };
}

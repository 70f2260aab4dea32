//! C ABI for `jordan-wishart`.
//!
//! Algebras are opaque `JwAlgebra` handles created by [`jw_algebra_new`] and
//! released with [`jw_algebra_free`]. Every fallible function returns a
//! [`JwStatus`]; on failure a message is available from
//! [`jw_last_error_message`] on the same thread. Elements are passed as
//! arrays of `dim` coordinates in the algebra's orthonormal basis.

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use jordan_wishart::identities::{run_identity_suite, SuiteOptions};
use jordan_wishart::psi::{build_psi, dims_closed_form};
use jordan_wishart::regression::{constants_from_shapes, recover_structure};
use jordan_wishart::wishart::{sample, WishartParams};
use jordan_wishart::{AlgebraKind, Element, Error, JordanAlgebra};

/// Result codes. `JW_STATUS_OK` is zero.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum JwStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    InvalidAlgebra = 3,
    Unsupported = 4,
    Domain = 5,
    StructuralFailure = 6,
    InconsistentConstants = 7,
    BufferTooSmall = 8,
    Panic = 9,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum JwKind {
    SymReal = 0,
    HermComplex = 1,
    HermQuaternion = 2,
    SpinFactor = 3,
    Albert = 4,
}

impl From<JwKind> for AlgebraKind {
    fn from(k: JwKind) -> Self {
        match k {
            JwKind::SymReal => AlgebraKind::SymReal,
            JwKind::HermComplex => AlgebraKind::HermComplex,
            JwKind::HermQuaternion => AlgebraKind::HermQuaternion,
            JwKind::SpinFactor => AlgebraKind::SpinFactor,
            JwKind::Albert => AlgebraKind::Albert,
        }
    }
}

impl From<AlgebraKind> for JwKind {
    fn from(k: AlgebraKind) -> Self {
        match k {
            AlgebraKind::SymReal => JwKind::SymReal,
            AlgebraKind::HermComplex => JwKind::HermComplex,
            AlgebraKind::HermQuaternion => JwKind::HermQuaternion,
            AlgebraKind::SpinFactor => JwKind::SpinFactor,
            AlgebraKind::Albert => JwKind::Albert,
        }
    }
}

/// Opaque algebra handle.
pub struct JwAlgebra {
    inner: JordanAlgebra,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JwRegressionConstants {
    pub a: f64,
    pub b1: f64,
    pub b2: f64,
}

/// Recovered structure. At most two candidates exist: a matrix kind and,
/// for rank 2, a spin factor with `dim E = d + 1`.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JwRecovered {
    pub d: usize,
    pub r: usize,
    pub candidate_count: usize,
    pub candidates: [JwKind; 2],
    /// `dim E` of the spin candidate, 0 if there is none.
    pub spin_ambient_dim: usize,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("no interior nul");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(err: &Error) -> JwStatus {
    match err {
        Error::InvalidAlgebra(_) => JwStatus::InvalidAlgebra,
        Error::Unsupported(_) => JwStatus::Unsupported,
        Error::Domain(_) => JwStatus::Domain,
        Error::StructuralFailure(_) | Error::Classification(_) => JwStatus::StructuralFailure,
        Error::InconsistentConstants(_) => JwStatus::InconsistentConstants,
        _ => JwStatus::InvalidArgument,
    }
}

struct Fail(JwStatus, String);

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail(status_of(&e), e.to_string())
    }
}

fn null(what: &str) -> Fail {
    Fail(JwStatus::NullPointer, format!("{what} is null"))
}

/// Runs `f`, converting errors and panics into a status code.
fn guard<F: FnOnce() -> Result<(), Fail>>(f: F) -> JwStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => JwStatus::Ok,
        Ok(Err(Fail(status, msg))) => {
            set_error(msg);
            status
        }
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".into());
            set_error(format!("internal panic: {msg}"));
            JwStatus::Panic
        }
    }
}

unsafe fn algebra_ref<'a>(alg: *const JwAlgebra) -> Result<&'a JordanAlgebra, Fail> {
    alg.as_ref()
        .map(|a| &a.inner)
        .ok_or_else(|| null("algebra"))
}

unsafe fn element(
    alg: &JordanAlgebra,
    coords: *const f64,
    len: usize,
    what: &str,
) -> Result<Element, Fail> {
    if coords.is_null() {
        return Err(null(what));
    }
    Ok(alg.element_from_slice(std::slice::from_raw_parts(coords, len))?)
}

unsafe fn write_out<T>(out: *mut T, value: T, what: &str) -> Result<(), Fail> {
    if out.is_null() {
        return Err(null(what));
    }
    out.write(value);
    Ok(())
}

unsafe fn write_coords(x: &Element, out: *mut f64, out_len: usize) -> Result<(), Fail> {
    if out.is_null() {
        return Err(null("output buffer"));
    }
    let src = x.as_slice();
    if out_len < src.len() {
        return Err(Fail(
            JwStatus::BufferTooSmall,
            format!("output needs {} values, buffer holds {out_len}", src.len()),
        ));
    }
    ptr::copy_nonoverlapping(src.as_ptr(), out, src.len());
    Ok(())
}

/// Message of the last failure on this thread, or null. The pointer stays
/// valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn jw_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Creates an algebra. `ambient` is `dim E` for the spin factor and ignored
/// otherwise; `rank` is ignored for the spin factor.
///
/// # Safety
/// `out` must be a valid pointer to writable storage for a handle.
#[no_mangle]
pub unsafe extern "C" fn jw_algebra_new(
    kind: JwKind,
    rank: usize,
    ambient: usize,
    out: *mut *mut JwAlgebra,
) -> JwStatus {
    guard(|| {
        let kind = AlgebraKind::from(kind);
        let inner = match kind {
            AlgebraKind::SpinFactor => JordanAlgebra::spin(ambient)?,
            _ => JordanAlgebra::matrix(kind, rank)?,
        };
        write_out(out, Box::into_raw(Box::new(JwAlgebra { inner })), "out")
    })
}

/// Releases a handle from [`jw_algebra_new`]; null is ignored.
///
/// # Safety
/// `alg` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn jw_algebra_free(alg: *mut JwAlgebra) {
    if !alg.is_null() {
        drop(Box::from_raw(alg));
    }
}

/// Writes kind, rank `r`, Peirce constant `d` and dimension `n`.
///
/// # Safety
/// `alg` must be a live handle; the out pointers must be writable.
#[no_mangle]
pub unsafe extern "C" fn jw_algebra_info(
    alg: *const JwAlgebra,
    kind: *mut JwKind,
    rank: *mut usize,
    peirce_d: *mut usize,
    dim: *mut usize,
) -> JwStatus {
    guard(|| {
        let a = algebra_ref(alg)?;
        write_out(kind, a.kind().into(), "kind")?;
        write_out(rank, a.rank(), "rank")?;
        write_out(peirce_d, a.peirce_d(), "peirce_d")?;
        write_out(dim, a.dim(), "dim")
    })
}

/// Coordinates of the unit element.
///
/// # Safety
/// `alg` must be a live handle and `out` must hold `out_len` doubles.
#[no_mangle]
pub unsafe extern "C" fn jw_algebra_identity(
    alg: *const JwAlgebra,
    out: *mut f64,
    out_len: usize,
) -> JwStatus {
    guard(|| {
        let a = algebra_ref(alg)?;
        write_coords(&a.identity(), out, out_len)
    })
}

/// Jordan product `x ∘ y`; all arrays hold `dim` doubles.
///
/// # Safety
/// `alg` must be a live handle; `x`, `y` must hold `len` doubles and `out`
/// `out_len` doubles.
#[no_mangle]
pub unsafe extern "C" fn jw_product(
    alg: *const JwAlgebra,
    x: *const f64,
    y: *const f64,
    len: usize,
    out: *mut f64,
    out_len: usize,
) -> JwStatus {
    guard(|| {
        let a = algebra_ref(alg)?;
        let x = element(a, x, len, "x")?;
        let y = element(a, y, len, "y")?;
        write_coords(&a.product(&x, &y)?, out, out_len)
    })
}

/// Jordan trace of `x`.
///
/// # Safety
/// `alg` must be a live handle, `x` must hold `len` doubles, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn jw_trace(
    alg: *const JwAlgebra,
    x: *const f64,
    len: usize,
    out: *mut f64,
) -> JwStatus {
    guard(|| {
        let a = algebra_ref(alg)?;
        let x = element(a, x, len, "x")?;
        write_out(out, a.trace(&x)?, "out")
    })
}

/// Jordan determinant of `x`.
///
/// # Safety
/// `alg` must be a live handle, `x` must hold `len` doubles, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn jw_determinant(
    alg: *const JwAlgebra,
    x: *const f64,
    len: usize,
    out: *mut f64,
) -> JwStatus {
    guard(|| {
        let a = algebra_ref(alg)?;
        let x = element(a, x, len, "x")?;
        write_out(out, a.determinant(&x)?, "out")
    })
}

/// Numeric dimensions of the `1` and `−d/2` eigenspaces of `Ψ`.
///
/// # Safety
/// `alg` must be a live handle; the out pointers must be writable.
#[no_mangle]
pub unsafe extern "C" fn jw_psi_dims(
    alg: *const JwAlgebra,
    dim1: *mut usize,
    dim2: *mut usize,
) -> JwStatus {
    guard(|| {
        let a = algebra_ref(alg)?;
        let split = build_psi(a)?.spectral_split()?;
        write_out(dim1, split.dim1, "dim1")?;
        write_out(dim2, split.dim2, "dim2")
    })
}

/// Closed-form eigenspace dimensions for rank `r` and Peirce constant `d`.
///
/// # Safety
/// The out pointers must be writable.
#[no_mangle]
pub unsafe extern "C" fn jw_dims_closed_form(
    r: usize,
    d: usize,
    dim1: *mut usize,
    dim2: *mut usize,
) -> JwStatus {
    guard(|| {
        let (c1, c2) = dims_closed_form(r, d)?;
        write_out(dim1, c1, "dim1")?;
        write_out(dim2, c2, "dim2")
    })
}

/// Laplace transform `det(e + P(σ^½)θ)^{−p}` of `γ_{p,σ}`.
///
/// # Safety
/// `alg` must be a live handle; `sigma` and `theta` must hold `len` doubles.
#[no_mangle]
pub unsafe extern "C" fn jw_laplace(
    alg: *const JwAlgebra,
    p: f64,
    sigma: *const f64,
    theta: *const f64,
    len: usize,
    out: *mut f64,
) -> JwStatus {
    guard(|| {
        let a = algebra_ref(alg)?;
        let sigma = element(a, sigma, len, "sigma")?;
        let theta = element(a, theta, len, "theta")?;
        let params = WishartParams::new(a, p, sigma)?;
        write_out(out, params.laplace(&theta)?, "out")
    })
}

/// Draws `count` samples of `γ_{p,σ}` into `out`, sample after sample,
/// `count · dim` doubles in total. Only sym and herm are supported.
///
/// # Safety
/// `alg` must be a live handle; `sigma` must hold `len` doubles and `out`
/// `out_len` doubles.
#[no_mangle]
pub unsafe extern "C" fn jw_wishart_sample(
    alg: *const JwAlgebra,
    p: f64,
    sigma: *const f64,
    len: usize,
    count: usize,
    seed: u64,
    out: *mut f64,
    out_len: usize,
) -> JwStatus {
    guard(|| {
        let a = algebra_ref(alg)?;
        if out.is_null() {
            return Err(null("output buffer"));
        }
        let needed = count
            .checked_mul(a.dim())
            .ok_or_else(|| Fail(JwStatus::InvalidArgument, "sample count overflows".into()))?;
        if out_len < needed {
            return Err(Fail(
                JwStatus::BufferTooSmall,
                format!("output needs {needed} values, buffer holds {out_len}"),
            ));
        }
        let sigma = element(a, sigma, len, "sigma")?;
        let params = WishartParams::new(a, p, sigma)?;
        let xs = sample(&params, count, seed)?;
        let dst = std::slice::from_raw_parts_mut(out, needed);
        for (chunk, x) in dst.chunks_exact_mut(a.dim()).zip(&xs) {
            chunk.copy_from_slice(x.as_slice());
        }
        Ok(())
    })
}

/// `a`, `b₁`, `b₂` for shapes `p`, `p'` and Peirce constant `d`.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn jw_regression_constants(
    p: f64,
    p_prime: f64,
    d: usize,
    out: *mut JwRegressionConstants,
) -> JwStatus {
    guard(|| {
        let c = constants_from_shapes(p, p_prime, d)?;
        write_out(
            out,
            JwRegressionConstants {
                a: c.a,
                b1: c.b1,
                b2: c.b2,
            },
            "out",
        )
    })
}

/// Recovers `(d, r)` and candidate kinds from `a`, `b₁`, `b₂` and `dim V = n`.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn jw_recover_structure(
    a: f64,
    b1: f64,
    b2: f64,
    n: usize,
    out: *mut JwRecovered,
) -> JwStatus {
    guard(|| {
        let rec = recover_structure(a, b1, b2, n)?;
        let mut candidates = [JwKind::SymReal; 2];
        let mut spin_ambient_dim = 0;
        for (slot, c) in candidates.iter_mut().zip(&rec.kind_candidates) {
            *slot = c.kind.into();
            spin_ambient_dim = spin_ambient_dim.max(c.spin_ambient_dim.unwrap_or(0));
        }
        write_out(
            out,
            JwRecovered {
                d: rec.d_int,
                r: rec.r_int,
                candidate_count: rec.kind_candidates.len().min(2),
                candidates,
                spin_ambient_dim,
            },
            "out",
        )
    })
}

/// Runs the identity suite and returns its JSON report in `*out_json`
/// (release with [`jw_string_free`]); `*passed` tells whether every check
/// passed.
///
/// # Safety
/// `alg` must be a live handle; the out pointers must be writable.
#[no_mangle]
pub unsafe extern "C" fn jw_check_identities(
    alg: *const JwAlgebra,
    seed: u64,
    passed: *mut bool,
    out_json: *mut *mut c_char,
) -> JwStatus {
    guard(|| {
        let a = algebra_ref(alg)?;
        if out_json.is_null() {
            return Err(null("out_json"));
        }
        let report = run_identity_suite(
            a,
            SuiteOptions {
                seed,
                ..SuiteOptions::default()
            },
        )?;
        let json = serde_json_string(&report)?;
        write_out(passed, report.pass, "passed")?;
        out_json.write(json.into_raw());
        Ok(())
    })
}

fn serde_json_string<T: serde::Serialize>(value: &T) -> Result<CString, Fail> {
    let text =
        serde_json::to_string(value).map_err(|e| Fail(JwStatus::InvalidArgument, e.to_string()))?;
    CString::new(text).map_err(|e| Fail(JwStatus::InvalidArgument, e.to_string()))
}

/// Releases a string returned by this library; null is ignored.
///
/// # Safety
/// `s` must be null or a string from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn jw_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

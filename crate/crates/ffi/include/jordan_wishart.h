#ifndef JORDAN_WISHART_H
#define JORDAN_WISHART_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>

// Result codes. `JW_STATUS_OK` is zero.
typedef enum JwStatus {
  JW_STATUS_OK = 0,
  JW_STATUS_NULL_POINTER = 1,
  JW_STATUS_INVALID_ARGUMENT = 2,
  JW_STATUS_INVALID_ALGEBRA = 3,
  JW_STATUS_UNSUPPORTED = 4,
  JW_STATUS_DOMAIN = 5,
  JW_STATUS_STRUCTURAL_FAILURE = 6,
  JW_STATUS_INCONSISTENT_CONSTANTS = 7,
  JW_STATUS_BUFFER_TOO_SMALL = 8,
  JW_STATUS_PANIC = 9,
} JwStatus;

typedef enum JwKind {
  JW_KIND_SYM_REAL = 0,
  JW_KIND_HERM_COMPLEX = 1,
  JW_KIND_HERM_QUATERNION = 2,
  JW_KIND_SPIN_FACTOR = 3,
  JW_KIND_ALBERT = 4,
} JwKind;

// Opaque algebra handle.
typedef struct JwAlgebra JwAlgebra;

typedef struct JwRegressionConstants {
  double a;
  double b1;
  double b2;
} JwRegressionConstants;

// Recovered structure. At most two candidates exist: a matrix kind and,
// for rank 2, a spin factor with `dim E = d + 1`.
typedef struct JwRecovered {
  size_t d;
  size_t r;
  size_t candidate_count;
  enum JwKind candidates[2];
  // `dim E` of the spin candidate, 0 if there is none.
  size_t spin_ambient_dim;
} JwRecovered;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message of the last failure on this thread, or null. The pointer stays
// valid until the next failing call on the same thread.
const char *jw_last_error_message(void);

// Creates an algebra. `ambient` is `dim E` for the spin factor and ignored
// otherwise; `rank` is ignored for the spin factor.
//
// # Safety
// `out` must be a valid pointer to writable storage for a handle.
enum JwStatus jw_algebra_new(enum JwKind kind, size_t rank, size_t ambient, struct JwAlgebra **out);

// Releases a handle from [`jw_algebra_new`]; null is ignored.
//
// # Safety
// `alg` must be null or a handle not yet freed.
void jw_algebra_free(struct JwAlgebra *alg);

// Writes kind, rank `r`, Peirce constant `d` and dimension `n`.
//
// # Safety
// `alg` must be a live handle; the out pointers must be writable.
enum JwStatus jw_algebra_info(const struct JwAlgebra *alg,
                              enum JwKind *kind,
                              size_t *rank,
                              size_t *peirce_d,
                              size_t *dim);

// Coordinates of the unit element.
//
// # Safety
// `alg` must be a live handle and `out` must hold `out_len` doubles.
enum JwStatus jw_algebra_identity(const struct JwAlgebra *alg, double *out, size_t out_len);

// Jordan product `x ∘ y`; all arrays hold `dim` doubles.
//
// # Safety
// `alg` must be a live handle; `x`, `y` must hold `len` doubles and `out`
// `out_len` doubles.
enum JwStatus jw_product(const struct JwAlgebra *alg,
                         const double *x,
                         const double *y,
                         size_t len,
                         double *out,
                         size_t out_len);

// Jordan trace of `x`.
//
// # Safety
// `alg` must be a live handle, `x` must hold `len` doubles, `out` writable.
enum JwStatus jw_trace(const struct JwAlgebra *alg, const double *x, size_t len, double *out);

// Jordan determinant of `x`.
//
// # Safety
// `alg` must be a live handle, `x` must hold `len` doubles, `out` writable.
enum JwStatus jw_determinant(const struct JwAlgebra *alg, const double *x, size_t len, double *out);

// Numeric dimensions of the `1` and `−d/2` eigenspaces of `Ψ`.
//
// # Safety
// `alg` must be a live handle; the out pointers must be writable.
enum JwStatus jw_psi_dims(const struct JwAlgebra *alg, size_t *dim1, size_t *dim2);

// Closed-form eigenspace dimensions for rank `r` and Peirce constant `d`.
//
// # Safety
// The out pointers must be writable.
enum JwStatus jw_dims_closed_form(size_t r, size_t d, size_t *dim1, size_t *dim2);

// Laplace transform `det(e + P(σ^½)θ)^{−p}` of `γ_{p,σ}`.
//
// # Safety
// `alg` must be a live handle; `sigma` and `theta` must hold `len` doubles.
enum JwStatus jw_laplace(const struct JwAlgebra *alg,
                         double p,
                         const double *sigma,
                         const double *theta,
                         size_t len,
                         double *out);

// Draws `count` samples of `γ_{p,σ}` into `out`, sample after sample,
// `count · dim` doubles in total. Only sym and herm are supported.
//
// # Safety
// `alg` must be a live handle; `sigma` must hold `len` doubles and `out`
// `out_len` doubles.
enum JwStatus jw_wishart_sample(const struct JwAlgebra *alg,
                                double p,
                                const double *sigma,
                                size_t len,
                                size_t count,
                                uint64_t seed,
                                double *out,
                                size_t out_len);

// `a`, `b₁`, `b₂` for shapes `p`, `p'` and Peirce constant `d`.
//
// # Safety
// `out` must be writable.
enum JwStatus jw_regression_constants(double p,
                                      double p_prime,
                                      size_t d,
                                      struct JwRegressionConstants *out);

// Recovers `(d, r)` and candidate kinds from `a`, `b₁`, `b₂` and `dim V = n`.
//
// # Safety
// `out` must be writable.
enum JwStatus jw_recover_structure(double a,
                                   double b1,
                                   double b2,
                                   size_t n,
                                   struct JwRecovered *out);

// Runs the identity suite and returns its JSON report in `*out_json`
// (release with [`jw_string_free`]); `*passed` tells whether every check
// passed.
//
// # Safety
// `alg` must be a live handle; the out pointers must be writable.
enum JwStatus jw_check_identities(const struct JwAlgebra *alg,
                                  uint64_t seed,
                                  bool *passed,
                                  char **out_json);

// Releases a string returned by this library; null is ignored.
//
// # Safety
// `s` must be null or a string from this library not yet freed.
void jw_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* JORDAN_WISHART_H */

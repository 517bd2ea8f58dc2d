#ifndef CURVLAB_H
#define CURVLAB_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result code of every fallible call.
 */
typedef enum CurvStatus {
  CURV_STATUS_OK = 0,
  CURV_STATUS_NULL_POINTER = 1,
  CURV_STATUS_INVALID_ARGUMENT = 2,
  CURV_STATUS_DIMENSION = 3,
  CURV_STATUS_NOT_SYMMETRIC = 4,
  CURV_STATUS_BIANCHI = 5,
  CURV_STATUS_PRECONDITION = 6,
  CURV_STATUS_NOT_PINCHED = 7,
  CURV_STATUS_CERTIFICATION_FAILED = 8,
  CURV_STATUS_PARSE = 9,
  CURV_STATUS_BUFFER_TOO_SMALL = 10,
  CURV_STATUS_PANIC = 11,
} CurvStatus;

/**
 * Terminal state of an integration.
 */
typedef enum CurvFlowStatus {
  CURV_FLOW_STATUS_HORIZON = 0,
  CURV_FLOW_STATUS_BLOW_UP = 1,
  CURV_FLOW_STATUS_ERROR = 2,
} CurvFlowStatus;

/**
 * A symmetric curvature operator.
 */
typedef struct CurvOperator CurvOperator;

/**
 * so(n) structure constants.
 */
typedef struct CurvStructure CurvStructure;

typedef struct CurvDecomposition {
  double scal;
  double lambda_bar;
  double norm_scalar;
  double norm_ricci;
  double norm_weyl;
  double anisotropy;
} CurvDecomposition;

typedef struct CurvConeMargin {
  double margin;
  double normalized;
  /**
   * 1 when inside at the requested tolerance, else 0.
   */
  int32_t inside;
} CurvConeMargin;

typedef struct CurvFamilyParams {
  double b;
  double a;
  double p;
} CurvFamilyParams;

typedef struct CurvCertificate {
  double b;
  double a;
  double p;
  double margin;
  double reverified_margin;
} CurvCertificate;

/**
 * Integrator settings; zero or negative fields fall back to the defaults.
 */
typedef struct CurvFlowConfig {
  double horizon;
  double rtol;
  double atol;
  double initial_step;
  double max_step;
  double blowup_norm;
  /**
   * Nonzero follows the flow on the unit sphere.
   */
  int32_t unit_norm;
} CurvFlowConfig;

typedef struct CurvFlowResult {
  enum CurvFlowStatus status;
  double final_time;
  /**
   * Estimated blow-up time, or NaN when the run did not blow up.
   */
  double blowup_time;
  uint64_t accepted_steps;
  uint64_t rejected_steps;
} CurvFlowResult;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread, or NULL. The pointer
 * stays valid until the next failing call on the same thread.
 */
const char *curv_last_error_message(void);

/**
 * Basis length `N = n(n-1)/2`.
 */
size_t curv_basis_len(size_t n);

/**
 * # Safety
 * `out` must be a valid pointer to writable storage for one handle.
 */
enum CurvStatus curv_structure_new(size_t n, struct CurvStructure **out);

/**
 * # Safety
 * `s` must be NULL or a handle from [`curv_structure_new`] not yet freed.
 */
void curv_structure_free(struct CurvStructure *s);

/**
 * Number of nonzero structure constants `c_abg` (ordered triples).
 *
 * # Safety
 * `s` must be a live structure handle and `out` writable.
 */
enum CurvStatus curv_structure_nnz(const struct CurvStructure *s, size_t *out);

/**
 * Operator from `len = N * N` row-major coefficients; symmetry is checked.
 *
 * # Safety
 * `coeffs` must point to `len` readable doubles and `out` be writable.
 */
enum CurvStatus curv_operator_new(size_t n,
                                  const double *coeffs,
                                  size_t len,
                                  struct CurvOperator **out);

/**
 * # Safety
 * `out` must be writable.
 */
enum CurvStatus curv_operator_identity(size_t n, struct CurvOperator **out);

/**
 * # Safety
 * `r` must be NULL or an operator handle not yet freed.
 */
void curv_operator_free(struct CurvOperator *r);

/**
 * # Safety
 * `r` must be a live operator handle and `out` writable.
 */
enum CurvStatus curv_operator_dim(const struct CurvOperator *r, size_t *out);

/**
 * Copies the `N * N` coefficients row-major into `out` (capacity `len`).
 *
 * # Safety
 * `r` must be a live operator handle; `out` must hold `len` doubles.
 */
enum CurvStatus curv_operator_coeffs(const struct CurvOperator *r, double *out, size_t len);

/**
 * # Safety
 * `json` must be a NUL-terminated string and `out` writable.
 */
enum CurvStatus curv_operator_from_json(const char *json, struct CurvOperator **out);

/**
 * Newly allocated JSON text; release it with [`curv_string_free`].
 *
 * # Safety
 * `r` must be a live operator handle and `out` writable.
 */
enum CurvStatus curv_operator_to_json(const struct CurvOperator *r, char **out);

/**
 * # Safety
 * `s` must be NULL or a string returned by this library, not yet freed.
 */
void curv_string_free(char *s);

/**
 * `A # B`.
 *
 * # Safety
 * All handles must be live and `out` writable.
 */
enum CurvStatus curv_sharp(const struct CurvStructure *s,
                           const struct CurvOperator *a,
                           const struct CurvOperator *b,
                           struct CurvOperator **out);

/**
 * The reaction term `2(R^2 + R^#)`.
 *
 * # Safety
 * All handles must be live and `out` writable.
 */
enum CurvStatus curv_q_vector_field(const struct CurvStructure *s,
                                    const struct CurvOperator *r,
                                    struct CurvOperator **out);

/**
 * Ascending eigenvalues into `out` (capacity `len >= N`).
 *
 * # Safety
 * `r` must be a live operator handle; `out` must hold `len` doubles.
 */
enum CurvStatus curv_spectrum(const struct CurvOperator *r, double *out, size_t len);

/**
 * # Safety
 * `r` must be a live operator handle and `out` writable.
 */
enum CurvStatus curv_decompose(const struct CurvOperator *r, struct CurvDecomposition *out);

/**
 * # Safety
 * `r` must be a live operator handle and `out` writable.
 */
enum CurvStatus curv_bianchi_defect(const struct CurvOperator *r, double *out);

/**
 * # Safety
 * `r` must be a live operator handle and `out` writable.
 */
enum CurvStatus curv_project_bianchi(const struct CurvOperator *r, struct CurvOperator **out);

/**
 * `|R + R # I - Ric ^ id|` for a Bianchi operator.
 *
 * # Safety
 * All handles must be live and `out` writable.
 */
enum CurvStatus curv_ric_wedge_residual(const struct CurvStructure *s,
                                        const struct CurvOperator *r,
                                        double *out);

/**
 * Membership in the cone named by `spec` (`"psd"`, `"2nn"`, `"cb:0.25"`,
 * `"labcb:0.25"`, `"pinch:0.3"`, `"chenzhu:0.1:tensor"`).
 *
 * # Safety
 * `r` must be a live operator handle, `spec` NUL-terminated, `out` writable.
 */
enum CurvStatus curv_cone_margin(const struct CurvOperator *r,
                                 const char *spec,
                                 double tol,
                                 struct CurvConeMargin *out);

/**
 * # Safety
 * `r` must be a live operator handle and `out` writable.
 */
enum CurvStatus curv_delta_max(const struct CurvOperator *r, double *out);

/**
 * # Safety
 * `out` must be writable.
 */
enum CurvStatus curv_family_params(size_t n, double b, struct CurvFamilyParams *out);

/**
 * # Safety
 * `r` must be a live operator handle and `out` writable.
 */
enum CurvStatus curv_l_transform(const struct CurvOperator *r,
                                 double a,
                                 double b,
                                 struct CurvOperator **out);

/**
 * # Safety
 * `r` must be a live operator handle and `out` writable.
 */
enum CurvStatus curv_l_inverse(const struct CurvOperator *r,
                               double a,
                               double b,
                               struct CurvOperator **out);

/**
 * Largest `b` on the default grid with `l_ab^-1(R)` in `C(b)`.
 *
 * # Safety
 * `r` must be a live operator handle and `out` writable.
 */
enum CurvStatus curv_certify(const struct CurvOperator *r, double tol, struct CurvCertificate *out);

/**
 * Integrates `dR/dt = 2(R^2 + R^#)` from `r0`. `cfg` may be NULL for the
 * defaults. The final state is returned through `final_state` when it is
 * not NULL.
 *
 * # Safety
 * Handles must be live; `cfg` NULL or readable; `out` writable;
 * `final_state` NULL or writable.
 */
enum CurvStatus curv_integrate(const struct CurvStructure *s,
                               const struct CurvOperator *r0,
                               const struct CurvFlowConfig *cfg,
                               struct CurvFlowResult *out,
                               struct CurvOperator **final_state);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* CURVLAB_H */

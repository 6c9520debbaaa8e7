#ifndef CSBP_H
#define CSBP_H

/* Generated by cbindgen from csbp-ffi; do not edit by hand. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status codes returned by every fallible entry point.
 */
typedef enum {
  CSBP_STATUS_OK = 0,
  CSBP_STATUS_NULL_POINTER = 1,
  CSBP_STATUS_INVALID_ARGUMENT = 2,
  /**
   * Input outside the mathematical domain (post-breaking time, blow-up).
   */
  CSBP_STATUS_DOMAIN = 3,
  CSBP_STATUS_DIVERGED = 4,
  CSBP_STATUS_ITERATION_LIMIT = 5,
  CSBP_STATUS_IO = 6,
  CSBP_STATUS_INVALID_UTF8 = 7,
  CSBP_STATUS_PANIC = 8,
} CsbpStatus;

/**
 * Riccati coefficient regimes (mirror of the library enum).
 */
typedef enum {
  CSBP_RICCATI_CASE_LINEAR_CONSTANT = 0,
  CSBP_RICCATI_CASE_LINEAR_EXPONENTIAL = 1,
  CSBP_RICCATI_CASE_TRIVIAL = 2,
  CSBP_RICCATI_CASE_TANGENT_PURE = 3,
  CSBP_RICCATI_CASE_REAL_ROOTS = 4,
  CSBP_RICCATI_CASE_DOUBLE_ROOT = 5,
  CSBP_RICCATI_CASE_COMPLEX_ROOTS = 6,
} CsbpRiccatiCase;

/**
 * Opaque handle to an assembled global periodic C-SBP operator.
 */
typedef struct CsbpOperator CsbpOperator;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Library version as a static nul-terminated string.
 */
const char *csbp_version(void);

/**
 * Copy the last error message on this thread into `buf` (truncated to
 * `capacity` bytes including the nul terminator). Returns the full message
 * length in bytes, excluding the terminator.
 *
 * # Safety
 * `buf` must point to `capacity` writable bytes, or be null (query mode).
 */
size_t csbp_last_error_message(char *buf, size_t capacity);

/**
 * Classify the coefficient regime of `y' = a y^2 + b y + c, y(0) = 0`.
 *
 * # Safety
 * `out_case` must be a valid pointer.
 */
CsbpStatus csbp_riccati_classify(double a, double b, double c, CsbpRiccatiCase *out_case);

/**
 * Closed-form envelope value `y(t)` for `0 <= t < t*`.
 *
 * # Safety
 * `out_y` must be a valid pointer.
 */
CsbpStatus csbp_riccati_evaluate(double a, double b, double c, double t, double *out_y);

/**
 * Blow-up time of the maximal solution. When the solution exists globally,
 * `*out_finite` is set to false and `*out_t_star` to +inf.
 *
 * # Safety
 * `out_t_star` and `out_finite` must be valid pointers.
 */
CsbpStatus csbp_riccati_blow_up_time(double a,
                                     double b,
                                     double c,
                                     double *out_t_star,
                                     bool *out_finite);

/**
 * Build a degree-`p` operator on `n_e` periodic elements over
 * `[x_left, x_right]`.
 *
 * # Safety
 * `out_handle` must be a valid pointer; the returned handle must be released
 * with `csbp_operator_free`.
 */
CsbpStatus csbp_operator_new(size_t p,
                             size_t n_e,
                             double x_left,
                             double x_right,
                             CsbpOperator **out_handle);

/**
 * Release an operator handle; null is ignored.
 *
 * # Safety
 * `handle` must have been returned by `csbp_operator_new` and not yet freed.
 */
void csbp_operator_free(CsbpOperator *handle);

/**
 * Number of distinct global nodes.
 *
 * # Safety
 * `handle` must be a live operator handle; `out` must be valid.
 */
CsbpStatus csbp_operator_node_count(const CsbpOperator *handle, size_t *out);

/**
 * Max-abs entry of `Q + Q^T` after periodic assembly.
 *
 * # Safety
 * `handle` must be a live operator handle; `out` must be valid.
 */
CsbpStatus csbp_operator_skew_residual(const CsbpOperator *handle, double *out);

/**
 * Sum of the assembled norm diagonal (equals the domain length).
 *
 * # Safety
 * `handle` must be a live operator handle; `out` must be valid.
 */
CsbpStatus csbp_operator_h_sum(const CsbpOperator *handle, double *out);

/**
 * Spectral norm of the element `Q` matrix.
 *
 * # Safety
 * `handle` must be a live operator handle; `out` must be valid.
 */
CsbpStatus csbp_operator_q_norm(const CsbpOperator *handle, double *out);

/**
 * Run a convergence study from a JSON `StudyConfig` and return the summary
 * JSON through `out_json` (free with `csbp_string_free`).
 *
 * # Safety
 * `config_json` must be a nul-terminated string; `out_json` must be valid.
 */
CsbpStatus csbp_run_convergence_study_json(const char *config_json, char **out_json);

/**
 * Run a scaling study from a JSON `StudyConfig` and return the summary JSON
 * through `out_json` (free with `csbp_string_free`).
 *
 * # Safety
 * `config_json` must be a nul-terminated string; `out_json` must be valid.
 */
CsbpStatus csbp_run_scaling_study_json(const char *config_json, char **out_json);

/**
 * Free a string returned by this library; null is ignored.
 *
 * # Safety
 * `s` must have been returned by a `*_json` function and not yet freed.
 */
void csbp_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* CSBP_H */

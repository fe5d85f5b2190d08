#ifndef HSCA_H
#define HSCA_H

/* Generated by cbindgen from src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Which fundamental solution to build.
 */
typedef enum HscaFundamentalKind {
  /**
   * Annihilated by the Rarita-Schwinger operator.
   */
  HSCA_FUNDAMENTAL_KIND_E = 0,
  /**
   * Annihilated by the dual operator on the `u M_{k-1}` summand.
   */
  HSCA_FUNDAMENTAL_KIND_F = 1,
  /**
   * Annihilated by the bosonic Laplacian.
   */
  HSCA_FUNDAMENTAL_KIND_H = 2,
} HscaFundamentalKind;

/**
 * Result code of every fallible call.
 */
typedef enum HscaStatus {
  HSCA_STATUS_OK = 0,
  HSCA_STATUS_NULL_POINTER = 1,
  HSCA_STATUS_INVALID_UTF8 = 2,
  HSCA_STATUS_INVALID_ARGUMENT = 3,
  HSCA_STATUS_PARSE = 4,
  HSCA_STATUS_UNKNOWN_SUITE = 5,
  HSCA_STATUS_UNSUPPORTED = 6,
  HSCA_STATUS_SINGULAR = 7,
  HSCA_STATUS_IO = 8,
  HSCA_STATUS_PANIC = 9,
} HscaStatus;

/**
 * Verification settings.
 */
typedef struct HscaConfig HscaConfig;

/**
 * A closed-form fundamental solution for fixed `(m, k)`.
 */
typedef struct HscaFundamental HscaFundamental;

/**
 * A rational Clifford-valued polynomial in `x` and `u`.
 */
typedef struct HscaPoly HscaPoly;

/**
 * A finished verification report.
 */
typedef struct HscaReport HscaReport;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread, or null. The pointer stays
 * valid until the next failing call on the same thread.
 */
const char *hsca_last_error(void);

/**
 * Library version as a static NUL-terminated string.
 */
const char *hsca_version(void);

/**
 * # Safety
 * `s` must be null or a string returned by this library and not yet freed.
 */
void hsca_string_free(char *s);

/**
 * Default settings: all suites, `m = 3,4,5`, `k = 1,2`, seed 42.
 *
 * # Safety
 * `out` must be a valid pointer to writable storage for a handle.
 */
enum HscaStatus hsca_config_new(struct HscaConfig **out);

/**
 * # Safety
 * `cfg` must be null or a handle from [`hsca_config_new`] not yet freed.
 */
void hsca_config_free(struct HscaConfig *cfg);

/**
 * Selects suites from a comma-separated list of names or `all`.
 *
 * # Safety
 * `cfg` must be a live config handle and `suites` a NUL-terminated string.
 */
enum HscaStatus hsca_config_set_suites(struct HscaConfig *cfg, const char *suites);

/**
 * # Safety
 * `cfg` must be a live config handle; `ms` must point to `len` values.
 */
enum HscaStatus hsca_config_set_m(struct HscaConfig *cfg, const size_t *ms, size_t len);

/**
 * # Safety
 * `cfg` must be a live config handle; `ks` must point to `len` values.
 */
enum HscaStatus hsca_config_set_k(struct HscaConfig *cfg, const size_t *ks, size_t len);

/**
 * Sets the sample count, largest `x`-degree, seed, float tolerance and
 * worker count (`0` = all cores) in one call.
 *
 * # Safety
 * `cfg` must be a live config handle.
 */
enum HscaStatus hsca_config_set_params(struct HscaConfig *cfg,
                                       size_t samples,
                                       size_t xdeg,
                                       uint64_t seed,
                                       double tol,
                                       size_t workers);

/**
 * Runs the configured suites.
 *
 * # Safety
 * `cfg` must be a live config handle and `out` valid for writes.
 */
enum HscaStatus hsca_run(const struct HscaConfig *cfg, struct HscaReport **out);

/**
 * # Safety
 * `report` must be null or a handle from [`hsca_run`] not yet freed.
 */
void hsca_report_free(struct HscaReport *report);

/**
 * Entry counts by status. Any output pointer may be null.
 *
 * # Safety
 * `report` must be a live report handle.
 */
enum HscaStatus hsca_report_counts(const struct HscaReport *report,
                                   size_t *pass,
                                   size_t *fail,
                                   size_t *skip);

/**
 * `0` when no entry failed, `1` otherwise; `-1` for a null handle.
 *
 * # Safety
 * `report` must be null or a live report handle.
 */
int32_t hsca_report_exit_code(const struct HscaReport *report);

/**
 * The report as pretty JSON; `canonical` zeroes all timings.
 *
 * # Safety
 * `report` must be a live report handle and `out` valid for writes.
 */
enum HscaStatus hsca_report_to_json(const struct HscaReport *report, bool canonical, char **out);

/**
 * Parses a polynomial from its JSON document.
 *
 * # Safety
 * `json` must be a NUL-terminated string and `out` valid for writes.
 */
enum HscaStatus hsca_poly_from_json(const char *json, struct HscaPoly **out);

/**
 * # Safety
 * `poly` must be a live polynomial handle and `out` valid for writes.
 */
enum HscaStatus hsca_poly_to_json(const struct HscaPoly *poly, char **out);

/**
 * # Safety
 * `poly` must be null or a live polynomial handle.
 */
void hsca_poly_free(struct HscaPoly *poly);

/**
 * Splits a `u`-harmonic field of degree `k` into its monogenic part and the
 * `u M_{k-1}` part.
 *
 * # Safety
 * `poly` must be a live polynomial handle; `plus` and `minus` valid for writes.
 */
enum HscaStatus hsca_poly_almansi_split(const struct HscaPoly *poly,
                                        size_t k,
                                        struct HscaPoly **plus,
                                        struct HscaPoly **minus);

/**
 * Applies the bosonic Laplacian of degree `k` in its direct second-order form.
 *
 * # Safety
 * `poly` must be a live polynomial handle and `out` valid for writes.
 */
enum HscaStatus hsca_poly_bosonic_laplacian(const struct HscaPoly *poly,
                                            size_t k,
                                            struct HscaPoly **out);

/**
 * # Safety
 * `out` must be valid for writes.
 */
enum HscaStatus hsca_fundamental_new(enum HscaFundamentalKind kind,
                                     size_t m,
                                     size_t k,
                                     struct HscaFundamental **out);

/**
 * # Safety
 * `sol` must be null or a live fundamental-solution handle.
 */
void hsca_fundamental_free(struct HscaFundamental *sol);

/**
 * Relative residual of the matching operator applied to the solution at
 * `x` (with `0.5 <= |x| <= 2`) for second variable `v`; both have `len = m`
 * entries.
 *
 * # Safety
 * `sol` must be a live handle, `x` and `v` point to `len` values, `out` valid.
 */
enum HscaStatus hsca_fundamental_residual(const struct HscaFundamental *sol,
                                          const double *x,
                                          const double *v,
                                          size_t len,
                                          double *out);

/**
 * The solution at `(x, v)` as a JSON document of a float polynomial in `u`.
 *
 * # Safety
 * `sol` must be a live handle, `x` and `v` point to `len` values, `out` valid.
 */
enum HscaStatus hsca_fundamental_eval_json(const struct HscaFundamental *sol,
                                           const double *x,
                                           const double *v,
                                           size_t len,
                                           char **out);

#ifdef __cplusplus
} // extern "C"
#endif // __cplusplus

#endif /* HSCA_H */

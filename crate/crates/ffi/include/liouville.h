#ifndef LIOUVILLE_H
#define LIOUVILLE_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result codes. The first three match the command-line exit codes.
 */
typedef enum LvStatus {
  LV_STATUS_OK = 0,
  /**
   * A zero test on the decision path was undecided.
   */
  LV_STATUS_INCONCLUSIVE = 1,
  LV_STATUS_INPUT_ERROR = 2,
  LV_STATUS_NULL_POINTER = 3,
  LV_STATUS_INTERNAL = 4,
} LvStatus;

/**
 * A metric description: entries, parameters, sampling box and policy.
 */
typedef struct LvMetric LvMetric;

/**
 * Result of a classification.
 */
typedef struct LvReport LvReport;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Library version, a static string.
 */
const char *lv_version(void);

/**
 * Message for the last failure on this thread. Valid until the next call
 * that fails on the same thread.
 */
const char *lv_last_error(void);

/**
 * Metric `g11 dx^2 + 2 g12 dx dy + g22 dy^2` in coordinates `x, y`.
 * `g12` may be NULL for a diagonal metric. Entries are parsed when the
 * metric is used, so parameters may be declared afterwards.
 *
 * # Safety
 * String arguments must be NULL or NUL-terminated; `out` must be writable.
 */
enum LvStatus lv_metric_new(const char *g11,
                            const char *g12,
                            const char *g22,
                            struct LvMetric **out);

/**
 * Metric from the text of a config file.
 *
 * # Safety
 * `config` must be NUL-terminated; `out` must be writable.
 */
enum LvStatus lv_metric_from_config(const char *config, struct LvMetric **out);

/**
 * Declares or overwrites a parameter with a rational value such as `"3/2"`.
 *
 * # Safety
 * `m` must come from `lv_metric_new` or `lv_metric_from_config`.
 */
enum LvStatus lv_metric_set_param(struct LvMetric *m, const char *name, const char *value);

/**
 * Sampling box `[x0, x1] x [y0, y1]` with rational bounds.
 *
 * # Safety
 * `m` must be a live handle; strings must be NUL-terminated.
 */
enum LvStatus lv_metric_set_box(struct LvMetric *m,
                                const char *x0,
                                const char *x1,
                                const char *y0,
                                const char *y1);

/**
 * Orientation `+1` or `-1`.
 *
 * # Safety
 * `m` must be a live handle.
 */
enum LvStatus lv_metric_set_orientation(struct LvMetric *m, int orientation);

/**
 * Seed of the sample-point generator.
 *
 * # Safety
 * `m` must be a live handle.
 */
enum LvStatus lv_metric_set_seed(struct LvMetric *m, uint64_t seed);

/**
 * # Safety
 * `m` must be NULL or a handle not yet freed.
 */
void lv_metric_free(struct LvMetric *m);

/**
 * Classifies the metric. On `LV_STATUS_INCONCLUSIVE` the report is still
 * written and its dimensions read as -1.
 *
 * # Safety
 * `m` must be a live handle; `out` must be writable.
 */
enum LvStatus lv_classify(const struct LvMetric *m, struct LvReport **out);

/**
 * Number of Killing fields (0, 1 or 3).
 *
 * # Safety
 * `m` must be a live handle; `out` must be writable.
 */
enum LvStatus lv_killing_dimension(const struct LvMetric *m, int *out);

/**
 * Number of linear integrals, or -1 if inconclusive or `r` is NULL.
 *
 * # Safety
 * `r` must be NULL or a live report.
 */
int lv_report_dim_j1(const struct LvReport *r);

/**
 * Number of quadratic integrals, or -1 if inconclusive or `r` is NULL.
 *
 * # Safety
 * `r` must be NULL or a live report.
 */
int lv_report_dim_j2(const struct LvReport *r);

/**
 * Text report, owned by `r`.
 *
 * # Safety
 * `r` must be NULL or a live report.
 */
const char *lv_report_text(const struct LvReport *r);

/**
 * JSON form of the report, owned by `r`.
 *
 * # Safety
 * `r` must be NULL or a live report.
 */
const char *lv_report_json(const struct LvReport *r);

/**
 * # Safety
 * `r` must be NULL or a report not yet freed.
 */
void lv_report_free(struct LvReport *r);

/**
 * Value of an invariant (`I2` .. `I7f`, `J4`, `J5`) at the rational point
 * `(x, y)`, written as text to `*out`.
 *
 * # Safety
 * `m` must be a live handle; strings must be NUL-terminated; `out` must be
 * writable.
 */
enum LvStatus lv_invariant_at(const struct LvMetric *m,
                              const char *name,
                              const char *x,
                              const char *y,
                              char **out);

/**
 * Oracle lower bound on the number of degree-`degree` integrals over the
 * monomials `x^a y^b`, `a` in `[x0, x1]`, `b` in `[y0, y1]`.
 *
 * # Safety
 * `m` must be a live handle; `out` must be writable.
 */
enum LvStatus lv_oracle_dimension(const struct LvMetric *m,
                                  int degree,
                                  int x0,
                                  int x1,
                                  int y0,
                                  int y1,
                                  int *out);

/**
 * Frees a string returned through an out-parameter.
 *
 * # Safety
 * `s` must be NULL or a string from this library not yet freed.
 */
void lv_string_free(char *s);

#ifdef __cplusplus
} // extern "C"
#endif // __cplusplus

#endif /* LIOUVILLE_H */

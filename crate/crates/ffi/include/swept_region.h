/* C interface to the swept-region compiler. */

#ifndef SWEPT_REGION_H
#define SWEPT_REGION_H

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum SrStatus {
  SR_OK = 0,
  SR_INVALID_ARGUMENT = 1,
  SR_PARSE_ERROR = 2,
  SR_COMPILE_ERROR = 3,
  SR_EVAL_ERROR = 4,
} SrStatus;

/**
 * Opaque compiled region handle.
 */
typedef struct SrRegion SrRegion;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the most recent failure on this thread. Borrowed pointer,
 * valid until the next failing call on the same thread; do not free.
 */
const char *sr_last_error_message(void);

/**
 * Compile a job description (same JSON accepted by the CLI) into a
 * region handle.
 *
 * # Safety
 * `job_json` must be a NUL-terminated string; `out` must be valid.
 */
enum SrStatus sr_region_compile_job(const char *job_json, struct SrRegion **out);

/**
 * Load a previously serialized formula (the `.region.json` artifact).
 *
 * # Safety
 * `formula_json` must be a NUL-terminated string; `out` must be valid.
 */
enum SrStatus sr_region_from_json(const char *formula_json, struct SrRegion **out);

/**
 * Evaluate the predicate at an obstacle location. Writes 1 (unsafe,
 * collision) or 0 (safe) to `verdict`.
 *
 * # Safety
 * `region` must come from a constructor; `verdict` must be valid.
 */
enum SrStatus sr_region_eval(const struct SrRegion *region, double x, double y, int *verdict);

/**
 * Serialize the formula as JSON.
 *
 * # Safety
 * `region` must come from a constructor; `out` must be valid.
 */
enum SrStatus sr_region_to_json(const struct SrRegion *region, char **out);

/**
 * Render the formula as LaTeX.
 *
 * # Safety
 * `region` must come from a constructor; `out` must be valid.
 */
enum SrStatus sr_region_to_latex(const struct SrRegion *region, char **out);

/**
 * Render the formula as computer-algebra plotting input over the given
 * window.
 *
 * # Safety
 * `region` must come from a constructor; `out` must be valid.
 */
enum SrStatus sr_region_to_cas(const struct SrRegion *region,
                               double x0,
                               double x1,
                               double y0,
                               double y1,
                               char **out);

/**
 * Release a region handle. Null is a no-op.
 *
 * # Safety
 * `region` must come from a constructor and not be freed twice.
 */
void sr_region_free(struct SrRegion *region);

/**
 * Release a string returned through an out-param. Null is a no-op.
 *
 * # Safety
 * `s` must come from this library and not be freed twice.
 */
void sr_string_free(char *s);

#ifdef __cplusplus
} // extern "C"
#endif // __cplusplus

#endif /* SWEPT_REGION_H */

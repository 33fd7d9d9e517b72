#ifndef NODAL_LLS_H
#define NODAL_LLS_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum NllsMethod {
  NLLS_METHOD_KERNEL = 0,
  NLLS_METHOD_EH = 1,
  NLLS_METHOD_BOTH = 2,
} NllsMethod;

typedef enum NllsStatus {
  NLLS_STATUS_OK = 0,
  NLLS_STATUS_NULL_ARGUMENT = 1,
  NLLS_STATUS_INVALID_UTF8 = 2,
  NLLS_STATUS_INVALID_INPUT = 3,
  NLLS_STATUS_NOT_MULTITREE = 4,
  NLLS_STATUS_PRECONDITION = 5,
  NLLS_STATUS_OUT_OF_RANGE = 6,
  NLLS_STATUS_DISAGREEMENT = 7,
  NLLS_STATUS_INTERNAL = 8,
  NLLS_STATUS_PANIC = 9,
} NllsStatus;

typedef enum NllsVerdict {
  NLLS_VERDICT_NEGATIVE = 0,
  NLLS_VERDICT_MEMBER = 1,
} NllsVerdict;

/**
 * A curve instance with its candidates.
 */
typedef struct NllsInstance NllsInstance;

/**
 * The JSON result of a membership check.
 */
typedef struct NllsReport NllsReport;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Parses an instance document. On success `*out` owns a new handle.
 *
 * # Safety
 * `json` must be a nul-terminated string and `out` a valid pointer.
 */
enum NllsStatus nlls_instance_from_json(const char *json, struct NllsInstance **out);

/**
 * Releases an instance. Null is ignored.
 *
 * # Safety
 * `inst` must come from [`nlls_instance_from_json`] and not be used afterwards.
 */
void nlls_instance_free(struct NllsInstance *inst);

/**
 * Number of candidates in the instance document.
 *
 * # Safety
 * `inst` must be a live handle and `out` a valid pointer.
 */
enum NllsStatus nlls_instance_candidate_count(const struct NllsInstance *inst, size_t *out);

/**
 * Decides membership of candidate `index`. With [`NllsMethod::Both`] the vanishing-condition
 * method runs only on multitrees, and disagreement returns [`NllsStatus::Disagreement`].
 *
 * # Safety
 * `inst` must be a live handle and `out` a valid pointer.
 */
enum NllsStatus nlls_lls_check(const struct NllsInstance *inst,
                               size_t index,
                               enum NllsMethod method,
                               enum NllsVerdict *out);

/**
 * Like [`nlls_lls_check`], returning the per-method details as a report handle.
 *
 * # Safety
 * `inst` must be a live handle and `out` a valid pointer.
 */
enum NllsStatus nlls_lls_report(const struct NllsInstance *inst,
                                size_t index,
                                enum NllsMethod method,
                                struct NllsReport **out);

/**
 * The report as JSON text, owned by the report.
 *
 * # Safety
 * `report` must be a live handle or null.
 */
const char *nlls_report_json(const struct NllsReport *report);

/**
 * Releases a report. Null is ignored.
 *
 * # Safety
 * `report` must come from [`nlls_lls_report`] and not be used afterwards.
 */
void nlls_report_free(struct NllsReport *report);

/**
 * Linked determinantal membership for a chain document with flags.
 *
 * # Safety
 * `json` must be a nul-terminated string and `out` a valid pointer.
 */
enum NllsStatus nlls_linked_det_check(const char *json, enum NllsVerdict *out);

/**
 * The message of the last failed call on this thread, or null.
 * Valid until the next call on this thread.
 */
const char *nlls_last_error(void);

/**
 * Library version as a static string.
 */
const char *nlls_version(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* NODAL_LLS_H */

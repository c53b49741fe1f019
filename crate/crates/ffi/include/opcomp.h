#ifndef OPCOMP_H
#define OPCOMP_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum OcStatus {
  OC_STATUS_OK = 0,
  OC_STATUS_NULL_POINTER = 1,
  OC_STATUS_INVALID_UTF8 = 2,
  OC_STATUS_MALFORMED_INPUT = 3,
  OC_STATUS_NOT_COMPLEMENTABLE = 4,
  OC_STATUS_RANGE_NOT_INCLUDED = 5,
  OC_STATUS_INTERNAL = 6,
  OC_STATUS_PANIC = 7,
} OcStatus;

/**
 * A finite `(T, M, N)` instance with exact rational entries.
 */
typedef struct OcInstance OcInstance;

/**
 * A banded operator on `ℓ₂` with a coordinate subspace `M`.
 */
typedef struct OcSeqModel OcSeqModel;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread, or null after a
 * success. Valid until the next call on the same thread.
 */
const char *oc_last_error(void);

/**
 * Library version as a static NUL-terminated string.
 */
const char *oc_version(void);

/**
 * Releases a string returned by this library. Null is ignored.
 *
 * # Safety
 * `s` must come from this library and not have been freed already.
 */
void oc_string_free(char *s);

/**
 * Parses `{"operator", "M", "N"}` into a new instance handle.
 *
 * # Safety
 * `json` must be a NUL-terminated string and `out` a writable pointer.
 */
enum OcStatus oc_instance_from_json(const char *json, struct OcInstance **out);

/**
 * # Safety
 * `instance` must come from [`oc_instance_from_json`] or be null.
 */
void oc_instance_free(struct OcInstance *instance);

/**
 * Writes 1 to `out` when the instance is complementable, else 0.
 *
 * # Safety
 * `instance` must be a live handle and `out` writable.
 */
enum OcStatus oc_instance_is_complementable(const struct OcInstance *instance, int *out);

/**
 * Complementability report as JSON: verdict, failing inclusion, `X`, `Y`
 * and the shorted operator (null when not complementable).
 *
 * # Safety
 * `instance` must be a live handle and `out` writable.
 */
enum OcStatus oc_instance_check(const struct OcInstance *instance, char **out);

/**
 * Shorted operator as a JSON matrix of rational strings. Returns
 * `NotComplementable` when the instance has none.
 *
 * # Safety
 * `instance` must be a live handle and `out` writable.
 */
enum OcStatus oc_instance_schur(const struct OcInstance *instance, char **out);

/**
 * Douglas factorization of `{"A", "B"}`: reduced solution, `λ*`, norm
 * and identity checks as JSON. Returns `RangeNotIncluded` when
 * `R(A) ⊄ R(B)`.
 *
 * # Safety
 * `json` must be a NUL-terminated string and `out` writable.
 */
enum OcStatus oc_douglas(const char *json, char **out);

/**
 * Parses `{"operator", "M"}` (operator spec and index set, as read by the
 * command-line tool) into a sequence-space model.
 *
 * # Safety
 * `json` must be a NUL-terminated string and `out` writable.
 */
enum OcStatus oc_seq_from_json(const char *json, struct OcSeqModel **out);

/**
 * # Safety
 * `model` must come from [`oc_seq_from_json`] or be null.
 */
void oc_seq_free(struct OcSeqModel *model);

/**
 * Decomposability verdict with evidence, witness terms and the
 * complement check, as JSON.
 *
 * # Safety
 * `model` must be a live handle and `out` writable.
 */
enum OcStatus oc_seq_decide(const struct OcSeqModel *model, char **out);

/**
 * Runs the command-line tool in-process. `argv` excludes the program
 * name. Captured output is returned through `out_stdout` and `out_stderr`
 * (free both), the exit code through `out_code`.
 *
 * # Safety
 * `argv` must hold `argc` NUL-terminated strings; the outputs must be
 * writable.
 */
enum OcStatus oc_cli_run(int argc,
                         const char *const *argv,
                         int *out_code,
                         char **out_stdout,
                         char **out_stderr);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* OPCOMP_H */

#ifndef FORMAL_DOLBEAULT_H
#define FORMAL_DOLBEAULT_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result codes shared by every entry point.
 */
typedef enum {
  FD_STATUS_OK = 0,
  FD_STATUS_NULL_POINTER = 1,
  FD_STATUS_INVALID_UTF8 = 2,
  FD_STATUS_INVALID_INPUT = 3,
  FD_STATUS_IO = 4,
  FD_STATUS_MODEL_MISMATCH = 5,
  FD_STATUS_NOT_CLOSED = 6,
  FD_STATUS_NOT_EQUIVALENCE = 7,
  FD_STATUS_INFINITE_DIMENSIONAL = 8,
  FD_STATUS_SOLVER_FAILED = 9,
  FD_STATUS_INTERNAL = 10,
} FdStatus;

/**
 * Opaque handle to an immutable cohesive module.
 */
typedef struct FdModule FdModule;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Parses a module document (`{config, ranks, connection}`).
 *
 * # Safety
 * `json` must be a NUL-terminated string; `out` must be writable.
 */
FdStatus fd_module_from_json(const char *json, FdModule **out);

/**
 * Releases a handle from [`fd_module_from_json`]. Null is ignored.
 *
 * # Safety
 * `module` must be null or a handle not yet freed.
 */
void fd_module_free(FdModule *module);

/**
 * Writes the module back as a JSON document.
 *
 * # Safety
 * `module` must be a live handle; `out` must be writable.
 */
FdStatus fd_module_to_json(const FdModule *module, char **out);

/**
 * Sum of the ranks of the module in all degrees.
 *
 * # Safety
 * `module` must be a live handle; `out` must be writable.
 */
FdStatus fd_module_total_rank(const FdModule *module, size_t *out);

/**
 * Checks the Leibniz rule and flatness (`E o E = 0`).
 *
 * # Safety
 * `module` must be a live handle; both flags must be writable.
 */
FdStatus fd_check_module(const FdModule *module, bool *leibniz, bool *flat);

/**
 * Ext dimensions between two modules as a JSON report
 * (`{degrees, euler_characteristic, euler_cohomology}`). A null `target`
 * means `source`.
 *
 * # Safety
 * `source` must be a live handle, `target` null or a live handle, `out`
 * writable.
 */
FdStatus fd_ext_dims_json(const FdModule *source, const FdModule *target, char **out);

/**
 * Runs one command-line verb (`"validate"`, `"ext"`, `"cone"`, `"glue"`,
 * `"roundtrip"`, `"gauge-solve"`, `"gauge-verify"`) on input files and
 * returns its JSON report with the exit code the binary would use.
 *
 * Returns `FD_STATUS_OK` whenever a report was produced, including reports
 * whose checks fail; inspect `exit_code`.
 *
 * # Safety
 * `verb` must be a NUL-terminated string; `inputs` must point to
 * `n_inputs` NUL-terminated strings; `report` and `exit_code` must be
 * writable.
 */
FdStatus fd_run(const char *verb,
                const char *const *inputs,
                size_t n_inputs,
                uint64_t seed,
                char **report,
                int32_t *exit_code);

/**
 * `gauge-solve` on a problem file. `residual_tol <= 0` selects the default
 * threshold.
 *
 * # Safety
 * As for [`fd_run`].
 */
FdStatus fd_gauge_solve_json(const char *problem_path,
                             double residual_tol,
                             char **report,
                             int32_t *exit_code);

/**
 * Message for the last failure on this thread, or null.
 */
const char *fd_last_error_message(void);

/**
 * Releases a string returned by this library. Null is ignored.
 *
 * # Safety
 * `s` must be null or a string from this library not yet freed.
 */
void fd_string_free(char *s);

/**
 * Library version, static storage.
 */
const char *fd_version(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* FORMAL_DOLBEAULT_H */

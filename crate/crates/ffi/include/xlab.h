#ifndef XLAB_H
#define XLAB_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>

typedef enum XlabStatus {
  XLAB_STATUS_OK = 0,
  XLAB_STATUS_VERIFICATION_FAILED = 1,
  XLAB_STATUS_INPUT_ERROR = 2,
  XLAB_STATUS_NUMERIC_ERROR = 3,
  XLAB_STATUS_NULL_POINTER = 4,
  XLAB_STATUS_PANIC = 5,
} XlabStatus;

typedef enum XlabMethod {
  XLAB_METHOD_KERNEL = 0,
  XLAB_METHOD_DIRECT = 1,
} XlabMethod;

// A measure with its evaluation point.
typedef struct XlabMeasure XlabMeasure;

// Rows of a sweep of `n lambda_n`.
typedef struct XlabSweep XlabSweep;

// One sweep row; `failed` rows carry NaN values.
typedef struct XlabSweepRow {
  size_t n;
  double lambda_n;
  double n_lambda_n;
  double predicted_limit;
  double relative_error;
  bool failed;
} XlabSweepRow;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message of the last failure on this thread, empty after a success. The
// pointer stays valid until the next call into the library on this thread.
const char *xlab_last_error(void);

// Library version as a static NUL-terminated string.
const char *xlab_version(void);

// Builds a measure from the text of a measure file.
//
// # Safety
// `text` must be a NUL-terminated string and `out` a valid pointer.
enum XlabStatus xlab_measure_from_text(const char *text, struct XlabMeasure **out);

// Builds a measure from a measure file on disk.
//
// # Safety
// `path` must be a NUL-terminated string and `out` a valid pointer.
enum XlabStatus xlab_measure_from_file(const char *path, struct XlabMeasure **out);

// # Safety
// `measure` must come from this library and not be used afterwards.
void xlab_measure_free(struct XlabMeasure *measure);

// Moves the evaluation point to `(re, im)`, which must lie on the support.
//
// # Safety
// `measure` must be a valid handle.
enum XlabStatus xlab_measure_set_z0(struct XlabMeasure *measure, double re, double im);

// The evaluation point.
//
// # Safety
// `measure` must be a valid handle, `re` and `im` valid pointers.
enum XlabStatus xlab_measure_z0(const struct XlabMeasure *measure, double *re, double *im);

// Total mass of the measure.
//
// # Safety
// `measure` must be a valid handle and `out` a valid pointer.
enum XlabStatus xlab_measure_mass(const struct XlabMeasure *measure, double *out);

// `lambda_n(mu, re + i im)`. `precision_bits == 0` selects the precision
// automatically.
//
// # Safety
// `measure` must be a valid handle and `out` a valid pointer.
enum XlabStatus xlab_lambda(const struct XlabMeasure *measure,
                            size_t n,
                            double re,
                            double im,
                            enum XlabMethod method,
                            uint32_t precision_bits,
                            double *out);

// Predicted limit of `n lambda_n` at the evaluation point.
//
// # Safety
// `measure` must be a valid handle and `out` a valid pointer.
enum XlabStatus xlab_predicted_limit(const struct XlabMeasure *measure, double *out);

// Sweeps `n lambda_n` at the evaluation point over the geometric schedule
// from `n_min` to `n_max`.
//
// # Safety
// `measure` must be a valid handle and `out` a valid pointer.
enum XlabStatus xlab_sweep_run(const struct XlabMeasure *measure,
                               size_t n_min,
                               size_t n_max,
                               double ratio,
                               enum XlabMethod method,
                               uint32_t precision_bits,
                               struct XlabSweep **out);

// # Safety
// `sweep` must come from this library and not be used afterwards.
void xlab_sweep_free(struct XlabSweep *sweep);

// Number of rows, 0 for a null handle.
//
// # Safety
// `sweep` must be a valid handle or null.
size_t xlab_sweep_len(const struct XlabSweep *sweep);

// # Safety
// `sweep` must be a valid handle and `out` a valid pointer.
enum XlabStatus xlab_sweep_row(const struct XlabSweep *sweep,
                               size_t index,
                               struct XlabSweepRow *out);

// Fits `L + c1/n + c2/n^2` to the last rows. `flagged` is set when the fit
// was rejected and `limit` is the last raw value.
//
// # Safety
// `sweep` must be a valid handle, `limit` and `flagged` valid pointers.
enum XlabStatus xlab_sweep_extrapolate(struct XlabSweep *sweep, double *limit, bool *flagged);

// Writes the sweep as CSV.
//
// # Safety
// `sweep` must be a valid handle and `path` a NUL-terminated string.
enum XlabStatus xlab_sweep_write_csv(const struct XlabSweep *sweep, const char *path);

// Runs a verification suite. `tolerance <= 0` uses the suite default.
// Returns `XLAB_STATUS_VERIFICATION_FAILED` when a check fails.
//
// # Safety
// `suite` must be a NUL-terminated string.
enum XlabStatus xlab_verify(const char *suite, double tolerance);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* XLAB_H */

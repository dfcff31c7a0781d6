#ifndef DWCAT_H
#define DWCAT_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

#define DWCAT_SECTOR_NONE -1

#define DWCAT_SECTOR_SYMMETRIC 0

#define DWCAT_SECTOR_ANTISYMMETRIC 1

#define DWCAT_STATE_GROUND 0

#define DWCAT_STATE_CAT 1

#define DWCAT_STATE_THERMAL 2

#define DWCAT_FLAG_OK 0

#define DWCAT_FLAG_LIMIT 1

#define DWCAT_FLAG_SINGULAR 2

typedef enum {
  DWCAT_STATUS_OK = 0,
  DWCAT_STATUS_NULL_POINTER = 1,
  DWCAT_STATUS_INVALID_ARGUMENT = 2,
  /**
   * Eigensolver failure or another numerical breakdown.
   */
  DWCAT_STATUS_NUMERICAL = 3,
  DWCAT_STATUS_BUFFER_TOO_SMALL = 4,
  /**
   * A Rust panic was caught at the boundary.
   */
  DWCAT_STATUS_PANIC = 5,
} DwcatStatus;

/**
 * Opaque model handle.
 */
typedef struct DwcatModel DwcatModel;

typedef struct {
  double e0;
  double e1;
  double gap;
  /**
   * `J^2 / (N U^2)`; `INFINITY` when `U = 0`.
   */
  double chi;
  int32_t ground_sector;
  int32_t excited_sector;
  /**
   * Nonzero when the gap is below the resolvable relative floor.
   */
  int32_t underflow;
} DwcatGround;

typedef struct {
  double theta;
  double parity;
  double sigma_parity;
  double parity_deriv;
  /**
   * `INFINITY` for singular rows.
   */
  double sigma_theta;
  double precision_norm;
  int32_t flag;
} DwcatScanRow;

typedef struct {
  size_t n;
  double chi;
  double u;
  double e0;
  double e1;
  double gap;
  int32_t underflow;
} DwcatGapRow;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Builds a model and solves for its ground state. On success `*out` owns a
 * new handle.
 *
 * # Safety
 * `out` must be null or valid for one pointer write.
 */
DwcatStatus dwcat_model_new(size_t n, double j, double u, double eps, DwcatModel **out);

/**
 * Releases a handle. Null is ignored.
 *
 * # Safety
 * `model` must be null or a handle from [`dwcat_model_new`] not yet freed.
 */
void dwcat_model_free(DwcatModel *model);

/**
 * Hilbert-space dimension `N + 1`, or 0 for a null handle.
 *
 * # Safety
 * `model` must be null or a live handle.
 */
size_t dwcat_model_dim(const DwcatModel *model);

/**
 * # Safety
 * `model` must be a live handle and `out` valid for one write.
 */
DwcatStatus dwcat_model_ground(const DwcatModel *model, DwcatGround *out);

/**
 * Copies the amplitudes of the ground (`level = 0`) or first excited
 * (`level = 1`) state into `re` and `im`, each of length `len >= N + 1`.
 *
 * # Safety
 * `re` and `im` must be valid for `len` writes each.
 */
DwcatStatus dwcat_model_amplitudes(const DwcatModel *model,
                                   uint32_t level,
                                   double *re,
                                   double *im,
                                   size_t len);

/**
 * Runs the interferometer at each phase in `thetas[0..len]`, writing one row
 * per phase into `rows`. `state` is one of the `DWCAT_STATE_*` constants;
 * `phi` is the relative phase of the cat state and is otherwise ignored.
 *
 * # Safety
 * `thetas` must be readable and `rows` writable for `len` elements.
 */
DwcatStatus dwcat_scan_parity(const DwcatModel *model,
                              int32_t state,
                              double phi,
                              const double *thetas,
                              size_t len,
                              DwcatScanRow *rows);

/**
 * Parity signal of an arbitrary input state given as `N + 1` amplitudes.
 *
 * # Safety
 * `re` and `im` must be readable for `len` elements; `out` writable.
 */
DwcatStatus dwcat_state_parity(const DwcatModel *model,
                               const double *re,
                               const double *im,
                               size_t len,
                               double theta,
                               double *out);

/**
 * `J^2 / (N U^2)`; `INFINITY` when `U = 0` and `NAN` for `N = 0`.
 */
double dwcat_chi(size_t n, double j, double u);

/**
 * Parity signal of the ideal cat state, `cos[N (theta + pi/2)]`.
 */
double dwcat_analytic_cat_parity(size_t n, double theta);

/**
 * Second-order small-`J` parity formula for the model's parameters.
 *
 * # Safety
 * `model` must be a live handle and `out` valid for one write.
 */
DwcatStatus dwcat_perturbative_parity(const DwcatModel *model, double theta, double *out);

/**
 * One gap-scan row at attractive `U = -|J| / sqrt(N chi)`; pass
 * `INFINITY` for `chi` to get `U = 0`.
 *
 * # Safety
 * `out` must be valid for one write.
 */
DwcatStatus dwcat_gap_row(size_t n, double j, double chi, DwcatGapRow *out);

/**
 * Copies the calling thread's last error message, NUL terminated and
 * truncated to fit, into `buf`. Returns the full length including the NUL,
 * or 0 if no error has been recorded. Pass a null `buf` to query the length.
 *
 * # Safety
 * `buf` must be null or writable for `len` bytes.
 */
size_t dwcat_last_error_message(char *buf, size_t len);

/**
 * Library version as a static NUL-terminated string.
 */
const char *dwcat_version(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* DWCAT_H */

#ifndef DISKBSP_H
#define DISKBSP_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

#define DISKBSP_BACKEND_DIRECT 0

#define DISKBSP_BACKEND_FAST 1

/**
 * Returned by [`diskbsp_last_error_order`] when the last failure was not tied to one order.
 */
#define DISKBSP_NO_ORDER INT32_MIN

typedef enum DiskbspStatus {
  DISKBSP_STATUS_OK = 0,
  DISKBSP_STATUS_INVALID_ARGUMENT = 1,
  DISKBSP_STATUS_DEGENERATE = 2,
  DISKBSP_STATUS_PARSE = 3,
  DISKBSP_STATUS_RANGE = 4,
  DISKBSP_STATUS_IO = 5,
  DISKBSP_STATUS_NULL_POINTER = 6,
  DISKBSP_STATUS_BUFFER_TOO_SMALL = 7,
  DISKBSP_STATUS_PANIC = 8,
} DiskbspStatus;

typedef struct DiskbspCoeffs DiskbspCoeffs;

typedef struct DiskbspPlan DiskbspPlan;

typedef struct DiskbspSelective DiskbspSelective;

typedef struct DiskbspComplex {
  double re;
  double im;
} DiskbspComplex;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Copy the last error message of this thread into `buf` (NUL terminated,
 * truncated to `len`). Returns the full message length without the NUL, or 0
 * when the last call succeeded.
 *
 * # Safety
 * `buf` must be null or point to `len` writable bytes.
 */
size_t diskbsp_last_error(char *buf, size_t len);

/**
 * Angular order named by the last degenerate-input failure, or
 * [`DISKBSP_NO_ORDER`].
 */
int32_t diskbsp_last_error_order(void);

/**
 * Build a plan for `size`×`size` images. A positive `bandlimit_factor`
 * selects the bandlimit rule, anything else the pixel-count rule.
 *
 * # Safety
 * `out` must be a valid pointer to a handle slot.
 */
enum DiskbspStatus diskbsp_plan_new(size_t size, double bandlimit_factor, struct DiskbspPlan **out);

/**
 * # Safety
 * `plan` must be null or a handle from [`diskbsp_plan_new`] not yet freed.
 */
void diskbsp_plan_free(struct DiskbspPlan *plan);

/**
 * Number of coefficients m, or 0 for a null handle.
 *
 * # Safety
 * `plan` must be null or a live handle.
 */
size_t diskbsp_plan_len(const struct DiskbspPlan *plan);

/**
 * # Safety
 * `plan` must be null or a live handle.
 */
size_t diskbsp_plan_size(const struct DiskbspPlan *plan);

/**
 * # Safety
 * `plan` must be null or a live handle.
 */
int32_t diskbsp_plan_max_order(const struct DiskbspPlan *plan);

/**
 * # Safety
 * `plan` must be null or a live handle.
 */
size_t diskbsp_plan_selective_len(const struct DiskbspPlan *plan);

/**
 * # Safety
 * `plan` must be null or a live handle.
 */
uint64_t diskbsp_plan_full_count(const struct DiskbspPlan *plan);

/**
 * Forward transform of a row-major `size*size` image.
 *
 * # Safety
 * `pixels` must point to `len` doubles; `plan` must be live; `out` valid.
 */
enum DiskbspStatus diskbsp_dht_forward(const struct DiskbspPlan *plan,
                                       const double *pixels,
                                       size_t len,
                                       uint32_t backend,
                                       struct DiskbspCoeffs **out);

/**
 * Synthesize the image of `coeffs` into `out_pixels` (`size*size` doubles).
 *
 * # Safety
 * `coeffs` must be live and `out_pixels` must hold `len` doubles.
 */
enum DiskbspStatus diskbsp_dht_inverse(const struct DiskbspCoeffs *coeffs,
                                       double *out_pixels,
                                       size_t len);

/**
 * Wrap `len` coefficient values (in plan order) into a handle.
 *
 * # Safety
 * `values` must point to `len` elements; `plan` must be live; `out` valid.
 */
enum DiskbspStatus diskbsp_coeffs_new(const struct DiskbspPlan *plan,
                                      const struct DiskbspComplex *values,
                                      size_t len,
                                      struct DiskbspCoeffs **out);

/**
 * # Safety
 * `coeffs` must be null or a live handle.
 */
size_t diskbsp_coeffs_len(const struct DiskbspCoeffs *coeffs);

/**
 * Copy the coefficient values into `out` (at least `diskbsp_coeffs_len`).
 *
 * # Safety
 * `coeffs` must be live and `out` must hold `len` elements.
 */
enum DiskbspStatus diskbsp_coeffs_copy(const struct DiskbspCoeffs *coeffs,
                                       struct DiskbspComplex *out,
                                       size_t len);

/**
 * Coefficients of the image rotated by `phi` radians.
 *
 * # Safety
 * `coeffs` must be live; `out` valid.
 */
enum DiskbspStatus diskbsp_coeffs_rotate(const struct DiskbspCoeffs *coeffs,
                                         double phi,
                                         struct DiskbspCoeffs **out);

/**
 * # Safety
 * `coeffs` must be null or a handle not yet freed.
 */
void diskbsp_coeffs_free(struct DiskbspCoeffs *coeffs);

/**
 * # Safety
 * `coeffs` must be live; `out` valid.
 */
enum DiskbspStatus diskbsp_selective_bispectrum(const struct DiskbspCoeffs *coeffs,
                                                struct DiskbspSelective **out);

/**
 * Wrap `len` selective entries (in label order) into a handle.
 *
 * # Safety
 * `values` must point to `len` elements; `plan` must be live; `out` valid.
 */
enum DiskbspStatus diskbsp_selective_new(const struct DiskbspPlan *plan,
                                         const struct DiskbspComplex *values,
                                         size_t len,
                                         struct DiskbspSelective **out);

/**
 * # Safety
 * `bsp` must be null or a live handle.
 */
size_t diskbsp_selective_len(const struct DiskbspSelective *bsp);

/**
 * # Safety
 * `bsp` must be live and `out` must hold `len` elements.
 */
enum DiskbspStatus diskbsp_selective_copy(const struct DiskbspSelective *bsp,
                                          struct DiskbspComplex *out,
                                          size_t len);

/**
 * Recover coefficients (up to rotation) from a selective bispectrum.
 * Returns `DISKBSP_STATUS_DEGENERATE` when a first-root coefficient vanishes;
 * [`diskbsp_last_error_order`] then names the order.
 *
 * # Safety
 * `bsp` must be live; `out` valid.
 */
enum DiskbspStatus diskbsp_invert_selective(const struct DiskbspSelective *bsp,
                                            struct DiskbspCoeffs **out);

/**
 * # Safety
 * `bsp` must be null or a handle not yet freed.
 */
void diskbsp_selective_free(struct DiskbspSelective *bsp);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* DISKBSP_H */

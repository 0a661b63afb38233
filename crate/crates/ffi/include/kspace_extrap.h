#ifndef KSPACE_EXTRAP_H
#define KSPACE_EXTRAP_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Result code of every fallible call.
typedef enum KxStatus {
  KX_STATUS_OK = 0,
  KX_STATUS_NULL_POINTER = 1,
  KX_STATUS_INVALID_ARGUMENT = 2,
  KX_STATUS_SHAPE_MISMATCH = 3,
  KX_STATUS_DEGENERATE = 4,
  KX_STATUS_NUMERICAL = 5,
  KX_STATUS_FORMAT = 6,
  KX_STATUS_IO = 7,
  KX_STATUS_PANIC = 8,
} KxStatus;

// Complex k-space grid.
typedef struct KxGrid KxGrid;

// Real image.
typedef struct KxImage KxImage;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message of the calling thread's most recent failure; empty if none.
// The pointer stays valid until the next failing call on this thread.
const char *kx_last_error(void);

// Static name of a status code.
const char *kx_status_name(enum KxStatus status);

// Zero grid with centered indexing.
//
// # Safety
// `out` must be writable.
enum KxStatus kx_grid_new(size_t ny, size_t nx, struct KxGrid **out);

// Grid from `ny*nx` row-major real and imaginary parts. `im` may be null
// for a real grid.
//
// # Safety
// `re` (and `im` if non-null) must point to `ny*nx` doubles; `out` must be writable.
enum KxStatus kx_grid_from_parts(size_t ny,
                                 size_t nx,
                                 const double *re,
                                 const double *im,
                                 struct KxGrid **out);

// # Safety
// `grid` must come from this library and not be used afterwards; null is ignored.
void kx_grid_free(struct KxGrid *grid);

// Duplicate a grid.
//
// # Safety
// `grid` must be a live handle; `out` must be writable.
enum KxStatus kx_grid_clone(const struct KxGrid *grid, struct KxGrid **out);

// Dimensions and center indices. Any output pointer may be null.
//
// # Safety
// `grid` must be a live handle.
enum KxStatus kx_grid_dims(const struct KxGrid *grid,
                           size_t *ny,
                           size_t *nx,
                           size_t *center_k,
                           size_t *center_n);

// Copy samples into caller buffers of `len == ny*nx` doubles each.
//
// # Safety
// `re` and `im` must be writable for `len` doubles.
enum KxStatus kx_grid_copy_data(const struct KxGrid *grid, double *re, double *im, size_t len);

// Read a CKS1 file.
//
// # Safety
// `path` must be a NUL-terminated string; `out` must be writable.
enum KxStatus kx_grid_read(const char *path, struct KxGrid **out);

// Write a CKS1 file.
//
// # Safety
// `grid` must be a live handle; `path` a NUL-terminated string.
enum KxStatus kx_grid_write(const struct KxGrid *grid, const char *path);

// # Safety
// `image` must come from this library and not be used afterwards; null is ignored.
void kx_image_free(struct KxImage *image);

// Image from `ny*nx` row-major values.
//
// # Safety
// `data` must point to `ny*nx` doubles; `out` must be writable.
enum KxStatus kx_image_from_data(size_t ny, size_t nx, const double *data, struct KxImage **out);

// # Safety
// `image` must be a live handle; outputs may be null.
enum KxStatus kx_image_dims(const struct KxImage *image, size_t *ny, size_t *nx);

// # Safety
// `data` must be writable for `len == ny*nx` doubles.
enum KxStatus kx_image_copy_data(const struct KxImage *image, double *data, size_t len);

// Simulate `n`×`n` spin-echo k-space of the brain phantom with default
// sequence parameters. `out_truth` (nullable) receives the noiseless
// magnitude image.
//
// # Safety
// `out_kspace` must be writable; `out_truth` writable or null.
enum KxStatus kx_simulate(size_t n,
                          double noise_std,
                          uint64_t seed,
                          struct KxGrid **out_kspace,
                          struct KxImage **out_truth);

// Keep lines `k >= -q` and samples `n >= -m`, zeroing the rest.
//
// # Safety
// `full` must be a live handle; `out` must be writable.
enum KxStatus kx_truncate(const struct KxGrid *full, size_t q, size_t m, struct KxGrid **out);

// Reconstruct with the named method (`zerofill`, `conjsym`, `homodyne`,
// `pocs`, `lp`, `lp-fixed`, `lp-proj`, `fir`) and default parameters;
// `steps` is used by the linear-prediction methods. `out_kspace` may be null.
//
// # Safety
// `partial` must be a live handle, `method` a NUL-terminated string,
// `out_image` writable, `out_kspace` writable or null.
enum KxStatus kx_recon(const struct KxGrid *partial,
                       size_t q,
                       size_t m,
                       const char *method,
                       size_t steps,
                       struct KxImage **out_image,
                       struct KxGrid **out_kspace);

// RMS difference; relative to the RMS of `b` when `normalize` is true.
//
// # Safety
// `a`, `b` must be live handles; `out` must be writable.
enum KxStatus kx_rmse(const struct KxImage *a,
                      const struct KxImage *b,
                      bool normalize,
                      double *out);

// Percentage of reference Canny edge pixels that differ, default detector.
//
// # Safety
// `recon`, `reference` must be live handles; `out` must be writable.
enum KxStatus kx_edge_error_percent(const struct KxImage *recon,
                                    const struct KxImage *reference,
                                    double *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* KSPACE_EXTRAP_H */

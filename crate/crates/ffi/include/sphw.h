#ifndef SPHW_H
#define SPHW_H

/* Generated by cbindgen; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum {
  SPHW_STATUS_OK = 0,
  SPHW_STATUS_NULL_POINTER = 1,
  SPHW_STATUS_INVALID_ARGUMENT = 2,
  SPHW_STATUS_DOMAIN = 3,
  SPHW_STATUS_NUMERIC = 4,
  SPHW_STATUS_IO = 5,
  SPHW_STATUS_PANIC = 6,
} SphwStatus;

/**
 * A discrete probability measure on the line or the plane.
 */
typedef struct SphwMeasure SphwMeasure;

/**
 * Snapshot series of a finished experiment run.
 */
typedef struct SphwSeries SphwSeries;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Copies the last error message of the calling thread into `buf`
 * (NUL-terminated, truncated to `len - 1` bytes) and returns the full
 * message length in bytes, excluding the terminator.
 *
 * # Safety
 * `buf` must be null or point to `len` writable bytes.
 */
size_t sphw_last_error_message(char *buf, size_t len);

/**
 * Library version as a static NUL-terminated string.
 */
const char *sphw_version(void);

/**
 * Builds a measure from `n` points (`dim` coordinates each, row-major)
 * and `n` weights summing to one.
 *
 * # Safety
 * `points` must hold `n * dim` doubles, `weights` `n` doubles, and `out`
 * must be writable.
 */
SphwStatus sphw_measure_new(const double *points,
                            const double *weights,
                            size_t n,
                            uint32_t dim,
                            SphwMeasure **out_measure);

/**
 * # Safety
 * `measure` must be null or a handle from [`sphw_measure_new`] not yet
 * freed.
 */
void sphw_measure_free(SphwMeasure *measure);

/**
 * Exact 1-Wasserstein distance between two measures.
 *
 * # Safety
 * Handles must be live; `out_distance` must be writable.
 */
SphwStatus sphw_wasserstein1(const SphwMeasure *mu, const SphwMeasure *nu, double *out_distance);

/**
 * Empirical rates `C` from `n_m` sup-distances and `n_m + 1` increasing
 * resolutions. Writes `n_m - 1` values; an undefined rate is NaN.
 *
 * # Safety
 * `m` must hold `n_m` doubles, `n` `n_m + 1` sizes and `out_rates`
 * `n_m - 1` writable doubles.
 */
SphwStatus sphw_convergence_rates(const double *m, size_t n_m, const size_t *n, double *out_rates);

/**
 * Runs an experiment (`"droplet"` or `"shocktube"`) at resolution `level`
 * (lattice size or particle count). `config_toml` may be null or a TOML
 * table overriding fields of the experiment configuration.
 *
 * # Safety
 * Strings must be NUL-terminated; `out_series` must be writable.
 */
SphwStatus sphw_run_experiment(const char *experiment,
                               size_t level,
                               const char *config_toml,
                               SphwSeries **out_series);

/**
 * # Safety
 * `series` must be null or a live handle from [`sphw_run_experiment`].
 */
void sphw_series_free(SphwSeries *series);

/**
 * Number of snapshots and particles per snapshot.
 *
 * # Safety
 * `series` must be live; out-pointers writable.
 */
SphwStatus sphw_series_shape(const SphwSeries *series,
                             size_t *out_snapshots,
                             size_t *out_particles);

/**
 * Time of snapshot `k` and its particle data: positions and velocities as
 * `(x, y)` pairs (`y = 0` in 1D), then masses and densities. Each buffer
 * may be null to skip it; non-null buffers must hold `2 N` respectively
 * `N` doubles.
 *
 * # Safety
 * `series` must be live and buffers sized as described.
 */
SphwStatus sphw_series_snapshot(const SphwSeries *series,
                                size_t k,
                                double *out_time,
                                double *positions,
                                double *velocities,
                                double *masses,
                                double *densities);

/**
 * 1-Wasserstein distance between snapshot `k` of two series, with the
 * normalized particle masses as weights.
 *
 * # Safety
 * Handles must be live; `out_distance` writable.
 */
SphwStatus sphw_series_distance(const SphwSeries *a,
                                const SphwSeries *b,
                                size_t k,
                                double *out_distance);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* SPHW_H */

#ifndef XWIGNER_H
#define XWIGNER_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result codes; the numeric values match the command-line exit codes.
 */
typedef enum XwStatus {
  XwStatus_Ok = 0,
  XwStatus_NullPointer = 1,
  XwStatus_Config = 2,
  XwStatus_Numerical = 3,
  XwStatus_Io = 4,
  XwStatus_Panic = 5,
} XwStatus;

/**
 * Which closed form [`xw_field_new`] evaluates.
 */
typedef enum XwKind {
  /**
   * Freely evolved state against the initial state at time t.
   */
  XwKind_Free = 0,
  /**
   * The two slit paths against each other at the screen.
   */
  XwKind_Slits = 1,
  /**
   * Screen state against the initial state.
   */
  XwKind_Screen = 2,
} XwKind;

/**
 * Physical parameters of a run.
 */
typedef struct XwConfig XwConfig;

/**
 * Complex samples on an (x, k) grid.
 */
typedef struct XwField XwField;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread, or NULL.
 *
 * The pointer stays valid until the next failing call on this thread.
 */
const char *xw_last_error(void);

/**
 * Neutron defaults: m = 1.67e-27 kg, σ₀ = β = 7.8 µm, d = 100 µm,
 * t = τ = 50 ms, γ = 0.
 */
struct XwConfig *xw_config_new(void);

/**
 * # Safety
 * `cfg` must come from [`xw_config_new`] and not be used afterwards.
 * NULL is ignored.
 */
void xw_config_free(struct XwConfig *cfg);

/**
 * Set one parameter by name: mass, hbar, sigma0, gamma, beta, d, t, tau.
 * The whole configuration is validated after the change; an invalid value
 * is rejected and the previous one kept.
 *
 * # Safety
 * `cfg` must be a live handle and `key` a NUL-terminated string.
 */
enum XwStatus xw_config_set(struct XwConfig *cfg, const char *key, double value);

/**
 * Evaluate a closed-form cross-Wigner on the default nx × nk grid.
 * `gouy = false` drops the Gouy phase difference.
 *
 * # Safety
 * `cfg` must be a live handle and `out` a writable pointer. On success
 * `*out` receives a handle to release with [`xw_field_free`].
 */
enum XwStatus xw_field_new(const struct XwConfig *cfg,
                           enum XwKind kind,
                           uint32_t nx,
                           uint32_t nk,
                           bool gouy,
                           struct XwField **out);

/**
 * # Safety
 * `field` must come from [`xw_field_new`] and not be used afterwards.
 * NULL is ignored.
 */
void xw_field_free(struct XwField *field);

/**
 * # Safety
 * `field` must be a live handle; `nx` and `nk` writable.
 */
enum XwStatus xw_field_dims(const struct XwField *field, uint32_t *nx, uint32_t *nk);

/**
 * Copy the axes into `x` (nx values, m) and `k` (nk values, 1/m).
 *
 * # Safety
 * `x` and `k` must hold at least nx and nk doubles.
 */
enum XwStatus xw_field_axes(const struct XwField *field, double *x, double *k);

/**
 * Copy the samples, x-major, into `re` and `im` of length `len`, which must
 * equal nx·nk.
 *
 * # Safety
 * `re` and `im` must each hold `len` doubles.
 */
enum XwStatus xw_field_values(const struct XwField *field, double *re, double *im, size_t len);

/**
 * Write the field as CSV (`binary = false`) or XWIG1 binary.
 *
 * # Safety
 * `path` must be a NUL-terminated string.
 */
enum XwStatus xw_field_save(const struct XwField *field, const char *path, bool binary);

/**
 * Gouy phase difference Δμ of free evolution for a time `t` seconds.
 *
 * # Safety
 * `cfg` must be a live handle and `out` writable.
 */
enum XwStatus xw_gouy_delta_free(const struct XwConfig *cfg, double t, double *out);

/**
 * Gouy phase difference Δμ′ after the slits, at the configured t and τ.
 *
 * # Safety
 * `cfg` must be a live handle and `out` writable.
 */
enum XwStatus xw_gouy_delta_slit(const struct XwConfig *cfg, double *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* XWIGNER_H */

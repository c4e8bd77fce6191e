#ifndef KERRSWAP_H
#define KERRSWAP_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdbool.h>
#include <stddef.h>

typedef enum {
  KS_STATUS_OK = 0,
  KS_STATUS_NULL_POINTER = 1,
  KS_STATUS_INVALID_ARGUMENT = 2,
  KS_STATUS_DEGENERATE = 3,
  KS_STATUS_PRECONDITION = 4,
  KS_STATUS_NO_MAXIMA = 5,
  KS_STATUS_BUFFER_TOO_SMALL = 6,
  KS_STATUS_INTERNAL = 7,
} KsStatus;

/**
 * Opaque handle.
 */
typedef struct KsSystem KsSystem;

/**
 * Swap observables at one time. Undefined values are NaN.
 */
typedef struct {
  double t;
  double concurrence;
  double p1;
  double p2;
  /**
   * Bell phase Θ in (-π, π].
   */
  double theta_phase;
  double norm;
  bool degenerate;
  /**
   * Normalized `A₁..A₄`, real parts.
   */
  double amplitudes_re[4];
  /**
   * Normalized `A₁..A₄`, imaginary parts.
   */
  double amplitudes_im[4];
} KsOutcome;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Create a system with `g = 1`, rates in units of `g`, and initial angles
 * `θ = π/4`, `φ = 0`. The handle must be released with `ks_system_free`.
 *
 * # Safety
 * `out` must be a valid pointer to writable storage for one pointer.
 */
KsStatus ks_system_new(double delta, double chi, double kappa, double gamma, KsSystem **out);

/**
 * Release a handle; null is ignored.
 *
 * # Safety
 * `sys` must be null or a handle from `ks_system_new` not yet freed.
 */
void ks_system_free(KsSystem *sys);

/**
 * Set `cosθ|e,1⟩ + sinθ e^{-iφ}|g,2⟩` as the start of subsystem 1.
 *
 * # Safety
 * `sys` must be a live handle.
 */
KsStatus ks_system_set_initial_state(KsSystem *sys, double theta, double phi);

/**
 * Swap observables at scaled time `t`.
 *
 * # Safety
 * `sys` must be a live handle and `out` writable.
 */
KsStatus ks_swap_outcome(const KsSystem *sys, double t, KsOutcome *out);

/**
 * Observables on `t_k = t_max k / (samples - 1)`, written to `out[0..samples]`.
 *
 * # Safety
 * `sys` must be a live handle and `out` must hold `capacity` elements.
 */
KsStatus ks_evolve(const KsSystem *sys,
                   double t_max,
                   size_t samples,
                   KsOutcome *out,
                   size_t capacity);

/**
 * Times of maximal entanglement, closed form when `κ = Γ` and applicable,
 * numeric otherwise. `*all_times` is set when the concurrence is 1 for
 * every `t > 0`, in which case `*len` is 0.
 *
 * # Safety
 * `sys` must be a live handle; `times` must hold `capacity` elements;
 * `len` and `all_times` must be writable.
 */
KsStatus ks_maximal_times(const KsSystem *sys,
                          size_t n_max,
                          double t_max,
                          double *times,
                          size_t capacity,
                          size_t *len,
                          bool *all_times);

/**
 * Maximality residual at `t` (requires `κ = Γ`).
 *
 * # Safety
 * `sys` must be a live handle and `out` writable.
 */
KsStatus ks_maximality_residual(const KsSystem *sys, double t, double *out);

/**
 * Concurrence of a two-qubit density matrix given row-major as 16 real
 * and 16 imaginary parts.
 *
 * # Safety
 * `re` and `im` must each point to 16 readable doubles; `out` writable.
 */
KsStatus ks_wootters_concurrence(const double *re, const double *im, double *out);

/**
 * Message of the last failed call on this thread, or an empty string.
 * The pointer stays valid until the next call on the same thread.
 */
const char *ks_last_error_message(void);

/**
 * Library version as a static string.
 */
const char *ks_version(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* KERRSWAP_H */

#ifndef QFISHER_H
#define QFISHER_H

/* Generated by cbindgen from src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result of every fallible call.
 */
typedef enum {
  QF_STATUS_OK = 0,
  QF_STATUS_NULL_POINTER = 1,
  QF_STATUS_INVALID_ARGUMENT = 2,
  QF_STATUS_DOMAIN = 3,
  QF_STATUS_RESOURCE = 4,
  QF_STATUS_BUDGET_EXHAUSTED = 5,
  QF_STATUS_DEGENERATE_FISHER = 6,
  QF_STATUS_INTERNAL = 7,
  QF_STATUS_PANIC = 8,
} QfStatus;

typedef enum {
  QF_METHOD_SHOR = 0,
  QF_METHOD_GROVER_ADIABATIC = 1,
} QfMethod;

/**
 * A seeded random stream for measurements.
 */
typedef struct QfRng QfRng;

/**
 * A statevector.
 */
typedef struct QfState QfState;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread, or null. The pointer is
 * valid until the next failing call on the same thread.
 */
const char *qf_last_error_message(void);

/**
 * # Safety
 * `text` must be null or a string returned by this library, not yet freed.
 */
void qf_string_free(char *text);

/**
 * Uniform superposition over `dim` basis states.
 *
 * # Safety
 * `out` must be valid for a pointer write.
 */
QfStatus qf_state_new_uniform(size_t dim, QfState **out);

/**
 * # Safety
 * `state` must be null or a handle from this library, not yet freed.
 */
void qf_state_free(QfState *state);

/**
 * # Safety
 * `state` must be a live handle and `out` valid for a write.
 */
QfStatus qf_state_dim(const QfState *state, size_t *out);

/**
 * Flips the sign of the amplitudes at the `len` indices in `marked`.
 *
 * # Safety
 * `state` must be a live handle; `marked` must point to `len` readable values.
 */
QfStatus qf_state_phase_flip(QfState *state, const size_t *marked, size_t len);

/**
 * # Safety
 * `state` must be a live handle.
 */
QfStatus qf_state_invert_about_average(QfState *state);

/**
 * Fourier transform with `+2πi` phases and `1/√d` scaling.
 *
 * # Safety
 * `state` must be a live handle.
 */
QfStatus qf_state_qft(QfState *state);

/**
 * # Safety
 * `state` must be a live handle.
 */
QfStatus qf_state_inverse_qft(QfState *state);

/**
 * Copies the `dim` probabilities into `out`, which holds `len` values.
 *
 * # Safety
 * `state` must be a live handle; `out` must be writable for `len` values.
 */
QfStatus qf_state_probabilities(const QfState *state, double *out, size_t len);

/**
 * Copies the amplitudes into `out` as interleaved `(re, im)` pairs;
 * `len` counts doubles and must be at least `2 * dim`.
 *
 * # Safety
 * `state` must be a live handle; `out` must be writable for `len` values.
 */
QfStatus qf_state_amplitudes(const QfState *state, double *out, size_t len);

/**
 * # Safety
 * `out` must be valid for a pointer write.
 */
QfStatus qf_rng_new(uint64_t seed, QfRng **out);

/**
 * # Safety
 * `rng` must be null or a handle from this library, not yet freed.
 */
void qf_rng_free(QfRng *rng);

/**
 * Projective measurement in the computational basis; the state collapses.
 *
 * # Safety
 * `state` and `rng` must be live handles; `out` valid for a write.
 */
QfStatus qf_state_measure(QfState *state, QfRng *rng, size_t *out);

/**
 * `base^exp mod modulus`.
 *
 * # Safety
 * `out` must be valid for a write.
 */
QfStatus qf_modpow(uint64_t base, uint64_t exp, uint64_t modulus, uint64_t *out);

/**
 * Multiplicative order of `base` modulo `modulus`.
 *
 * # Safety
 * `out` must be valid for a write.
 */
QfStatus qf_order(uint64_t base, uint64_t modulus, uint64_t *out);

/**
 * Marked-item probability after `steps` simulated Grover iterations.
 *
 * # Safety
 * `marked` must point to `len` readable values; `out` valid for a write.
 */
QfStatus qf_grover_marked_mass(size_t n_items,
                               const size_t *marked,
                               size_t len,
                               size_t steps,
                               double *out);

/**
 * Factors `n` with random bases drawn from `seed`. On success `out`
 * receives the two factors in ascending order.
 *
 * # Safety
 * `out` must be writable for two values.
 */
QfStatus qf_factor(uint64_t n, QfMethod method, uint64_t seed, uint64_t *out);

/**
 * Per-step Grover trace as CSV, the same text the command line writes.
 *
 * # Safety
 * `marked` must point to `len` readable values; `out` valid for a write.
 * The string must be released with [`qf_string_free`].
 */
QfStatus qf_grover_trace_csv(size_t n_items,
                             const size_t *marked,
                             size_t len,
                             size_t steps,
                             double dphi,
                             char **out);

/**
 * Comparison report for `(n, y)` as JSON.
 *
 * # Safety
 * `out` must be valid for a write. The string must be released with
 * [`qf_string_free`].
 */
QfStatus qf_compare_json(uint64_t n, uint64_t y, uint64_t seed, double dphi, char **out);

/**
 * Library version as a static string.
 */
const char *qf_version(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* QFISHER_H */

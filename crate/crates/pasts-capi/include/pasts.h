/* C interface for the photon-added squeezed thermal state library. */

#ifndef PASTS_H
#define PASTS_H

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

// Result of every fallible call in this ABI.
typedef enum PastsStatus {
  // The call succeeded and any out-parameter has been written.
  PASTS_STATUS_OK = 0,
  // A required pointer argument was null.
  PASTS_STATUS_NULL_POINTER = 1,
  // A parameter is outside its mathematical domain.
  PASTS_STATUS_INVALID_PARAMETER = 2,
  // The requested quantity is undefined at this point (e.g. Mandel Q
  // of a state with zero mean photon number).
  PASTS_STATUS_UNDEFINED = 3,
  // A truncated Fock-space computation would not be trustworthy.
  PASTS_STATUS_TRUNCATION = 4,
  // A phase-space point lies outside the numerically trusted region.
  PASTS_STATUS_OUT_OF_TRUSTED_RANGE = 5,
  // The requested threshold does not exist as a finite positive time.
  PASTS_STATUS_NO_FINITE_THRESHOLD = 6,
  // Numerical integration failed to hold its accuracy target.
  PASTS_STATUS_INTEGRATION_FAILURE = 7,
  // An internal cross-check failed or a panic was caught; the library
  // refused to return a value it cannot stand behind.
  PASTS_STATUS_INTERNAL_ERROR = 8,
} PastsStatus;

// Opaque handle for the Wigner function of a state after a thermal
// channel `(N, κt)`; precomputes the evolved coefficients once so grid
// sweeps pay only the per-point cost.
typedef struct PastsEvolved PastsEvolved;

// Opaque handle for a photon-added squeezed thermal state `(λ, n_c, m)`.
typedef struct PastsState PastsState;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Creates a state handle for `m` photons added to a squeezed thermal
// state with squeeze parameter `lambda` and thermal occupation `n_c`.
// On success writes the new handle to `out`; free it with
// `pasts_state_free`.
enum PastsStatus pasts_state_new(double lambda, double n_c, uint32_t m, struct PastsState **out);

// Frees a state handle. A null pointer is accepted and ignored.
void pasts_state_free(struct PastsState *state);

// Normalization factor `C_{a,m}` of the state.
enum PastsStatus pasts_normalization(const struct PastsState *state, double *out);

// Mean photon number of the state.
enum PastsStatus pasts_mean_photon(const struct PastsState *state, double *out);

// Mandel Q parameter of the state.
enum PastsStatus pasts_mandel_q(const struct PastsState *state, double *out);

// Probability of finding `n` photons in the state.
enum PastsStatus pasts_pnd(const struct PastsState *state, uint32_t n, double *out);

// Wigner function of the state at the phase-space point `re + i·im`,
// in the convention where the function integrates to 1/2.
enum PastsStatus pasts_wigner(const struct PastsState *state, double re, double im, double *out);

// Overlap fidelity between the state and its squeezed thermal reference.
enum PastsStatus pasts_fidelity(const struct PastsState *state, double *out);

// Ratio of the photon-subtracted to photon-added normalization factors;
// strictly below one for every `m ≥ 1`.
enum PastsStatus pasts_fidelity_ratio(const struct PastsState *state, double *out);

// Creates an evaluator for the state's Wigner function after contact
// with a thermal bath of mean occupation `bath_mean` for a dimensionless
// time `kt`. Free it with `pasts_evolved_free`.
enum PastsStatus pasts_evolved_new(const struct PastsState *state,
                                   double bath_mean,
                                   double kt,
                                   struct PastsEvolved **out);

// Evolved Wigner function at the phase-space point `re + i·im`.
enum PastsStatus pasts_evolved_eval(const struct PastsEvolved *evolved,
                                    double re,
                                    double im,
                                    double *out);

// Frees an evolved-Wigner evaluator. A null pointer is accepted.
void pasts_evolved_free(struct PastsEvolved *evolved);

// Time `κt_c` at which the origin negativity of any single-photon-added
// state vanishes in a bath of mean occupation `bath_mean`.
enum PastsStatus pasts_threshold_added(double bath_mean, double *out);

// Corresponding threshold for the single-photon-subtracted comparison
// state; returns `PASTS_STATUS_NO_FINITE_THRESHOLD` when no finite
// positive time exists.
enum PastsStatus pasts_threshold_subtracted(double bath_mean,
                                            double n_c,
                                            double lambda,
                                            double *out);

// Static, NUL-terminated name of a status code, for diagnostics.
const char *pasts_status_name(enum PastsStatus status);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* PASTS_H */

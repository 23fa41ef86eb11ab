/* Copyright 2026 MacroQ Contributors
 * SPDX-License-Identifier: Apache-2.0
 *
 * Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#ifndef MACROQ_H
#define MACROQ_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/*
 Status code returned by every function.
 */
typedef enum MqStatus {
  MQ_STATUS_OK = 0,
  /*
   A required pointer argument was null.
   */
  MQ_STATUS_NULL_POINTER = 1,
  /*
   Malformed or out-of-range argument (including invalid UTF-8 / JSON).
   */
  MQ_STATUS_INVALID_ARGUMENT = 2,
  /*
   State data violates a density-matrix invariant.
   */
  MQ_STATUS_INVALID_STATE = 3,
  /*
   Fock truncation too small for the requested state.
   */
  MQ_STATUS_TRUNCATION = 4,
  /*
   Dimension exceeds the configured budget.
   */
  MQ_STATUS_RESOURCE_LIMIT = 5,
  /*
   Two independent evaluations disagreed beyond tolerance.
   */
  MQ_STATUS_CONSISTENCY = 6,
  /*
   Wigner grid too coarse for the gradient integral.
   */
  MQ_STATUS_RESOLUTION = 7,
  /*
   Operation not available for this state (e.g. multimode Wigner grid).
   */
  MQ_STATUS_UNSUPPORTED = 8,
  /*
   Internal panic caught at the boundary.
   */
  MQ_STATUS_PANIC = 9,
} MqStatus;

/*
 Which evaluation `mq_report_json` performs.
 */
typedef enum MqMethod {
  MQ_METHOD_OPERATOR = 0,
  MQ_METHOD_WIGNER = 1,
  MQ_METHOD_BOTH = 2,
} MqMethod;

/*
 Opaque state handle.
 */
typedef struct MqState MqState;

/*
 Complex number passed by value.
 */
typedef struct MqComplex {
  double re;
  double im;
} MqComplex;

/*
 Measures of one state.
 */
typedef struct MqMeasures {
  double i;
  double c;
  double p;
  double chi2;
  /*
   `|I − (C − M·P)/2|`.
   */
  double identity_residual;
  uint32_t num_modes;
  uint32_t truncation;
} MqMeasures;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/*
 Library version as a static NUL-terminated string.
 */
const char *mq_version(void);

/*
 Message of the last failure on this thread, or NULL. The pointer stays
 valid until the next failing call on the same thread.
 */
const char *mq_last_error_message(void);

/*
 Fock state |n⟩. `truncation` 0 selects the default.

 # Safety
 `out` must be valid for writes.
 */
enum MqStatus mq_state_fock(uint32_t n, uint32_t truncation, struct MqState **out);

/*
 Coherent state |α⟩.

 # Safety
 `out` must be valid for writes.
 */
enum MqStatus mq_state_coherent(struct MqComplex alpha, uint32_t truncation, struct MqState **out);

/*
 Cat state ∝ |α⟩ + e^{iφ}|−α⟩.

 # Safety
 `out` must be valid for writes.
 */
enum MqStatus mq_state_cat(struct MqComplex alpha,
                           double phase,
                           uint32_t truncation,
                           struct MqState **out);

/*
 (|α⟩⟨α| + |−α⟩⟨−α|)/2.

 # Safety
 `out` must be valid for writes.
 */
enum MqStatus mq_state_cat_mixture(struct MqComplex alpha,
                                   uint32_t truncation,
                                   struct MqState **out);

/*
 Uniform mixture of `d` Fock projectors starting at 0 (`include_vacuum`)
 or at 1.

 # Safety
 `out` must be valid for writes.
 */
enum MqStatus mq_state_fock_mixture(uint32_t d,
                                    bool include_vacuum,
                                    uint32_t truncation,
                                    struct MqState **out);

/*
 Thermal state with Gaussian Wigner width `a ≥ 1`.

 # Safety
 `out` must be valid for writes.
 */
enum MqStatus mq_state_thermal(double a, uint32_t truncation, struct MqState **out);

/*
 `left ⊗ right`; both handles remain owned by the caller.

 # Safety
 `left` and `right` must be live handles; `out` must be valid for writes.
 */
enum MqStatus mq_state_product(const struct MqState *left,
                               const struct MqState *right,
                               struct MqState **out);

/*
 Parses and validates a JSON state document.

 # Safety
 `json` must be a NUL-terminated string; `out` must be valid for writes.
 */
enum MqStatus mq_state_from_json(const char *json, struct MqState **out);

/*
 Serializes a state to the JSON state-file format. Free the result with
 `mq_string_free`.

 # Safety
 `state` must be a live handle; `out` must be valid for writes.
 */
enum MqStatus mq_state_to_json(const struct MqState *state, char **out);

/*
 Number of modes and per-mode truncation of a state.

 # Safety
 `state` must be a live handle; outputs must be valid for writes.
 */
enum MqStatus mq_state_shape(const struct MqState *state,
                             uint32_t *num_modes,
                             uint32_t *truncation);

/*
 Releases a handle. NULL is ignored.

 # Safety
 `state` must be NULL or a handle not yet freed.
 */
void mq_state_free(struct MqState *state);

/*
 Releases a string returned by this library. NULL is ignored.

 # Safety
 `s` must be NULL or a string returned by this library, not yet freed.
 */
void mq_string_free(char *s);

/*
 Operator-path measures.

 # Safety
 `state` must be a live handle; `out` must be valid for writes.
 */
enum MqStatus mq_measure(const struct MqState *state, struct MqMeasures *out);

/*
 Wigner-grid measures of a single-mode state on a square grid with
 `grid_points` per axis (0 selects 256). Fails with `Consistency` when the
 grid values disagree with the operator path beyond tolerance.

 # Safety
 `state` must be a live handle; `out` must be valid for writes.
 */
enum MqStatus mq_measure_wigner(const struct MqState *state,
                                uint32_t grid_points,
                                struct MqMeasures *out);

/*
 Full JSON report (same layout as the command-line `measure`). Free the
 result with `mq_string_free`.

 # Safety
 `state` must be a live handle; `out` must be valid for writes.
 */
enum MqStatus mq_report_json(const struct MqState *state,
                             enum MqMethod method,
                             uint32_t grid_points,
                             char **out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* MACROQ_H */

#ifndef QAA_H
#define QAA_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum QaaStatus {
  QAA_STATUS_OK = 0,
  QAA_STATUS_NULL_POINTER = 1,
  QAA_STATUS_INVALID_ARGUMENT = 2,
  QAA_STATUS_TOO_MANY_QUBITS = 3,
  QAA_STATUS_INTERNAL = 4,
} QaaStatus;

// Values accepted by `qaa_prep_build`.
typedef enum QaaPrepVariant {
  QAA_PREP_VARIANT_BASIC = 0,
  QAA_PREP_VARIANT_ALTERNATIVE = 1,
  QAA_PREP_VARIANT_IMPROVED = 2,
  QAA_PREP_VARIANT_COMPLEX = 3,
} QaaPrepVariant;

// Opaque circuit handle.
typedef struct QaaCircuit QaaCircuit;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Static description of a status code. Never free the result.
const char *qaa_status_message(enum QaaStatus status);

// State-preparation circuit for `n` data bits. `variant` is a
// `QaaPrepVariant` value.
//
// # Safety
// `out` must be valid for writing one pointer.
enum QaaStatus qaa_prep_build(uint32_t variant, uint32_t n, struct QaaCircuit **out);

// Reciprocal-eigenvalue circuit for the size `2^n - 1` system with
// diagonal `2y`, using the default factor count.
//
// # Safety
// `out` must be valid for writing one pointer.
enum QaaStatus qaa_reciprocal_build(uint32_t n, double y, struct QaaCircuit **out);

// # Safety
// `c` must come from a builder in this library and not be used afterwards.
// Null is ignored.
void qaa_circuit_free(struct QaaCircuit *c);

// # Safety
// `c` must be a live handle and `out` valid for writing.
enum QaaStatus qaa_circuit_num_qubits(const struct QaaCircuit *c, size_t *out);

// Runs the circuit on basis state `basis_index` (qubit 0 is the most
// significant bit) and reads the flagged amplitude. The qubit limit comes
// from `QAA_MAX_QUBITS`.
//
// # Safety
// `c` must be a live handle; `out_re` and `out_im` valid for writing.
enum QaaStatus qaa_circuit_flag_amplitude(const struct QaaCircuit *c,
                                          uint64_t basis_index,
                                          double *out_re,
                                          double *out_im);

// OpenQASM 2.0 text of the circuit.
//
// # Safety
// `c` must be a live handle and `out` valid for writing.
enum QaaStatus qaa_circuit_to_qasm(const struct QaaCircuit *c, char **out);

// Gate and qubit counts as JSON.
//
// # Safety
// `c` must be a live handle and `out` valid for writing.
enum QaaStatus qaa_circuit_resources_json(const struct QaaCircuit *c, char **out);

// # Safety
// `s` must come from this library and not be used afterwards. Null is
// ignored.
void qaa_string_free(char *s);

// Eigenvalue `λ_j = 2y - 2cos(jπ/2^n)` of the size `2^n - 1` system.
//
// # Safety
// `out` must be valid for writing.
enum QaaStatus qaa_toeplitz_eigenvalue(uint32_t n, double y, uint64_t j, double *out);

// Truncated series value approximating `2y/λ_j` with the default factor
// count.
//
// # Safety
// `out` must be valid for writing.
enum QaaStatus qaa_reciprocal_product(uint32_t n, double y, uint64_t j, double *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* QAA_H */

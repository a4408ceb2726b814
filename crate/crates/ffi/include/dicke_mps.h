#ifndef DICKE_MPS_H
#define DICKE_MPS_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>

// Result code of every fallible call.
typedef enum DickeStatus {
  DICKE_STATUS_OK = 0,
  DICKE_STATUS_NULL_POINTER = 1,
  // Arguments outside the domain of the operation.
  DICKE_STATUS_DOMAIN = 2,
  DICKE_STATUS_DIMENSION_MISMATCH = 3,
  DICKE_STATUS_BUFFER_TOO_SMALL = 4,
  // Serialization failure or a caught panic.
  DICKE_STATUS_INTERNAL = 5,
} DickeStatus;

// Matrix product state.
typedef struct DickeChain DickeChain;

// Preparation circuit for a qubit Dicke state.
typedef struct DickeCircuit DickeCircuit;

// Dense amplitude vector.
typedef struct DickeState DickeState;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Copies the last error message of this thread into `buf`. `needed` gets the
// message size including the NUL; 1 when there is no error.
//
// # Safety
// `buf` must be null or valid for `cap` bytes; `needed` must be valid.
enum DickeStatus dicke_last_error_message(char *buf, size_t cap, size_t *needed);

// `|D^n_k>` for `0 <= k <= n`.
//
// # Safety
// `out` must be valid for writes.
enum DickeStatus dicke_state_qubit(size_t n, size_t k, struct DickeState **out);

// Spin-s Dicke state with `two_s = 2s`, `0 <= k <= 2sn`.
//
// # Safety
// `out` must be valid for writes.
enum DickeStatus dicke_state_spin(size_t n, size_t k, size_t two_s, struct DickeState **out);

// Qudit Dicke state with occupation numbers `kvec[0..levels]` summing to `n`.
//
// # Safety
// `kvec` must be valid for `levels` reads; `out` must be valid for writes.
enum DickeStatus dicke_state_qudit(size_t n,
                                   const size_t *kvec,
                                   size_t levels,
                                   struct DickeState **out);

// # Safety
// `state` must be null or a handle from this library, not yet freed.
void dicke_state_free(struct DickeState *state);

// Number of amplitudes `d^n`; 0 for a null handle.
//
// # Safety
// `state` must be null or a live handle.
size_t dicke_state_len(const struct DickeState *state);

// Number of sites; 0 for a null handle.
//
// # Safety
// `state` must be null or a live handle.
size_t dicke_state_sites(const struct DickeState *state);

// Local dimension; 0 for a null handle.
//
// # Safety
// `state` must be null or a live handle.
size_t dicke_state_levels(const struct DickeState *state);

// Copies the amplitudes as `2 * len` interleaved doubles.
//
// # Safety
// `out` must be valid for `cap` doubles.
enum DickeStatus dicke_state_amplitudes(const struct DickeState *state, double *out, size_t cap);

// JSON form `{"n","d","amplitudes":[[re,im],...]}`.
//
// # Safety
// See the module notes on string buffers.
enum DickeStatus dicke_state_to_json(const struct DickeState *state,
                                     char *buf,
                                     size_t cap,
                                     size_t *needed);

// Singular values across the cut after site `cut`, descending. `count`
// receives the number of values, `rank` the number above `tol`.
//
// # Safety
// `values` must be valid for `cap` doubles; `count` and `rank` must be valid.
enum DickeStatus dicke_schmidt_spectrum(const struct DickeState *state,
                                        size_t cut,
                                        double tol,
                                        double *values,
                                        size_t cap,
                                        size_t *count,
                                        size_t *rank);

// Canonical qubit MPS; `strict` selects the strictly canonical tensors.
//
// # Safety
// `out` must be valid for writes.
enum DickeStatus dicke_mps_qubit(size_t n, size_t k, bool strict, struct DickeChain **out);

// # Safety
// `out` must be valid for writes.
enum DickeStatus dicke_mps_spin(size_t n, size_t k, size_t two_s, struct DickeChain **out);

// Translation-invariant chain (not normalized, not canonical).
//
// # Safety
// `out` must be valid for writes.
enum DickeStatus dicke_mps_translation_invariant(size_t n,
                                                 size_t k,
                                                 size_t two_s,
                                                 struct DickeChain **out);

// # Safety
// `kvec` must be valid for `levels` reads; `out` must be valid for writes.
enum DickeStatus dicke_mps_qudit(size_t n,
                                 const size_t *kvec,
                                 size_t levels,
                                 struct DickeChain **out);

// # Safety
// `chain` must be null or a live handle.
void dicke_mps_free(struct DickeChain *chain);

// Bond dimension; 0 for a null handle.
//
// # Safety
// `chain` must be null or a live handle.
size_t dicke_mps_bond_dimension(const struct DickeChain *chain);

// Contracts the chain into a new state handle.
//
// # Safety
// `chain` must be a live handle; `out` must be valid for writes.
enum DickeStatus dicke_mps_contract(const struct DickeChain *chain, struct DickeState **out);

// `max |sum_m A^m^dagger A^m - I|` at 1-based `site`.
//
// # Safety
// `chain` must be a live handle; `out` must be valid for writes.
enum DickeStatus dicke_mps_canonicity_residual(const struct DickeChain *chain,
                                               size_t site,
                                               double *out);

// # Safety
// See the module notes on string buffers.
enum DickeStatus dicke_mps_to_json(const struct DickeChain *chain,
                                   char *buf,
                                   size_t cap,
                                   size_t *needed);

// Preparation circuit for `|D^n_k>`, `0 <= k <= n/2`. `swap_ancilla` selects
// two-level ancilla swaps instead of cyclic increment/decrement.
//
// # Safety
// `out` must be valid for writes.
enum DickeStatus dicke_circuit_build(size_t n,
                                     size_t k,
                                     bool swap_ancilla,
                                     struct DickeCircuit **out);

// # Safety
// `circuit` must be null or a live handle.
void dicke_circuit_free(struct DickeCircuit *circuit);

// Number of gates; 0 for a null handle.
//
// # Safety
// `circuit` must be null or a live handle.
size_t dicke_circuit_gate_count(const struct DickeCircuit *circuit);

// Simulates from `|0>_anc |0...0>`. Writes the fidelity against
// `|k>_anc |D^n_k>` and the norm drift; when `final_state` is non-null it
// receives the system state with the ancilla projected on `|k>`.
//
// # Safety
// `circuit` must be a live handle; `fidelity` and `norm_drift` must be valid;
// `final_state` may be null.
enum DickeStatus dicke_circuit_simulate(const struct DickeCircuit *circuit,
                                        double *fidelity,
                                        double *norm_drift,
                                        struct DickeState **final_state);

// # Safety
// See the module notes on string buffers.
enum DickeStatus dicke_circuit_to_json(const struct DickeCircuit *circuit,
                                       char *buf,
                                       size_t cap,
                                       size_t *needed);

// Schmidt weight `sqrt(C(i,j) C(n-i,k-j) / C(n,k))`.
//
// # Safety
// `out` must be valid for writes.
enum DickeStatus dicke_hypergeom_coeff(size_t n, size_t k, size_t i, size_t j, double *out);

// Qubit tensor element `gamma^{(i)}_{j,m}`.
//
// # Safety
// `out` must be valid for writes.
enum DickeStatus dicke_gamma_qubit(size_t n, size_t k, size_t i, size_t j, size_t m, double *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* DICKE_MPS_H */

#ifndef BIRLIN_H
#define BIRLIN_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum BirlinStatus {
  BIRLIN_STATUS_OK = 0,
  BIRLIN_STATUS_INVALID_INPUT = 1,
  BIRLIN_STATUS_INVARIANT_VIOLATION = 2,
  BIRLIN_STATUS_OVERFLOW = 3,
  BIRLIN_STATUS_NULL_POINTER = 4,
  BIRLIN_STATUS_PANIC = 5,
} BirlinStatus;

/**
 * Opaque descent chain.
 */
typedef struct BirlinChain BirlinChain;

/**
 * Opaque `mu` tree with its fixed-determinant summary.
 */
typedef struct BirlinMu BirlinMu;

/**
 * One descent step, flattened.
 */
typedef struct BirlinStep {
  int64_t alpha_rank;
  int64_t alpha_degree;
  int64_t beta_rank;
  int64_t beta_degree;
  int64_t alpha1_rank;
  int64_t alpha1_degree;
  int64_t h;
  int64_t h1;
  int64_t chi_a1_beta;
  int64_t l;
  int64_t fiber_dim;
} BirlinStep;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the most recent failure on this thread, or null. The pointer
 * stays valid until the next call into the library on this thread.
 */
const char *birlin_last_error_message(void);

/**
 * `chi(beta, alpha)` over a curve of genus `genus`.
 *
 * # Safety
 * `out` must be null or valid for writes.
 */
enum BirlinStatus birlin_euler_chi(int64_t genus,
                                   int64_t beta_rank,
                                   int64_t beta_degree,
                                   int64_t alpha_rank,
                                   int64_t alpha_degree,
                                   int64_t *out);

/**
 * Dimension of the moduli space of stable bundles of type `(rank, degree)`.
 *
 * # Safety
 * `out` must be null or valid for writes.
 */
enum BirlinStatus birlin_moduli_dim(int64_t genus, int64_t rank, int64_t degree, int64_t *out);

/**
 * Dimension of the affine fiber `(r^2 - h^2)(g - 1)`.
 *
 * # Safety
 * `out` must be null or valid for writes.
 */
enum BirlinStatus birlin_affine_dim(int64_t genus, int64_t rank, int64_t degree, int64_t *out);

/**
 * Build and check the descent chain for `(rank, degree)`.
 *
 * # Safety
 * `out` must be null or valid for writes. On success `*out` owns a handle
 * to be released with [`birlin_chain_free`].
 */
enum BirlinStatus birlin_chain_new(int64_t genus,
                                   int64_t rank,
                                   int64_t degree,
                                   struct BirlinChain **out);

/**
 * Number of descent steps; 0 for a null handle.
 *
 * # Safety
 * `chain` must be null or a live handle.
 */
size_t birlin_chain_len(const struct BirlinChain *chain);

/**
 * Copy step `index` into `*out`.
 *
 * # Safety
 * `chain` must be null or a live handle; `out` null or valid for writes.
 */
enum BirlinStatus birlin_chain_step(const struct BirlinChain *chain,
                                    size_t index,
                                    struct BirlinStep *out);

/**
 * Terminal type of the chain and the twist degree reaching `(r, 0)`.
 *
 * # Safety
 * `chain` must be null or a live handle; outputs null or valid for writes.
 */
enum BirlinStatus birlin_chain_terminal(const struct BirlinChain *chain,
                                        int64_t *rank,
                                        int64_t *degree,
                                        int64_t *twist);

/**
 * Versioned JSON rendering of the chain, or null on failure. Release with
 * [`birlin_string_free`].
 *
 * # Safety
 * `chain` must be null or a live handle.
 */
char *birlin_chain_to_json(const struct BirlinChain *chain);

/**
 * # Safety
 * `chain` must be null or a handle from [`birlin_chain_new`] not yet freed.
 */
void birlin_chain_free(struct BirlinChain *chain);

/**
 * Compose and check the `mu` tree for `(rank, degree)`.
 *
 * # Safety
 * `out` must be null or valid for writes. On success `*out` owns a handle
 * to be released with [`birlin_mu_free`].
 */
enum BirlinStatus birlin_mu_new(int64_t genus, int64_t rank, int64_t degree, struct BirlinMu **out);

/**
 * Number of top-level nodes; 0 for a null handle.
 *
 * # Safety
 * `mu` must be null or a live handle.
 */
size_t birlin_mu_node_count(const struct BirlinMu *mu);

/**
 * Fiber dimension of top-level node `index`.
 *
 * # Safety
 * `mu` must be null or a live handle; `out` null or valid for writes.
 */
enum BirlinStatus birlin_mu_node_fiber_dim(const struct BirlinMu *mu, size_t index, int64_t *out);

/**
 * Total fiber dimension; -1 for a null handle.
 *
 * # Safety
 * `mu` must be null or a live handle.
 */
int64_t birlin_mu_total_fiber_dim(const struct BirlinMu *mu);

/**
 * Versioned JSON rendering, or null on failure. Release with
 * [`birlin_string_free`].
 *
 * # Safety
 * `mu` must be null or a live handle.
 */
char *birlin_mu_to_json(const struct BirlinMu *mu);

/**
 * # Safety
 * `mu` must be null or a handle from [`birlin_mu_new`] not yet freed.
 */
void birlin_mu_free(struct BirlinMu *mu);

/**
 * Transport the weight class along the main diagram. `*equal` is set to
 * whether the result matches `psi(rank, degree)`.
 *
 * # Safety
 * `equal` must be null or valid for writes.
 */
enum BirlinStatus birlin_brauer_verify(int64_t genus, int64_t rank, int64_t degree, bool *equal);

/**
 * Release a string returned by this library.
 *
 * # Safety
 * `s` must be null or a pointer returned by a `_to_json` function, not yet
 * freed.
 */
void birlin_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* BIRLIN_H */

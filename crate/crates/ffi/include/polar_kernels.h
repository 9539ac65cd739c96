#ifndef POLAR_KERNELS_H
#define POLAR_KERNELS_H

/* Generated by cbindgen from src/lib.rs; do not edit. */

#include <stddef.h>
#include <stdint.h>

typedef enum PkStatus {
  PK_STATUS_OK = 0,
  PK_STATUS_NULL_POINTER = 1,
  PK_STATUS_INVALID_ARGUMENT = 2,
  PK_STATUS_PARSE = 3,
  // The output buffer is too small; the required size was still written.
  PK_STATUS_BUFFER_TOO_SMALL = 4,
  PK_STATUS_IO = 5,
  // A Rust panic was caught at the boundary.
  PK_STATUS_INTERNAL = 6,
} PkStatus;

// Opaque kernel handle.
typedef struct PkKernel PkKernel;

// The last error message on this thread, or NULL. The pointer stays valid
// until the next failing call on the same thread.
const char *pk_last_error(void);

// Kernel #`index` (1..=4) of the shipped decompositions.
//
// # Safety
// `out` must be valid for writes.
enum PkStatus pk_kernel_known(uint32_t index, struct PkKernel **out);

// The 2×2 kernel (u_1, u_2) ↦ (u_1 ⊕ u_2, u_2).
//
// # Safety
// `out` must be valid for writes.
enum PkStatus pk_kernel_arikan(struct PkKernel **out);

// A kernel from its table: `table[u]` is the image of input `u`, with u_1
// and x_1 in the least significant bits. `len` must be 2^length.
//
// # Safety
// `table` must point to `len` readable values; `out` must be valid for writes.
enum PkStatus pk_kernel_from_table(uint32_t length,
                                   const uint32_t *table,
                                   size_t len,
                                   struct PkKernel **out);

// A kernel from its text form (coset-sum structure or hex table).
//
// # Safety
// `text` must be a NUL-terminated string; `out` must be valid for writes.
enum PkStatus pk_kernel_from_text(const char *text, struct PkKernel **out);

// Releases a handle. NULL is ignored.
//
// # Safety
// `kernel` must come from a `pk_kernel_*` constructor and not be used again.
void pk_kernel_free(struct PkKernel *kernel);

// ℓ, or 0 for NULL.
//
// # Safety
// `kernel` must be NULL or a live handle.
uint32_t pk_kernel_length(const struct PkKernel *kernel);

// g(u).
//
// # Safety
// `kernel` must be a live handle; `out` must be valid for writes.
enum PkStatus pk_kernel_apply(const struct PkKernel *kernel, uint32_t u, uint32_t *out);

// Writes D^{(1)}..D^{(ℓ)} to `out` and ℓ to `written`. Returns
// `BufferTooSmall` (with `written` set) when `capacity` < ℓ.
//
// # Safety
// `kernel` must be a live handle, `out` valid for `capacity` writes and
// `written` valid for one write.
enum PkStatus pk_kernel_partial_distances(const struct PkKernel *kernel,
                                          uint32_t *out,
                                          size_t capacity,
                                          size_t *written);

// E(g) = (1/ℓ) Σ log_ℓ D^{(i)}.
//
// # Safety
// `kernel` must be a live handle; `out` must be valid for writes.
enum PkStatus pk_kernel_exponent(const struct PkKernel *kernel, double *out);

// The kernel's text form as a new string; release it with
// [`pk_string_free`].
//
// # Safety
// `kernel` must be a live handle; `out` must be valid for writes.
enum PkStatus pk_kernel_to_text(const struct PkKernel *kernel, char **out);

// # Safety
// `s` must come from [`pk_kernel_to_text`] and not be used again. NULL is
// ignored.
void pk_string_free(char *s);

// The LP-optimal partial-distance sequence for dimension `length`
// (2..=16) and its exponent. Sequence handling matches
// [`pk_kernel_partial_distances`].
//
// # Safety
// `sequence` must be valid for `capacity` writes; `written` and `exponent`
// for one write each.
enum PkStatus pk_lp_bound(uint32_t length,
                          uint32_t *sequence,
                          size_t capacity,
                          size_t *written,
                          double *exponent);

#endif  /* POLAR_KERNELS_H */

#ifndef PODLES_H
#define PODLES_H

#include <stddef.h>
#include <stdint.h>

// Result code of every fallible call. The first four match the CLI exit codes.
typedef enum PodlesStatus {
  PODLES_STATUS_OK = 0,
  PODLES_STATUS_CHECK_FAILED = 1,
  PODLES_STATUS_INVALID_CONFIG = 2,
  PODLES_STATUS_OVERFLOW = 3,
  PODLES_STATUS_NULL_POINTER = 4,
  PODLES_STATUS_BUFFER_TOO_SMALL = 5,
  PODLES_STATUS_INVALID_ARGUMENT = 6,
  PODLES_STATUS_PANIC = 7,
} PodlesStatus;

// Opaque handle.
typedef struct PodlesTriple PodlesTriple;

// Parameters of one truncated triple.
typedef struct PodlesConfig {
  // Deformation parameter, `0 < q <= 1`.
  double q;
  // Number of spin shells `l = 1/2 .. shells - 1/2`.
  uint32_t shells;
  // Shells excluded from the top of the truncation when checking.
  uint32_t margin;
  // Reality parameter; `p = q` is the equivariant choice.
  double p;
  double z_re;
  double z_im;
  // Residual tolerance for identity checks.
  double tolerance;
} PodlesConfig;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Defaults: `q = 0.5`, 12 shells, margin 2, `p = q`, `z = 1`, tolerance `1e-9`.
struct PodlesConfig podles_config_default(void);

// Library version as a static NUL-terminated string.
const char *podles_version(void);

// Message of the last failure on this thread; valid until the next failing call.
const char *podles_last_error(void);

// Writes the q-number `[x]` to `out`.
//
// # Safety
// `out` must be null or valid for a write of one `double`.
enum PodlesStatus podles_q_number(double q, double x, double *out);

// Builds a triple and stores its handle in `*out`.
//
// # Safety
// `cfg` must be null or point to a valid config; `out` must be null or
// valid for a pointer write.
enum PodlesStatus podles_triple_new(const struct PodlesConfig *cfg, struct PodlesTriple **out);

// Releases a handle; null is ignored.
//
// # Safety
// `triple` must be null or a handle from [`podles_triple_new`] not yet freed.
void podles_triple_free(struct PodlesTriple *triple);

// Hilbert space dimension `2 shells (shells + 1)`, or 0 for a null handle.
//
// # Safety
// `triple` must be null or a live handle.
size_t podles_triple_dim(const struct PodlesTriple *triple);

// Runs the full check suite; returns `CHECK_FAILED` when any check fails.
//
// # Safety
// `triple` must be a live handle; `passed` and `failed` must each be null
// or valid for a `size_t` write.
enum PodlesStatus podles_triple_verify(const struct PodlesTriple *triple,
                                       size_t *passed,
                                       size_t *failed);

// Stores the per-check report as a JSON array in `*out`.
//
// # Safety
// `triple` must be a live handle; `out` must be valid for a pointer write.
enum PodlesStatus podles_triple_report_json(const struct PodlesTriple *triple, char **out);

// Writes the ascending eigenvalues of `D` into `buf`.
//
// `*out_len` always receives the dimension; when `len` is smaller the call
// returns `BUFFER_TOO_SMALL` and writes nothing.
//
// # Safety
// `triple` must be a live handle, `buf` valid for `len` writes, `out_len`
// valid for one write.
enum PodlesStatus podles_triple_spectrum(const struct PodlesTriple *triple,
                                         double *buf,
                                         size_t len,
                                         size_t *out_len);

// Stores operator `name` as `row col re im` lines in `*out`. Names are
// `A`, `B`, `Bstar`, `e`, `f`, `k`, `kinv`, `gamma`, `J`, `D`; `J` is
// exported as the matrix `M` of `psi -> M conj(psi)`.
//
// # Safety
// `triple` must be a live handle, `name` a NUL-terminated string, `out`
// valid for a pointer write.
enum PodlesStatus podles_triple_export(const struct PodlesTriple *triple,
                                       const char *name,
                                       char **out);

// Releases a string returned by this library; null is ignored.
//
// # Safety
// `s` must be null or a string from this library not yet freed.
void podles_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* PODLES_H */

#ifndef TORUS_MIRROR_H
#define TORUS_MIRROR_H

/* Generated by cbindgen from src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/*
 Result codes.
 */
typedef enum TmStatus {
  TM_STATUS_OK = 0,
  /*
   A required pointer argument was null.
   */
  TM_STATUS_NULL_POINTER = 1,
  /*
   A string argument was not valid UTF-8.
   */
  TM_STATUS_INVALID_UTF8 = 2,
  TM_STATUS_INPUT = 3,
  TM_STATUS_VALIDATION = 4,
  TM_STATUS_CONVERGENCE = 5,
  TM_STATUS_PRECISION = 6,
  TM_STATUS_MISUSE = 7,
  TM_STATUS_UNSUPPORTED = 8,
  TM_STATUS_SINGULAR = 9,
  TM_STATUS_DEGENERATE = 10,
  /*
   An output buffer is too small; the required length has been written.
   */
  TM_STATUS_BUFFER_TOO_SMALL = 11,
  /*
   An internal panic was caught at the boundary.
   */
  TM_STATUS_PANIC = 12,
} TmStatus;

/*
 Relations found in one degree.
 */
typedef struct TmRelationSet TmRelationSet;

/*
 A graded ring with cached structure constants.
 */
typedef struct TmRing TmRing;

/*
 A parsed torus specification.
 */
typedef struct TmSpec TmSpec;

/*
 Series truncation controls.
 */
typedef struct TmParams {
  double tol;
  uint32_t max_radius;
} TmParams;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/*
 Message of the last failed call on this thread, or null. The pointer
 stays valid until the next call into the library on the same thread.
 */
const char *tm_last_error(void);

/*
 Default truncation: `tol = 1e-14`, `max_radius = 64`.
 */
struct TmParams tm_params_default(void);

/*
 Releases a string returned by the library.

 # Safety
 `s` must be null or a pointer obtained from this library.
 */
void tm_string_free(char *s);

/*
 Parses spec text in the `key = value` grammar.

 # Safety
 `text` must be a nul-terminated string; `out` must be writable.
 */
enum TmStatus tm_spec_parse(const char *text, struct TmSpec **out);

/*
 Loads a built-in spec by name.

 # Safety
 `name` must be a nul-terminated string; `out` must be writable.
 */
enum TmStatus tm_spec_builtin(const char *name, struct TmSpec **out);

/*
 # Safety
 `spec` must be null or a handle from this library, not yet freed.
 */
void tm_spec_free(struct TmSpec *spec);

/*
 # Safety
 `spec` must be a live handle; `out` must be writable.
 */
enum TmStatus tm_spec_dim(const struct TmSpec *spec, uintptr_t *out);

/*
 Writes 1 to `passed` if every required torus condition holds, else 0.
 A newline-separated summary is available through `summary` when it is
 not null.

 # Safety
 `spec` must be a live handle; `passed` must be writable; `summary` may be null.
 */
enum TmStatus tm_spec_validate(const struct TmSpec *spec, int *passed, char **summary);

/*
 SHA-256 fingerprint of the canonical spec text, as hex.

 # Safety
 `spec` must be a live handle; `out` must be writable.
 */
enum TmStatus tm_spec_fingerprint(const struct TmSpec *spec, char **out);

/*
 Number of level-`k` classes, or of involution orbits when `invariant` is nonzero.

 # Safety
 `spec` must be a live handle; `out` must be writable.
 */
enum TmStatus tm_basis_count(const struct TmSpec *spec, uint32_t k, int invariant, uintptr_t *out);

/*
 `A^[kappa]_c` for a class vector `c` of length `len`.

 # Safety
 `spec` must be a live handle; `c` must point to `len` doubles; `re`, `im` must be writable.
 */
enum TmStatus tm_structure_coefficient(const struct TmSpec *spec,
                                       double kappa,
                                       const double *c,
                                       uintptr_t len,
                                       struct TmParams params,
                                       double *re,
                                       double *im);

/*
 Builds the ring of a validated spec. The spec handle is not consumed.

 # Safety
 `spec` must be a live handle; `out` must be writable.
 */
enum TmStatus tm_ring_new(const struct TmSpec *spec, struct TmParams params, struct TmRing **out);

/*
 # Safety
 `ring` must be null or a handle from this library, not yet freed.
 */
void tm_ring_free(struct TmRing *ring);

/*
 Number of classes at level `k`, the length of product outputs at that level.

 # Safety
 `ring` must be a live handle; `out` must be writable.
 */
enum TmStatus tm_ring_class_count(const struct TmRing *ring, uint32_t k, uintptr_t *out);

/*
 Product of basis class `i` at level `k1` with basis class `j` at level
 `k2`. Writes the `n` class coefficients at level `k1 + k2` into `out` as
 interleaved `(re, im)` pairs; `out_len` is the buffer length in doubles
 and must be at least `2 n`. `written` receives `2 n` in all cases where
 the product was computed.

 # Safety
 `ring` must be a live handle; `out` must point to `out_len` doubles; `written` must be writable.
 */
enum TmStatus tm_ring_product(const struct TmRing *ring,
                              uint32_t k1,
                              uintptr_t i,
                              uint32_t k2,
                              uintptr_t j,
                              double *out,
                              uintptr_t out_len,
                              uintptr_t *written);

/*
 Relations of degree `degree` among the degree-one generators.

 # Safety
 `ring` must be a live handle; `out` must be writable.
 */
enum TmStatus tm_ring_relations(const struct TmRing *ring,
                                uint32_t degree,
                                int commutative,
                                double svd_tol,
                                struct TmRelationSet **out);

/*
 # Safety
 `set` must be a live handle; `out` must be writable.
 */
enum TmStatus tm_relations_count(const struct TmRelationSet *set, uintptr_t *out);

/*
 The relation set as JSON.

 # Safety
 `set` must be a live handle; `out` must be writable.
 */
enum TmStatus tm_relations_to_json(const struct TmRelationSet *set, char **out);

/*
 # Safety
 `set` must be null or a handle from this library, not yet freed.
 */
void tm_relations_free(struct TmRelationSet *set);

/*
 Runs one verification suite with its default parameters (`tau = i`,
 `b = 0.3` for sklyanin, `(i, 1.3i, 0.1i)` for kummer, six terms for
 jseries) and returns the JSON report. `passed` receives 1 if every check
 passed.

 Families: `hesse`, `sklyanin`, `quasihomogeneous`, `veronese`, `kummer`,
 `jseries`.

 # Safety
 `family` must be a nul-terminated string; `json` and `passed` must be writable.
 */
enum TmStatus tm_verify_family(const char *family,
                               struct TmParams params,
                               double svd_tol,
                               char **json,
                               int *passed);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* TORUS_MIRROR_H */

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#ifndef SUSY_GRAPH_H
#define SUSY_GRAPH_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum SgStatus {
  SG_STATUS_OK = 0,
  SG_STATUS_NULL_POINTER = 1,
  SG_STATUS_INVALID_UTF8 = 2,
  SG_STATUS_PARSE_ERROR = 3,
  SG_STATUS_DOMAIN_ERROR = 4,
  SG_STATUS_BUFFER_TOO_SMALL = 5,
  SG_STATUS_PANIC = 6,
} SgStatus;

/**
 * Operators accepted by `sg_spectrum`.
 */
typedef enum SgOperator {
  SG_OPERATOR_EVEN = 0,
  SG_OPERATOR_ODD = 1,
  SG_OPERATOR_SUSY = 2,
  SG_OPERATOR_DIRAC = 3,
} SgOperator;

/**
 * Opaque graph handle.
 */
typedef struct SgGraph SgGraph;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failure on this thread, or null. The pointer stays
 * valid until the next call into this library from the same thread.
 */
const char *sg_last_error_message(void);

/**
 * Library version as a static NUL-terminated string.
 */
const char *sg_version(void);

/**
 * Parses a graph from canonical JSON. On success `*out` owns a handle that
 * must be released with `sg_graph_free`.
 *
 * # Safety
 * `json` must be a valid NUL-terminated string and `out` a valid pointer.
 */
enum SgStatus sg_graph_from_json(const char *json, struct SgGraph **out);

/**
 * Parses a graph from the line-based text format (`tail head [id]`).
 *
 * # Safety
 * `text` must be a valid NUL-terminated string and `out` a valid pointer.
 */
enum SgStatus sg_graph_from_text(const char *text, struct SgGraph **out);

/**
 * Releases a graph handle. Null is ignored.
 *
 * # Safety
 * `g` must be null or a handle from this library that was not freed yet.
 */
void sg_graph_free(struct SgGraph *g);

/**
 * # Safety
 * `g` must be a live handle and `out` a valid pointer.
 */
enum SgStatus sg_graph_vertex_count(const struct SgGraph *g, size_t *out);

/**
 * # Safety
 * `g` must be a live handle and `out` a valid pointer.
 */
enum SgStatus sg_graph_edge_count(const struct SgGraph *g, size_t *out);

/**
 * Serializes the graph to canonical JSON. Free the result with
 * `sg_string_free`.
 *
 * # Safety
 * `g` must be a live handle and `out` a valid pointer.
 */
enum SgStatus sg_graph_to_json(const struct SgGraph *g, char **out);

/**
 * Releases a string returned by this library. Null is ignored.
 *
 * # Safety
 * `s` must be null or a string from this library that was not freed yet.
 */
void sg_string_free(char *s);

/**
 * Witten index, cross-checked across all routes at the default inverse
 * temperatures.
 *
 * # Safety
 * `g` must be a live handle and `out` a valid pointer.
 */
enum SgStatus sg_witten_index(const struct SgGraph *g, int64_t *out);

/**
 * `b0` (components) and `b1` (independent cycles) from the Laplacian kernels.
 *
 * # Safety
 * `g` must be a live handle; `b0` and `b1` valid pointers.
 */
enum SgStatus sg_betti_numbers(const struct SgGraph *g, size_t *b0, size_t *b1);

/**
 * Whether neither sector has a zero mode.
 *
 * # Safety
 * `g` must be a live handle and `out` a valid pointer.
 */
enum SgStatus sg_is_susy_broken(const struct SgGraph *g, bool *out);

/**
 * Ascending eigenvalues of an operator, written to `buf`.
 *
 * `*len` receives the number of eigenvalues. If `capacity` is too small
 * nothing is written and `SG_STATUS_BUFFER_TOO_SMALL` is returned, so a
 * call with `capacity = 0` queries the size.
 *
 * # Safety
 * `g` must be a live handle, `len` a valid pointer and `buf` valid for
 * `capacity` writes (it may be null when `capacity` is 0).
 */
enum SgStatus sg_spectrum(const struct SgGraph *g,
                          enum SgOperator op,
                          double *buf,
                          size_t capacity,
                          size_t *len);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* SUSY_GRAPH_H */

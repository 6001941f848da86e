#ifndef NERVELAB_H
#define NERVELAB_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status codes returned by every entry point.
 */
typedef enum nl_status_t {
  /**
   * Success.
   */
  NL_OK = 0,
  /**
   * A pointer argument was null or an argument was out of range.
   */
  NL_INVALID_ARGUMENT = 1,
  /**
   * Input text was not valid UTF-8 or failed to parse.
   */
  NL_PARSE_ERROR = 2,
  /**
   * The computation itself reported an error.
   */
  NL_COMPUTE_ERROR = 3,
  /**
   * A panic was caught at the boundary; the handle state is unchanged.
   */
  NL_INTERNAL_ERROR = 4,
} nl_status_t;

/**
 * A finite simplicial complex.
 */
typedef struct nl_complex_t nl_complex_t;

/**
 * A complex together with vertex values and their codomain.
 */
typedef struct nl_instance_t nl_instance_t;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the most recent failure on this thread. The pointer stays
 * valid until the next failing call on the same thread; do not free it.
 */
const char *nl_last_error(void);

/**
 * Releases a string produced by this library. Null is a no-op.
 */
void nl_string_free(char *s);

/**
 * Parses a complex from its JSON encoding into a new handle.
 *
 * # Safety
 * `json` must be a NUL-terminated string and `out` a valid pointer.
 */
enum nl_status_t nl_complex_from_json(const char *json, struct nl_complex_t **out);

/**
 * Releases a complex handle. Null is a no-op.
 *
 * # Safety
 * `handle` must come from `nl_complex_from_json` and not be freed twice.
 */
void nl_complex_free(struct nl_complex_t *handle);

/**
 * Number of simplices of dimension `k`.
 *
 * # Safety
 * `handle` and `out` must be valid pointers.
 */
enum nl_status_t nl_complex_size(const struct nl_complex_t *handle, size_t k, size_t *out);

/**
 * Betti number of the complex in dimension `k`, with Z/2 coefficients.
 *
 * # Safety
 * `handle` and `out` must be valid pointers.
 */
enum nl_status_t nl_complex_betti(const struct nl_complex_t *handle, size_t k, size_t *out);

/**
 * Builds an instance (complex, vertex values, codomain) from JSON. The
 * function document uses the same shape as the command-line tool: a
 * `values` object plus an optional `codomain`; without one, the real
 * codomain is inferred from the value range.
 *
 * # Safety
 * All pointers must be valid; the strings NUL-terminated.
 */
enum nl_status_t nl_instance_new(const char *complex_json,
                                 const char *function_json,
                                 struct nl_instance_t **out);

/**
 * Releases an instance handle. Null is a no-op.
 *
 * # Safety
 * `handle` must come from `nl_instance_new` and not be freed twice.
 */
void nl_instance_free(struct nl_instance_t *handle);

/**
 * Runs the mapper construction against a cover (JSON, same shape as the
 * command-line tool) and returns the nerve as a JSON document.
 *
 * # Safety
 * All pointers must be valid; the strings NUL-terminated.
 */
enum nl_status_t nl_mapper_nerve_json(const struct nl_instance_t *handle,
                                      const char *cover_json,
                                      size_t dim_cap,
                                      char **out);

/**
 * Computes the pulled-back path metric on the instance and returns it as
 * CSV. `exact` selects exhaustive path optimization; otherwise a
 * 2-approximation is used.
 *
 * # Safety
 * All pointers must be valid.
 */
enum nl_status_t nl_df_metric_csv(const struct nl_instance_t *handle, bool exact, char **out);

/**
 * Minimal-size generating cycles of first homology under the instance
 * path metric, as a JSON document. `exact` selects provably minimal sizes.
 *
 * # Safety
 * All pointers must be valid.
 */
enum nl_status_t nl_generator_basis_json(const struct nl_instance_t *handle,
                                         bool exact,
                                         char **out);

/**
 * The Reeb graph of the instance in DOT format. Fails unless the values
 * are real-valued.
 *
 * # Safety
 * All pointers must be valid.
 */
enum nl_status_t nl_reeb_dot(const struct nl_instance_t *handle, char **out);

/**
 * Persistence diagram of the Cech filtration of a finite pseudometric
 * (CSV, same shape as the command-line tool) in dimension `k`, returned
 * as diagram CSV.
 *
 * # Safety
 * All pointers must be valid; the string NUL-terminated.
 */
enum nl_status_t nl_cech_diagram_csv(const char *metric_csv, size_t k, char **out);

/**
 * Bottleneck distance between two diagrams given as diagram CSV. The
 * result may be infinity when essential class counts differ.
 *
 * # Safety
 * All pointers must be valid; the strings NUL-terminated.
 */
enum nl_status_t nl_bottleneck(const char *left_csv, const char *right_csv, double *out);

#ifdef __cplusplus
} // extern "C"
#endif // __cplusplus

#endif /* NERVELAB_H */

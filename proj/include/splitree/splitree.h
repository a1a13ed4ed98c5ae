#ifndef SPLITREE_SPLITREE_H
#define SPLITREE_SPLITREE_H

/*
 * C interface to the splitting-tree library.
 *
 * Every fallible call returns a splitree_status; on failure the message is
 * available from splitree_last_error() on the same thread. Exact values are
 * returned as strings "p/q", high precision values as fixed-point decimal
 * strings. Strings returned through char** are freed with
 * splitree_string_free; tables with splitree_table_destroy. Cell strings stay
 * valid until their table is destroyed.
 *
 * Objects are not synchronized: use one context per thread.
 */

#include <stddef.h>
#include <stdint.h>

#if defined(SPLITREE_BUILDING_LIBRARY)
#define SPLITREE_API __attribute__((visibility("default")))
#else
#define SPLITREE_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum splitree_status {
    SPLITREE_OK = 0,
    SPLITREE_INVALID_ARGUMENT = 1,
    SPLITREE_UNSUPPORTED_VARIANT = 2,
    SPLITREE_EXACT_LIMIT_EXCEEDED = 3,
    SPLITREE_DOMAIN_ERROR = 4,
    SPLITREE_SCRIPT_EXHAUSTED = 5,
    SPLITREE_SCRIPT_LENGTH_MISMATCH = 6,
    SPLITREE_DEPTH_CAP_EXCEEDED = 7,
    SPLITREE_PRECISION_UNACHIEVABLE = 8,
    SPLITREE_NO_ROOT_FOUND = 9,
    SPLITREE_NON_CONVERGENCE = 10,
    SPLITREE_INTERNAL_ERROR = 99
} splitree_status;

typedef enum splitree_variant {
    SPLITREE_CONFLICT = 0,
    SPLITREE_ELECTION_HEIGHT = 1,
    SPLITREE_ELECTION_SIZE = 2,
    SPLITREE_DRAW_HEIGHT = 3,
    SPLITREE_DRAW_SIZE = 4,
    SPLITREE_COIN_TOSS = 5,
    SPLITREE_MAX_FIND = 6,
    SPLITREE_MAX_FIND_REVISED = 7,
    SPLITREE_SORT = 8
} splitree_variant;

typedef struct splitree_context splitree_context;
typedef struct splitree_table splitree_table;

SPLITREE_API const char* splitree_version(void);
SPLITREE_API const char* splitree_status_name(splitree_status status);
/* Message of the last failed call on this thread, "" if none. */
SPLITREE_API const char* splitree_last_error(void);
SPLITREE_API void splitree_string_free(char* text);

/* Names as on the command line: conflict, height, size, draw-height,
 * draw-size, coin, max, maxrev, sort. */
SPLITREE_API splitree_status splitree_variant_parse(const char* name, splitree_variant* out);
SPLITREE_API const char* splitree_variant_name(splitree_variant variant);

/* Context: precision (significant digits of decimal output, default 50),
 * exact limit (largest n for exact tables, default 512), simulation
 * threads (0 = hardware concurrency) and depth cap (default 1000000). */
SPLITREE_API splitree_status splitree_context_create(splitree_context** out);
SPLITREE_API void splitree_context_destroy(splitree_context* context);
SPLITREE_API splitree_status splitree_context_set_precision(splitree_context* context, unsigned digits);
SPLITREE_API unsigned splitree_context_precision(const splitree_context* context);
SPLITREE_API splitree_status splitree_context_set_exact_limit(splitree_context* context, unsigned limit);
SPLITREE_API splitree_status splitree_context_set_threads(splitree_context* context, unsigned threads);
SPLITREE_API splitree_status splitree_context_set_depth_cap(splitree_context* context, uint64_t depth);

SPLITREE_API size_t splitree_table_rows(const splitree_table* table);
SPLITREE_API size_t splitree_table_columns(const splitree_table* table);
/* NULL when out of range. */
SPLITREE_API const char* splitree_table_column_name(const splitree_table* table, size_t column);
SPLITREE_API const char* splitree_table_cell(const splitree_table* table, size_t row, size_t column);
SPLITREE_API void splitree_table_destroy(splitree_table* table);

/* Exact moments. Columns n, g, h, var; for sort n, xi, eta, var. */
SPLITREE_API splitree_status splitree_moment_table(splitree_context* context,
                                                   splitree_variant variant,
                                                   unsigned n_max,
                                                   splitree_table** out);

/* f_n(z) (psi_n(z) for sort) at rational z given as "p/q", exact. */
SPLITREE_API splitree_status splitree_pgf_eval(splitree_context* context,
                                               splitree_variant variant,
                                               unsigned n,
                                               const char* z,
                                               char** out);

SPLITREE_API splitree_status splitree_conflict_mean_series(splitree_context* context,
                                                           unsigned n,
                                                           const char* tol,
                                                           char** out);

/* One scripted trial. The script is the concatenation of one toss vector
 * per split (bits 0 = tail, 1 = head), lengths[i] giving the size of
 * vector i. trace may be NULL; otherwise it receives columns id, parent
 * (empty for the root), items (space separated) and label. */
SPLITREE_API splitree_status splitree_run_scripted_trial(splitree_context* context,
                                                         splitree_variant variant,
                                                         unsigned n,
                                                         const uint8_t* bits,
                                                         const size_t* lengths,
                                                         size_t splits,
                                                         uint64_t* statistic,
                                                         splitree_table** trace);

/* One seeded trial, coins from (seed, stream). */
SPLITREE_API splitree_status splitree_run_seeded_trial(splitree_context* context,
                                                       splitree_variant variant,
                                                       unsigned n,
                                                       uint64_t seed,
                                                       uint64_t stream,
                                                       uint64_t* statistic,
                                                       splitree_table** trace);

/* One-row table: variant, n, trials, seed, mean, sample_variance,
 * std_error, hypothesis ("true" for maxrev). */
SPLITREE_API splitree_status splitree_estimate(splitree_context* context,
                                               splitree_variant variant,
                                               unsigned n,
                                               uint64_t trials,
                                               uint64_t seed,
                                               splitree_table** out);

/* One-row table: n, trials, seed, height_mean, height_sample_variance,
 * height_std_error, size_mean, size_sample_variance, size_std_error,
 * covariance, covariance_std_error. */
SPLITREE_API splitree_status splitree_estimate_joint_election(splitree_context* context,
                                                              unsigned n,
                                                              uint64_t trials,
                                                              uint64_t seed,
                                                              splitree_table** out);

/* Asymptotic constants, indexed 0 .. splitree_constant_count() - 1. */
SPLITREE_API size_t splitree_constant_count(void);
SPLITREE_API const char* splitree_constant_name(size_t index);
SPLITREE_API const char* splitree_constant_published(size_t index);
SPLITREE_API unsigned splitree_constant_achievable_digits(size_t index);
/* Value of a named constant to the given significant digits. */
SPLITREE_API splitree_status splitree_constant(splitree_context* context,
                                               const char* name,
                                               unsigned digits,
                                               char** out);
/* 2 - (ln pi - gamma + pi^2 / divisor) / ln 2. */
SPLITREE_API splitree_status splitree_draw_size_offset_with(splitree_context* context,
                                                            unsigned divisor,
                                                            char** out);

SPLITREE_API splitree_status splitree_asymptotic_prediction(splitree_context* context,
                                                            splitree_variant variant,
                                                            unsigned n,
                                                            char** out);

/* Columns n, mean, prediction, residual. */
SPLITREE_API splitree_status splitree_residual_profile(splitree_context* context,
                                                       splitree_variant variant,
                                                       const unsigned* n_list,
                                                       size_t count,
                                                       splitree_table** out);

/* Throughput equation for q-ary splitting. k_max 0 means the default 200. */
SPLITREE_API splitree_status splitree_equation_residual(splitree_context* context,
                                                        unsigned q,
                                                        const char* lambda,
                                                        const char* tol,
                                                        unsigned k_max,
                                                        char** out);

/* brackets may be NULL; otherwise columns lower, upper, selected. */
SPLITREE_API splitree_status splitree_lambda_critical(splitree_context* context,
                                                      unsigned q,
                                                      const char* tol,
                                                      unsigned k_max,
                                                      char** root,
                                                      splitree_table** brackets);

SPLITREE_API splitree_status splitree_blocked_lambda(splitree_context* context, unsigned q, char** out);

/* Columns check, variant, n, expected, observed, statistic, bound, passed. */
SPLITREE_API splitree_status splitree_validate(splitree_context* context,
                                               unsigned n_max,
                                               uint64_t trials,
                                               uint64_t seed,
                                               splitree_table** report,
                                               size_t* failures);

#ifdef __cplusplus
}
#endif

#endif

#ifndef ROTABLUE_H
#define ROTABLUE_H

/*
 * rotablue — optimal recursive estimation for rotation panel surveys.
 *
 * C interface to the analysis core. All functions return an rb_status;
 * outputs are written through pointers. Handles are opaque and must be
 * released with the matching *_free function. Strings returned through
 * char** are heap-allocated and must be released with rb_string_free.
 *
 * On failure, rb_last_error() returns a thread-local description of the
 * most recent error raised on the calling thread.
 */

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum rb_status {
    RB_OK = 0,
    RB_ERR_ARGUMENT = 1,       /* bad pattern / rho / option / usage */
    RB_ERR_ASSUMPTION_ONE = 2, /* characteristic roots unusable */
    RB_ERR_ASSUMPTION_TWO = 3, /* multiplier system rank-deficient */
    RB_ERR_NUMERIC = 4,        /* residual or convergence failure */
    RB_ERR_VERIFY = 5,         /* a verification or simulation gate failed */
    RB_ERR_NULLPTR = 6         /* required pointer argument was NULL */
} rb_status;

/* Tolerance overrides; a zero field selects the built-in default
 * (tol_root 1e-8, tol_rank 1e-10). Pass NULL for all defaults. */
typedef struct rb_options {
    double tol_root;
    double tol_rank;
} rb_options;

typedef struct rb_solution rb_solution;
typedef struct rb_estimator rb_estimator;

/* Library version as "major.minor.patch". */
const char* rb_version(void);

/* Enumerator name for a status code, e.g. "RB_ERR_ARGUMENT". */
const char* rb_status_name(rb_status status);

/* Thread-local message describing the last error on this thread. */
const char* rb_last_error(void);

/* Validate a cascade pattern string ('1'/'0' bits, both endpoints '1'). */
rb_status rb_pattern_check(const char* pattern);

/* Dimensions of a pattern without analyzing it: slots N, in-sample slots n,
 * recursion order p, gap slot count h. Any output pointer may be NULL. */
rb_status rb_pattern_dims(const char* pattern, int* N, int* n, int* p, int* h);

/* Expand a dash-separated scheme alias such as "4-8-4" into a pattern
 * string ("1111000000001111"). buf receives a NUL-terminated string. */
rb_status rb_scheme_expand(const char* scheme, char* buf, size_t buflen);

/*
 * Analyze a (pattern, rho) pair: characteristic polynomial, roots,
 * recursion coefficients a_1..a_p, weight vectors r_0..r_p, variance.
 *
 * On RB_OK *out holds a complete solution. On RB_ERR_ASSUMPTION_ONE or
 * RB_ERR_ASSUMPTION_TWO *out holds a partial solution carrying the values
 * computed up to the failure point (callers must still free it). On any
 * other status *out is NULL.
 */
rb_status rb_analyze(const char* pattern, double rho, const rb_options* opts,
                     rb_solution** out);

/* Rebuild a solution from its JSON rendering. Restored solutions render
 * and drive estimators; verification requires a freshly analyzed one. */
rb_status rb_solution_parse(const char* json_text, rb_solution** out);

void rb_solution_free(rb_solution* sol);

/* Pattern dimensions: slots N, in-sample slots n, recursion order p,
 * gap slot count h. Any output pointer may be NULL. */
rb_status rb_solution_dims(const rb_solution* sol, int* N, int* n, int* p, int* h);

/* 1 if the solution carries the full recursion (both assumptions hold). */
int rb_solution_complete(const rb_solution* sol);

/* which = 1 or 2. Returns 1 = pass, 0 = fail, -1 = not evaluated. */
int rb_solution_assumption(const rb_solution* sol, int which);

/* Variance of the stationary estimator, in (0, 1]. */
rb_status rb_solution_variance(const rb_solution* sol, double* out);

/* Recursion coefficient a_k, k = 1..p. */
rb_status rb_solution_coeff_a(const rb_solution* sol, int k, double* out);

/* Weight entry r_i[slot], i = 0..p, slot = 1..N. */
rb_status rb_solution_r(const rb_solution* sol, int i, int slot, double* out);

/* Characteristic root x_m and unit-disk root d_m, m = 1..p. */
rb_status rb_solution_root(const rb_solution* sol, int m, double* re, double* im);
rb_status rb_solution_unit_root(const rb_solution* sol, int m, double* re, double* im);

/* Occasions until the direct weight expansion decays below 1e-12;
 * -1 if the solution is not complete. */
int rb_solution_truncation(const rb_solution* sol);

/* Render as "json", "csv", or "pretty". *out must be rb_string_free'd. */
rb_status rb_solution_render(const rb_solution* sol, const char* format, char** out);

void rb_string_free(char* text);

/*
 * Streaming estimator. Feed one occasion at a time: `occasion` holds N
 * values ordered oldest slot first; entries at gap slots are ignored
 * (they may be NaN). Returns the current mean estimate through *estimate.
 */
rb_status rb_estimator_new(const rb_solution* sol, rb_estimator** out);
rb_status rb_estimator_feed(rb_estimator* est, const double* occasion, size_t len,
                            double* estimate);
void rb_estimator_free(rb_estimator* est);

/*
 * Full verification: finite-horizon comparison at `horizon` occasions
 * (<= 0 selects the default) plus the internal identity suite.
 * `corrupt_a1` perturbs the leading recursion coefficient before the
 * comparison — a self-test hook; pass 0 for a genuine run. Writes the
 * report in `format` and returns RB_OK on PASS, RB_ERR_VERIFY on FAIL
 * (the report is still written).
 */
rb_status rb_verify(const char* pattern, double rho, int horizon, double corrupt_a1,
                    const rb_options* opts, const char* format, char** report);

/*
 * Monte Carlo check of the estimator variance: `replications` panels of
 * `occasions` occasions (<= 0 selects the default length) from the
 * autoregressive panel model, seeded deterministically. Writes the report
 * in `format`; returns RB_OK on PASS, RB_ERR_VERIFY when the empirical
 * variance misses the theoretical value by more than three standard
 * errors (the report is still written).
 */
rb_status rb_simulate(const char* pattern, double rho, int occasions, int replications,
                      uint64_t seed, const rb_options* opts, const char* format,
                      char** report);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* ROTABLUE_H */

#ifndef WKAM_WKAM_H
#define WKAM_WKAM_H

/* C interface to the weak KAM solver library.
 *
 * Every function returns a wkam_status. On failure wkam_last_error() gives a
 * message for the calling thread, valid until the next call on that thread.
 * Objects are opaque handles released with the matching *_free function;
 * strings returned through char** are released with wkam_string_free.
 * Configurations are passed as arrays of n reals, curves as row-major
 * (knots x n) lifted reals plus a times array. */

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(WKAM_BUILDING_LIBRARY)
#    define WKAM_API __declspec(dllexport)
#  else
#    define WKAM_API __declspec(dllimport)
#  endif
#else
#  define WKAM_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum wkam_status {
    WKAM_OK = 0,
    WKAM_INVALID_ARGUMENT = 1,
    WKAM_DIMENSION_MISMATCH = 2,
    WKAM_CAPACITY = 3,
    WKAM_UNSAFE_PRUNE = 4,
    WKAM_NOT_CONVERGED = 5,
    WKAM_NUMERIC = 6,
    WKAM_IO = 7,
    WKAM_INTERNAL = 99
} wkam_status;

typedef struct wkam_potential wkam_potential;
typedef struct wkam_space wkam_space;
typedef struct wkam_solution wkam_solution;
typedef struct wkam_curve wkam_curve;

WKAM_API const char* wkam_last_error(void);
WKAM_API const char* wkam_version(void);
WKAM_API void wkam_string_free(char* s);

/* geometry */
WKAM_API wkam_status wkam_canonicalize(const double* points, size_t n, double* out);
WKAM_API wkam_status wkam_config_dist(const double* a, const double* b, size_t n, double* out);
/* assignment[i] and lifts[i] describe where a[i] is sent; arrays of n. */
WKAM_API wkam_status wkam_match(const double* a, const double* b, size_t n, size_t* assignment, int64_t* lifts,
                                size_t* offset, double* cost);

/* potentials: JSON spec, e.g. {"kind":"one_body","builtin":"cosine"} */
WKAM_API wkam_status wkam_potential_from_json(const char* spec, wkam_potential** out);
WKAM_API wkam_status wkam_potential_to_json(const wkam_potential* w, char** out);
WKAM_API wkam_status wkam_potential_eval(const wkam_potential* w, const double* points, size_t n, double* out);
WKAM_API wkam_status wkam_potential_grad(const wkam_potential* w, const double* reals, size_t n, double* out);
WKAM_API wkam_status wkam_potential_bound(const wkam_potential* w, double* out);
WKAM_API void wkam_potential_free(wkam_potential* w);

/* curves and actions */
WKAM_API wkam_status wkam_curve_create(const double* times, const double* reals, size_t knots, size_t n,
                                       wkam_curve** out);
WKAM_API wkam_status wkam_curve_shape(const wkam_curve* c, size_t* knots, size_t* n);
/* times: knots entries; reals: knots * n entries. Either may be NULL. */
WKAM_API wkam_status wkam_curve_data(const wkam_curve* c, double* times, double* reals);
WKAM_API wkam_status wkam_curve_action(const wkam_curve* c, const wkam_potential* w, double* kinetic,
                                       double* potential_integral, double* total);
WKAM_API wkam_status wkam_curve_holder(const wkam_curve* c, double* k1, double* worst_slack, size_t* violations);
/* energy: one entry per segment, 0.5 |v|^2 + W(midpoint). */
WKAM_API wkam_status wkam_curve_energy(const wkam_curve* c, const wkam_potential* w, double* energy);
WKAM_API wkam_status wkam_curve_to_csv(const wkam_curve* c, char** out);
WKAM_API void wkam_curve_free(wkam_curve* c);

WKAM_API wkam_status wkam_line_curve(const double* m, const double* n_cfg, size_t n, double duration,
                                     size_t segments, wkam_curve** out);
WKAM_API wkam_status wkam_tonelli_upper_bound(const double* m, const double* n_cfg, size_t n, double duration,
                                              const wkam_potential* w, double* out);

typedef struct wkam_minimize_options {
    size_t segments;
    size_t restarts;
    double tol;
    size_t max_iters;
    uint64_t seed;
    size_t max_classes;
} wkam_minimize_options;

typedef struct wkam_minimize_info {
    double value;
    double grad_norm;
    size_t iterations;
    size_t classes_in_budget;
    size_t classes_optimized;
    int converged;
    int enumeration_complete;
} wkam_minimize_info;

WKAM_API void wkam_minimize_options_default(wkam_minimize_options* opts);
/* opts may be NULL for defaults. */
WKAM_API wkam_status wkam_minimize(const double* m, const double* n_cfg, size_t n, double duration,
                                   const wkam_potential* w, const wkam_minimize_options* opts, wkam_curve** curve,
                                   wkam_minimize_info* info);
WKAM_API wkam_status wkam_dp_minimize(const double* m, const double* n_cfg, size_t n, double duration,
                                      const wkam_potential* w, size_t cells, size_t steps, double* value,
                                      wkam_curve** curve);

/* grid state spaces and the one-step operator */
WKAM_API wkam_status wkam_space_create(size_t n, size_t m, size_t max_states, wkam_space** out);
WKAM_API size_t wkam_space_size(const wkam_space* s);
WKAM_API wkam_status wkam_space_config(const wkam_space* s, size_t id, double* out);
WKAM_API wkam_status wkam_space_snap(const wkam_space* s, const double* points, size_t n, size_t* id);
WKAM_API void wkam_space_free(wkam_space* s);

typedef struct wkam_step_options {
    double dt;
    double prune_radius; /* <= 0: no pruning */
    unsigned threads;    /* 0: all cores */
} wkam_step_options;

WKAM_API void wkam_step_options_default(wkam_step_options* opts);
/* in and out hold wkam_space_size entries; they may alias. */
WKAM_API wkam_status wkam_apply_T(const wkam_space* s, const wkam_potential* w, const wkam_step_options* opts,
                                  const double* in, double* out);
WKAM_API wkam_status wkam_apply_T_steps(const wkam_space* s, const wkam_potential* w,
                                        const wkam_step_options* opts, const double* in, size_t steps,
                                        double* out);
WKAM_API wkam_status wkam_argmin_T(const wkam_space* s, const wkam_potential* w, const wkam_step_options* opts,
                                   const double* in, size_t id, size_t* pred, double* value);

/* weak KAM solutions */
typedef struct wkam_solve_options {
    double dt;
    double tol;
    size_t max_iters;
    unsigned threads;
    double prune_radius; /* <= 0: no pruning */
} wkam_solve_options;

WKAM_API void wkam_solve_options_default(wkam_solve_options* opts);
/* Returns WKAM_NOT_CONVERGED (with *out set) when max_iters is reached. */
WKAM_API wkam_status wkam_solve(const wkam_space* s, const wkam_potential* w, const wkam_solve_options* opts,
                                wkam_solution** out);
WKAM_API double wkam_solution_lambda(const wkam_solution* sol);
WKAM_API double wkam_solution_residual(const wkam_solution* sol);
WKAM_API double wkam_solution_dt(const wkam_solution* sol);
WKAM_API size_t wkam_solution_iterations(const wkam_solution* sol);
WKAM_API int wkam_solution_converged(const wkam_solution* sol);
/* out holds wkam_space_size entries. */
WKAM_API wkam_status wkam_solution_values(const wkam_solution* sol, double* out);
/* history arrays hold wkam_solution_iterations entries; either may be NULL. */
WKAM_API wkam_status wkam_solution_history(const wkam_solution* sol, double* lambda, double* spread);
/* Rebuilds a solution from stored values, e.g. a table read back from disk. */
WKAM_API wkam_status wkam_solution_create(const wkam_space* s, const double* values, size_t count, double lambda,
                                          double dt, double residual, size_t iterations, int converged,
                                          wkam_solution** out);
WKAM_API void wkam_solution_free(wkam_solution* sol);

/* states: horizon/dt + 1 entries, states[j] at time -j dt. defects: horizon/dt entries. Either may be NULL. */
WKAM_API wkam_status wkam_calibrate(const wkam_space* s, const wkam_potential* w, const wkam_solution* sol,
                                    size_t state, double horizon, size_t* states, double* defects,
                                    double* max_defect, wkam_curve** curve);
WKAM_API wkam_status wkam_check_domination(const wkam_space* s, const wkam_potential* w,
                                           const wkam_solution* sol, size_t samples, uint64_t seed,
                                           double* worst_violation, double* slack, int* passed);
WKAM_API wkam_status wkam_check_lipschitz(const wkam_space* s, const wkam_potential* w, const wkam_solution* sol,
                                          double* empirical, double* bound, double* slack, int* passed);

/* value tables */
WKAM_API wkam_status wkam_values_csv(const wkam_space* s, const double* values, char** out);
/* Binary table: little-endian uint64 n, m, count, then count doubles. */
WKAM_API wkam_status wkam_values_binary(const wkam_space* s, const double* values, char** out, size_t* len);
/* out may be NULL to query the header; otherwise it holds *count entries. */
WKAM_API wkam_status wkam_values_binary_parse(const char* bytes, size_t len, size_t* n, size_t* m, size_t* count,
                                              double* out);

/* "fnv1a64:<16 hex digits>" */
WKAM_API wkam_status wkam_content_hash(const char* bytes, size_t len, char** out);
/* A configuration stored as a JSON array or CSV row; writes at most cap reals. */
WKAM_API wkam_status wkam_read_config_file(const char* path, double* out, size_t cap, size_t* n);

/* Runs the property suite with the given JSON options (NULL for defaults). */
WKAM_API wkam_status wkam_verify(const char* options_json, char** report_json, int* passed);

#ifdef __cplusplus
}
#endif

#endif

#ifndef NCLC_NCLC_H
#define NCLC_NCLC_H

/* C interface to the Levi-Civita solver. Every function returns an
 * nclc_status; on failure nclc_last_error() describes the cause for the
 * calling thread. Strings handed out by the library are released with
 * nclc_string_free. */

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define NCLC_API __declspec(dllexport)
#elif defined(NCLC_BUILDING_LIBRARY)
#define NCLC_API __attribute__((visibility("default")))
#else
#define NCLC_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum nclc_status {
  NCLC_OK = 0,
  NCLC_INVALID_ARGUMENT,
  NCLC_BACKEND_MISMATCH,
  NCLC_TRUNCATION_OVERFLOW,
  NCLC_SINGULAR_METRIC,
  NCLC_NON_CENTRAL_RESULT,
  NCLC_NON_UNIQUE,
  NCLC_INCONSISTENT,
  NCLC_NO_SOLUTION,
  NCLC_NON_SKEW,
  NCLC_NOT_EQUIVARIANT,
  NCLC_RANGE_NOT_SYMMETRIC,
  NCLC_GRID_TOO_COARSE,
  NCLC_SIZE_TOO_LARGE,
  NCLC_NON_COMMUTATIVE_BACKEND,
  NCLC_NOT_CENTRAL_BASIS,
  NCLC_INTERNAL
} nclc_status;

typedef enum nclc_route { NCLC_ROUTE_DIRECT = 0, NCLC_ROUTE_PHI = 1, NCLC_ROUTE_BOTH = 2 } nclc_route;

typedef struct nclc_model nclc_model;
typedef struct nclc_metric nclc_metric;
typedef struct nclc_connection nclc_connection;

NCLC_API const char* nclc_status_name(nclc_status status);
/* Detail of the last failure on this thread ("" after a success). */
NCLC_API const char* nclc_last_error(void);
NCLC_API void nclc_string_free(char* s);
/* 1 for mathematical failures, 2 for input validation failures, 0 for NCLC_OK. */
NCLC_API int nclc_exit_code(nclc_status status);

/* Models. config_json uses the same keys as the command-line config file. */
NCLC_API nclc_status nclc_model_create(const char* config_json, nclc_model** out);
NCLC_API nclc_status nclc_model_fuzzy_sphere(int k, nclc_model** out);
NCLC_API nclc_status nclc_model_heisenberg(nclc_model** out);
/* theta: deformed x deformed row-major, may be NULL for theta = 0. */
NCLC_API nclc_status nclc_model_torus(int dims, int deformed, const double* theta, int radius, nclc_model** out);
NCLC_API nclc_status nclc_model_describe(const nclc_model* model, char** json);
NCLC_API int nclc_model_rank(const nclc_model* model);
NCLC_API void nclc_model_destroy(nclc_model* model);

/* Metrics. */
NCLC_API nclc_status nclc_metric_default(const nclc_model* model, nclc_metric** out);
NCLC_API nclc_status nclc_metric_from_json(const nclc_model* model, const char* json, nclc_metric** out);
NCLC_API nclc_status nclc_metric_random_oracle(const nclc_model* model, uint64_t seed, nclc_metric** out);
NCLC_API nclc_status nclc_metric_to_json(const nclc_metric* metric, char** json);
NCLC_API void nclc_metric_destroy(nclc_metric* metric);

/* Levi-Civita connection. tol <= 0 keeps the default residual tolerance. */
NCLC_API nclc_status nclc_solve(const nclc_model* model, const nclc_metric* metric, nclc_route route, double tol,
                                nclc_connection** out);
/* Normalized trace of Gamma^i_jk. */
NCLC_API nclc_status nclc_connection_gamma(const nclc_connection* c, int i, int j, int k, double* re, double* im);
NCLC_API nclc_status nclc_connection_diagnostics(const nclc_connection* c, double* torsion_residual,
                                                 double* compat_residual, double* min_singular_value);
NCLC_API nclc_status nclc_connection_report(const nclc_connection* c, char** json);
NCLC_API void nclc_connection_destroy(nclc_connection* c);

/* Deform the Levi-Civita connection of a theta = 0 torus model and compare
 * with the solve in the deformed calculus; difference receives the max norm. */
NCLC_API nclc_status nclc_deform_compare(const nclc_model* model, const nclc_metric* metric, const double* theta,
                                         double* difference);
/* Max norm between the solver output and the classical Christoffel symbols. */
NCLC_API nclc_status nclc_oracle_compare(const nclc_model* model, const nclc_metric* metric, double* difference);
/* Every invariant suite applicable to the model; report is JSON. */
NCLC_API nclc_status nclc_verify(const nclc_model* model, const nclc_metric* metric, uint64_t seed, char** report,
                                 int* all_passed);
/* n x n row-major theta: NCLC_OK or NCLC_NON_SKEW. */
NCLC_API nclc_status nclc_theta_validate(const double* theta, int n);

/* Runs "solve" | "verify" | "deform" | "oracle-compare" on a JSON config and
 * returns the JSON report (or {error, detail}). exit_code follows
 * nclc_exit_code, with 1 also for reports whose checks failed. */
NCLC_API nclc_status nclc_run(const char* command, const char* config_json, char** report, int* exit_code);

#ifdef __cplusplus
}
#endif

#endif

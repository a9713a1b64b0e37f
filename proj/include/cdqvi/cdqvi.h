/*
 * cdqvi - C interface to the canonical-duality AQVI solver.
 *
 * All objects are opaque handles created by cdqvi_* functions and released
 * with the matching *_free function. Functions return CDQVI_OK on success;
 * on failure cdqvi_last_error() describes the problem (thread-local, valid
 * until the next call on the same thread). Handles are immutable after
 * creation and may be shared between threads.
 */
#ifndef CDQVI_H
#define CDQVI_H

#include <stddef.h>
#include <stdint.h>

#if defined(CDQVI_BUILDING_LIBRARY)
#define CDQVI_API __attribute__((visibility("default")))
#else
#define CDQVI_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum cdqvi_status {
  CDQVI_OK = 0,
  CDQVI_ERR_USAGE = 1,            /* invalid argument or dimension mismatch */
  CDQVI_ERR_INVALID_INSTANCE = 2, /* instance violates an invariant (e.g. C not SPD) */
  CDQVI_ERR_IO = 3,
  CDQVI_ERR_PARSE = 4,            /* malformed instance or stiffness file */
  CDQVI_ERR_CAPABILITY = 5,       /* request exceeds a documented limit */
  CDQVI_ERR_INTERNAL = 6
} cdqvi_status;

typedef enum cdqvi_format {
  CDQVI_FORMAT_TABLE = 0,
  CDQVI_FORMAT_CSV = 1,
  CDQVI_FORMAT_JSON = 2
} cdqvi_format;

typedef enum cdqvi_solve_status { CDQVI_SOLVED = 0, CDQVI_FAILURE = 1 } cdqvi_solve_status;

typedef struct cdqvi_instance cdqvi_instance;
typedef struct cdqvi_report cdqvi_report;
typedef struct cdqvi_report_list cdqvi_report_list;
typedef struct cdqvi_kkt_list cdqvi_kkt_list;

/* Generator parameters. stiffness_path, when non-NULL, selects a stiffness
 * matrix read from a JSON file {"C": [[...]]} instead of the spring lattice. */
typedef struct cdqvi_contact_spec {
  uint32_t nodes;
  double phi;
  double l;
  double k_t;
  double k_n;
  double coupling;
  const char* stiffness_path;
  double load_normal;      /* amplitude of the compressive normal load */
  double load_tangential;  /* amplitude of the tangential load */
  const double* fext;      /* explicit load of length 2 * nodes; overrides the amplitudes */
  size_t fext_len;
} cdqvi_contact_spec;

typedef struct cdqvi_solver_params {
  double eps0;
  double delta0;
  double gamma;
  double outer_tol;
  int32_t max_outer;
  double inner_tol0;
  int32_t inner_max_iter;
} cdqvi_solver_params;

typedef struct cdqvi_report_summary {
  double phi;
  cdqvi_solve_status status;
  int32_t outer_iterations;
  int32_t inner_newton;
  int32_t inner_linesearch;
  int32_t inner_fallback;
  int32_t h_evals;
  int32_t jh_evals;
  double wall_time;
  double final_residual;
} cdqvi_report_summary;

CDQVI_API const char* cdqvi_version(void);
CDQVI_API const char* cdqvi_last_error(void);
/* Release strings returned through char** out-parameters. */
CDQVI_API void cdqvi_string_free(char* s);

/* ---- instances ---------------------------------------------------------- */

CDQVI_API void cdqvi_contact_spec_default(cdqvi_contact_spec* spec);
CDQVI_API cdqvi_status cdqvi_instance_generate(const cdqvi_contact_spec* spec, cdqvi_instance** out);
/* Random SPD stiffness and random load; deterministic for a fixed seed. */
CDQVI_API cdqvi_status cdqvi_instance_random(uint32_t nodes, double phi, double l, uint64_t seed,
                                             cdqvi_instance** out);
CDQVI_API cdqvi_status cdqvi_instance_load(const char* path, cdqvi_instance** out);
CDQVI_API cdqvi_status cdqvi_instance_save(const cdqvi_instance* inst, const char* path);
/* Replace the free-form "meta" object written by cdqvi_instance_save. */
CDQVI_API cdqvi_status cdqvi_instance_set_meta(cdqvi_instance* inst, const char* meta_json);
/* Same stiffness and load, constraint matrices rebuilt for a new friction coefficient. */
CDQVI_API cdqvi_status cdqvi_instance_with_phi(const cdqvi_instance* inst, double phi,
                                               cdqvi_instance** out);
CDQVI_API void cdqvi_instance_free(cdqvi_instance* inst);

CDQVI_API cdqvi_status cdqvi_instance_dims(const cdqvi_instance* inst, size_t* n, size_t* m);
CDQVI_API cdqvi_status cdqvi_instance_phi(const cdqvi_instance* inst, double* phi);

/* y must hold N + m doubles; tau holds N, lambda holds m. */
CDQVI_API cdqvi_status cdqvi_kkt_residual(const cdqvi_instance* inst, const double* tau,
                                          const double* lambda, double* y);

/* ---- solving ------------------------------------------------------------ */

CDQVI_API void cdqvi_solver_params_default(cdqvi_solver_params* params);

/* start may be NULL (all zeros) or hold N + 2m doubles packed as (tau, lambda, sigma). */
CDQVI_API cdqvi_status cdqvi_solve(const cdqvi_instance* inst, const cdqvi_solver_params* params,
                                   const double* start, const char* problem_id, cdqvi_report** out);
CDQVI_API void cdqvi_report_free(cdqvi_report* report);

CDQVI_API cdqvi_status cdqvi_report_get_summary(const cdqvi_report* report,
                                                cdqvi_report_summary* out);
/* Copies the final iterate; each pointer may be NULL. */
CDQVI_API cdqvi_status cdqvi_report_get_solution(const cdqvi_report* report, double* tau,
                                                 double* lambda, double* sigma);
/* Number of inner solves performed; eps and delta (may be NULL) receive that many values. */
CDQVI_API cdqvi_status cdqvi_report_get_schedule(const cdqvi_report* report, size_t* count,
                                                 double* eps, double* delta);

/* One report per phi, in order. jobs <= 0 means 1. */
CDQVI_API cdqvi_status cdqvi_sweep(const cdqvi_instance* inst, const double* phis, size_t n_phis,
                                   const cdqvi_solver_params* params, int32_t jobs,
                                   const char* problem_id, cdqvi_report_list** out);
CDQVI_API void cdqvi_report_list_free(cdqvi_report_list* list);
CDQVI_API size_t cdqvi_report_list_size(const cdqvi_report_list* list);
/* Borrowed pointer, valid while the list lives. */
CDQVI_API const cdqvi_report* cdqvi_report_list_get(const cdqvi_report_list* list, size_t i);

/* Renders reports as a table, csv or json document. include_timing = 0 writes
 * the time column as NA (omitted in json) for byte-reproducible output. */
CDQVI_API cdqvi_status cdqvi_render_reports(const cdqvi_report* const* reports, size_t n,
                                            cdqvi_format format, int include_timing,
                                            char** out);

/* ---- oracle ------------------------------------------------------------- */

/* Fails with CDQVI_ERR_CAPABILITY when m > 20. */
CDQVI_API cdqvi_status cdqvi_oracle_enumerate(const cdqvi_instance* inst, double tol,
                                              cdqvi_kkt_list** out);
CDQVI_API void cdqvi_kkt_list_free(cdqvi_kkt_list* list);
CDQVI_API size_t cdqvi_kkt_list_size(const cdqvi_kkt_list* list);
CDQVI_API cdqvi_status cdqvi_kkt_list_get(const cdqvi_kkt_list* list, size_t i, double* tau,
                                          double* lambda, uint32_t* active_set, double* residual);
CDQVI_API cdqvi_status cdqvi_kkt_list_render(const cdqvi_kkt_list* list, cdqvi_format format,
                                             char** out);

/* ---- self-check --------------------------------------------------------- */

/* Runs the built-in property checks; *failures receives the failed count and
 * *out a line-per-check text report. */
CDQVI_API cdqvi_status cdqvi_self_check(uint64_t seed, int32_t* failures, char** out);

#ifdef __cplusplus
}
#endif

#endif /* CDQVI_H */

/* C interface to the pdwave traveling-wave library.
 *
 * Objects are opaque handles released with the matching _destroy function.
 * Every call returns a pdw_status; on failure a message is available from
 * pdw_last_error_message() on the calling thread. Strings returned through
 * char** parameters are owned by the caller and freed with pdw_string_free().
 * Structured results are JSON documents; their keys match the CLI outputs.
 */
#ifndef PDWAVE_PDWAVE_H
#define PDWAVE_PDWAVE_H

#include <stddef.h>

#if defined(_WIN32)
#define PDW_API __declspec(dllexport)
#else
#define PDW_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum pdw_status {
  PDW_OK = 0,
  PDW_ERR_INPUT = 1,          /* invalid argument or configuration */
  PDW_ERR_NOT_CONVERGED = 2,  /* result returned, but not converged */
  PDW_ERR_NUMERICAL = 3,      /* overflow or instability */
  PDW_ERR_DEGENERATE = 4,     /* vanishing gradient, degenerate KdV limit */
  PDW_ERR_SUBSONIC = 5,       /* no exponential tail below the sound speed */
  PDW_ERR_INTERNAL = 6
} pdw_status;

typedef struct pdw_grid pdw_grid;
typedef struct pdw_coupling pdw_coupling;
typedef struct pdw_profile pdw_profile;
typedef struct pdw_solution pdw_solution;

PDW_API const char* pdw_version(void);
PDW_API const char* pdw_status_string(pdw_status s);
PDW_API const char* pdw_last_error_message(void);
PDW_API void pdw_string_free(char* s);

/* Grid: nodes x_j = -L + j*2L/N, j = 0..N-1. */
PDW_API pdw_status pdw_grid_create(double L, size_t N, pdw_grid** out);
PDW_API void pdw_grid_destroy(pdw_grid* g);
PDW_API pdw_status pdw_grid_info(const pdw_grid* g, double* L, size_t* N, double* h);

/* Material description, see the README for the schema. */
PDW_API pdw_status pdw_coupling_from_json(const char* json, pdw_coupling** out);
PDW_API pdw_status pdw_coupling_to_json(const pdw_coupling* c, char** json);
PDW_API void pdw_coupling_destroy(pdw_coupling* c);
PDW_API pdw_status pdw_superquadratic_check(const pdw_coupling* c, double r_max,
                                            size_t samples, char** json);

/* Profiles. */
PDW_API pdw_status pdw_profile_create(const pdw_grid* g, const double* values, size_t n,
                                      pdw_profile** out);
/* kind: "gaussian" or "indicator"; width 0 selects the default. */
PDW_API pdw_status pdw_profile_initial(const pdw_grid* g, const char* kind, double K,
                                       double width, pdw_profile** out);
PDW_API void pdw_profile_destroy(pdw_profile* w);
PDW_API size_t pdw_profile_size(const pdw_profile* w);
PDW_API pdw_status pdw_profile_values(const pdw_profile* w, double* out, size_t n);
PDW_API pdw_status pdw_profile_to_json(const pdw_profile* w, char** json);
PDW_API pdw_status pdw_profile_to_csv(const pdw_profile* w, char** csv);
PDW_API pdw_status pdw_profile_from_json(const char* json, pdw_profile** out);

PDW_API pdw_status pdw_l2_norm(const pdw_profile* w, double* out);
PDW_API pdw_status pdw_inner(const pdw_profile* a, const pdw_profile* b, double* out);
PDW_API pdw_status pdw_conv_spectral(const pdw_profile* w, double xi, pdw_profile** out);
PDW_API pdw_status pdw_conv_direct(const pdw_profile* w, double xi, pdw_profile** out);
PDW_API pdw_status pdw_cone_check(const pdw_profile* w, double tol, char** json);

/* Energies. */
PDW_API pdw_status pdw_potential_P(const pdw_profile* w, const pdw_coupling* c, double* out);
PDW_API pdw_status pdw_grad_P(const pdw_profile* w, const pdw_coupling* c, pdw_profile** out);
PDW_API pdw_status pdw_energy_report(const pdw_profile* w, const pdw_coupling* c, char** json);

/* Improvement dynamics. options_json may be NULL for defaults. A non-NULL
 * start is rescaled to K and used as the initial profile. A solve that stops
 * without converging still fills *out and returns PDW_ERR_NOT_CONVERGED. */
PDW_API pdw_status pdw_solve(const pdw_coupling* c, const pdw_grid* g, double K,
                             const char* options_json, const pdw_profile* start,
                             pdw_solution** out);
PDW_API void pdw_solution_destroy(pdw_solution* s);

typedef struct pdw_solution_info {
  double K;
  double sigma2;
  double P;
  double Q;
  double residual;
  double min_increment;
  double min_gain_margin;
  double localization_ratio;
  size_t iterations;
  int converged;
} pdw_solution_info;

PDW_API pdw_status pdw_solution_info_get(const pdw_solution* s, pdw_solution_info* out);
PDW_API pdw_status pdw_solution_profile(const pdw_solution* s, pdw_profile** out);
PDW_API pdw_status pdw_solution_eigen_residual(const pdw_solution* s, const pdw_coupling* c,
                                               double* out);
PDW_API pdw_status pdw_solution_to_json(const pdw_solution* s, int with_history, char** json);

/* Sweep over increasing K values; the result is {"rows": [...]}. */
PDW_API pdw_status pdw_sweep(const pdw_coupling* c, const pdw_grid* g, const double* K,
                             size_t n, const char* options_json, char** table_json);
/* table_json: the sweep result or its rows array. */
PDW_API pdw_status pdw_threshold_detect(const char* table_json, double trigger,
                                        char** result_json);
PDW_API pdw_status pdw_refine_threshold(const pdw_coupling* c, const pdw_grid* g,
                                        const char* options_json, const char* bracket_json,
                                        size_t steps, char** result_json);

/* Linear and asymptotic theory. */
PDW_API pdw_status pdw_theta2(const pdw_coupling* c, double k, double* out);
PDW_API pdw_status pdw_omega2(const pdw_coupling* c, double k, double* out);
PDW_API pdw_status pdw_theta2_imag(const pdw_coupling* c, double lambda, double* out);
PDW_API pdw_status pdw_dispersion(const pdw_coupling* c, double k_min, double k_max,
                                  size_t samples, char** json);
PDW_API pdw_status pdw_decay_rate(const pdw_coupling* c, double sigma2, double* out);
PDW_API pdw_status pdw_fit_decay(const pdw_profile* w, double x_low, double x_high,
                                 char** json);
PDW_API pdw_status pdw_tail_window(const pdw_profile* w, double upper, double lower,
                                   double* x_low, double* x_high);
PDW_API pdw_status pdw_kdv_coefficients(const pdw_coupling* c, char** json);
/* which: "symbol" or "moment" selects the c1 constant. */
PDW_API pdw_status pdw_kdv_profile(const pdw_coupling* c, const pdw_grid* g, double eps,
                                   const char* which, pdw_profile** out, double* sigma2);
PDW_API pdw_status pdw_kdv_compare(const pdw_solution* s, const pdw_coupling* c,
                                   const char* which, char** json);

/* Time-domain propagation of a computed wave. options_json keys: duration,
 * dt, check_interval, snapshot_interval. The callback, if given, receives
 * the time, displacement and velocity every snapshot_interval steps. A run
 * that aborts on instability returns PDW_ERR_NUMERICAL with the partial
 * report in *report_json. */
typedef void (*pdw_snapshot_fn)(double t, const double* u, const double* v, size_t n,
                                void* user);
PDW_API pdw_status pdw_simulate(const pdw_solution* s, const pdw_coupling* c,
                                const char* options_json, pdw_snapshot_fn on_snapshot,
                                void* user, char** report_json);

#ifdef __cplusplus
}
#endif

#endif /* PDWAVE_PDWAVE_H */

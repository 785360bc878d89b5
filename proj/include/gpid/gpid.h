#ifndef GPID_GPID_H
#define GPID_GPID_H

/*
 * C interface to the gpid library.
 *
 * Objects are opaque handles created and destroyed through this API. Every
 * fallible call returns a gpid_status; on failure the thread-local message
 * from gpid_last_error() describes the problem, and for configuration errors
 * gpid_last_error_key() names the offending parameter.
 *
 * Strings returned by accessors are owned by the handle and stay valid until
 * it is destroyed.
 */

#include <stddef.h>

#if defined(_WIN32)
#  if defined(GPID_BUILDING_LIBRARY)
#    define GPID_API __declspec(dllexport)
#  else
#    define GPID_API __declspec(dllimport)
#  endif
#else
#  define GPID_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum gpid_status {
  GPID_OK = 0,
  GPID_ERR_INVALID_ARGUMENT = 1,
  GPID_ERR_UNKNOWN_KEY = 2,
  GPID_ERR_MISSING_KEY = 3,
  GPID_ERR_NUMERICAL = 4,
  GPID_ERR_IO = 5,
  GPID_ERR_OUT_OF_RANGE = 6,
  GPID_ERR_INTERNAL = 7
} gpid_status;

GPID_API const char* gpid_version(void);
GPID_API const char* gpid_status_string(gpid_status status);
GPID_API const char* gpid_last_error(void);
/* Parameter name for GPID_ERR_UNKNOWN_KEY / GPID_ERR_MISSING_KEY, else "". */
GPID_API const char* gpid_last_error_key(void);

/* ---- scenarios ------------------------------------------------------- */

typedef struct gpid_scenario gpid_scenario;
typedef struct gpid_run gpid_run;

/* name: "pendulum", "vehicle" or "vehicle-integral". */
GPID_API gpid_status gpid_scenario_create(const char* name, gpid_scenario** out);
GPID_API void gpid_scenario_destroy(gpid_scenario* scenario);
GPID_API gpid_status gpid_scenario_set(gpid_scenario* scenario, const char* key, double value);

/* Number of accepted parameters and their names, in output order. */
GPID_API size_t gpid_scenario_param_count(const gpid_scenario* scenario);
GPID_API const char* gpid_scenario_param_name(const gpid_scenario* scenario, size_t index);
GPID_API const char* gpid_scenario_param_help(const gpid_scenario* scenario, size_t index);
/* 1 if the parameter must be supplied, 0 if it has a default or is derived. */
GPID_API int gpid_scenario_param_required(const gpid_scenario* scenario, size_t index);

GPID_API gpid_status gpid_scenario_run(const gpid_scenario* scenario, gpid_run** out);

/* Loads a run previously written with gpid_run_write_csv. */
GPID_API gpid_status gpid_run_read_csv(const char* path, gpid_run** out);
GPID_API void gpid_run_destroy(gpid_run* run);
GPID_API gpid_status gpid_run_write_csv(const gpid_run* run, const char* path);

GPID_API const char* gpid_run_scenario(const gpid_run* run);
GPID_API size_t gpid_run_samples(const gpid_run* run);

/* Columns are "t", the states, then the monitors. */
GPID_API size_t gpid_run_column_count(const gpid_run* run);
GPID_API size_t gpid_run_state_count(const gpid_run* run);
GPID_API const char* gpid_run_column_name(const gpid_run* run, size_t index);
/* Copies min(capacity, samples) values of the named column into out. */
GPID_API gpid_status gpid_run_column(const gpid_run* run, const char* name, double* out,
                                     size_t capacity);

GPID_API size_t gpid_run_param_count(const gpid_run* run);
GPID_API const char* gpid_run_param_name(const gpid_run* run, size_t index);
GPID_API double gpid_run_param_value(const gpid_run* run, size_t index);

GPID_API size_t gpid_run_summary_count(const gpid_run* run);
GPID_API const char* gpid_run_summary_name(const gpid_run* run, size_t index);
GPID_API double gpid_run_summary_value(const gpid_run* run, size_t index);
GPID_API gpid_status gpid_run_summary_lookup(const gpid_run* run, const char* name, double* out);
/* "<scenario>: key=value ..." */
GPID_API const char* gpid_run_summary_line(const gpid_run* run);

GPID_API size_t gpid_run_warning_count(const gpid_run* run);
GPID_API const char* gpid_run_warning(const gpid_run* run, size_t index);

/* ---- stability sweeps ------------------------------------------------ */

typedef struct gpid_sweep gpid_sweep;
typedef struct gpid_sweep_result gpid_sweep_result;

/* classifier: "routh-sufficient", "routh-exact" or "eigen". Axes default to
 * the single point omega_0 = k_P = 1, k_I = 0.1, v = (1, 0.1). */
GPID_API gpid_status gpid_sweep_create(const char* classifier, gpid_sweep** out);
GPID_API void gpid_sweep_destroy(gpid_sweep* sweep);
/* axis: "omega_0", "k_P", "k_I", "v_norm" or "phi". */
GPID_API gpid_status gpid_sweep_set_axis(gpid_sweep* sweep, const char* axis,
                                         const double* values, size_t count);
GPID_API size_t gpid_sweep_size(const gpid_sweep* sweep);
/* threads = 0 uses the hardware concurrency. */
GPID_API gpid_status gpid_sweep_run(const gpid_sweep* sweep, unsigned threads,
                                    gpid_sweep_result** out);

GPID_API void gpid_sweep_result_destroy(gpid_sweep_result* result);
GPID_API size_t gpid_sweep_result_rows(const gpid_sweep_result* result);
/* tuple receives (omega_0, k_P, k_I, v_norm, phi); either pointer may be NULL. */
GPID_API gpid_status gpid_sweep_result_row(const gpid_sweep_result* result, size_t index,
                                           double tuple[5], int* verdict, double* margin);
GPID_API size_t gpid_sweep_result_stable_count(const gpid_sweep_result* result);
GPID_API gpid_status gpid_sweep_result_write_csv(const gpid_sweep_result* result,
                                                 const char* path);

/* ---- invariant suite ------------------------------------------------- */

typedef struct gpid_verify_report gpid_verify_report;

/* Every tolerance is multiplied by tolerance_scale; 1 is the calibrated suite. */
GPID_API gpid_status gpid_verify_run(double tolerance_scale, gpid_verify_report** out);
GPID_API void gpid_verify_report_destroy(gpid_verify_report* report);
GPID_API size_t gpid_verify_report_count(const gpid_verify_report* report);
GPID_API const char* gpid_verify_report_name(const gpid_verify_report* report, size_t index);
GPID_API int gpid_verify_report_passed(const gpid_verify_report* report, size_t index);
GPID_API double gpid_verify_report_measured(const gpid_verify_report* report, size_t index);
GPID_API double gpid_verify_report_threshold(const gpid_verify_report* report, size_t index);
GPID_API const char* gpid_verify_report_detail(const gpid_verify_report* report, size_t index);
GPID_API int gpid_verify_report_all_passed(const gpid_verify_report* report);

/* ---- certificates ---------------------------------------------------- */

typedef struct gpid_cond2_result {
  int passed;
  double f;
  double k_I_margin;
  double k_D_margin;
} gpid_cond2_result;

GPID_API gpid_status gpid_check_cond2(double k_I, double k_D, double b, double k_P, double beta,
                                      double d_r, double d_c, gpid_cond2_result* out);

/* Both roots of the steady turning-rate correction under a biased velocity. */
GPID_API gpid_status gpid_predicted_residual_omega(double omega0, double k_P, double v_x,
                                                   double v_y, double* plus, double* minus);

typedef struct gpid_routh_result {
  int sufficient_ok;
  int exact_ok;
  double a2, a1, a0;
} gpid_routh_result;

GPID_API gpid_status gpid_routh_hurwitz(double omega0, double k_P, double k_I, double v_norm,
                                        double phi, gpid_routh_result* out);

#ifdef __cplusplus
}
#endif

#endif

#include "gpid/gpid.h"

#include "gpid/error.hpp"
#include "gpid/pid.hpp"
#include "gpid/scenario.hpp"
#include "gpid/sweep.hpp"
#include "gpid/vehicle.hpp"
#include "gpid/vehicle_integral.hpp"
#include "gpid/verify_suite.hpp"

#include <algorithm>
#include <exception>
#include <new>
#include <string>
#include <vector>

struct gpid_scenario {
  gpid::ScenarioConfig config;
};

struct gpid_run {
  gpid::ScenarioResult result;
  std::vector<std::string> columns;
  std::string scenario_name;
  std::string summary_line;
};

struct gpid_sweep {
  gpid::Classifier classifier;
  gpid::SweepGrid grid;
};

struct gpid_sweep_result {
  gpid::Classifier classifier;
  std::vector<gpid::SweepRow> rows;
};

struct gpid_verify_report {
  std::vector<gpid::InvariantResult> items;
};

namespace {

thread_local std::string g_error;
thread_local std::string g_error_key;

gpid_status fail(gpid_status status, std::string message, std::string key = {}) {
  g_error = std::move(message);
  g_error_key = std::move(key);
  return status;
}

// Maps the exception in flight to a status code.
gpid_status translate() {
  try {
    throw;
  } catch (const gpid::UnknownKeyError& e) {
    return fail(GPID_ERR_UNKNOWN_KEY, e.what(), e.key());
  } catch (const gpid::MissingKeyError& e) {
    return fail(GPID_ERR_MISSING_KEY, e.what(), e.key());
  } catch (const gpid::InvalidArgument& e) {
    return fail(GPID_ERR_INVALID_ARGUMENT, e.what());
  } catch (const gpid::NumericalError& e) {
    return fail(GPID_ERR_NUMERICAL, e.what());
  } catch (const gpid::IoError& e) {
    return fail(GPID_ERR_IO, e.what());
  } catch (const std::bad_alloc&) {
    return fail(GPID_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(GPID_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(GPID_ERR_INTERNAL, "unknown error");
  }
}

template <typename F>
gpid_status guarded(F&& body) {
  try {
    body();
    g_error.clear();
    g_error_key.clear();
    return GPID_OK;
  } catch (...) {
    return translate();
  }
}

gpid_status null_argument(const char* what) {
  return fail(GPID_ERR_INVALID_ARGUMENT, std::string(what) + " must not be null");
}

gpid_run* make_run(gpid::ScenarioResult result) {
  auto run = new gpid_run{std::move(result), {}, {}, {}};
  const auto& tr = run->result.trajectory;
  run->columns.push_back("t");
  run->columns.insert(run->columns.end(), tr.state_names.begin(), tr.state_names.end());
  run->columns.insert(run->columns.end(), tr.monitor_names.begin(), tr.monitor_names.end());
  run->scenario_name = std::string(gpid::to_string(run->result.kind));
  run->summary_line = gpid::format_summary(run->result);
  return run;
}

const char* at(const std::vector<std::string>& v, size_t i) {
  return i < v.size() ? v[i].c_str() : nullptr;
}

}  // namespace

extern "C" {

const char* gpid_version(void) { return "1.0.0"; }

const char* gpid_status_string(gpid_status status) {
  switch (status) {
    case GPID_OK: return "ok";
    case GPID_ERR_INVALID_ARGUMENT: return "invalid argument";
    case GPID_ERR_UNKNOWN_KEY: return "unknown parameter";
    case GPID_ERR_MISSING_KEY: return "missing parameter";
    case GPID_ERR_NUMERICAL: return "numerical failure";
    case GPID_ERR_IO: return "i/o error";
    case GPID_ERR_OUT_OF_RANGE: return "index out of range";
    case GPID_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

const char* gpid_last_error(void) { return g_error.c_str(); }
const char* gpid_last_error_key(void) { return g_error_key.c_str(); }

gpid_status gpid_scenario_create(const char* name, gpid_scenario** out) {
  if (!name) return null_argument("name");
  if (!out) return null_argument("out");
  *out = nullptr;
  const auto kind = gpid::parse_scenario_kind(name);
  if (!kind) return fail(GPID_ERR_INVALID_ARGUMENT, std::string("unknown scenario '") + name + "'");
  return guarded([&] { *out = new gpid_scenario{gpid::ScenarioConfig(*kind)}; });
}

void gpid_scenario_destroy(gpid_scenario* scenario) { delete scenario; }

gpid_status gpid_scenario_set(gpid_scenario* scenario, const char* key, double value) {
  if (!scenario) return null_argument("scenario");
  if (!key) return null_argument("key");
  return guarded([&] { scenario->config.set(key, value); });
}

size_t gpid_scenario_param_count(const gpid_scenario* scenario) {
  return scenario ? gpid::scenario_parameters(scenario->config.kind()).size() : 0;
}

const char* gpid_scenario_param_name(const gpid_scenario* scenario, size_t index) {
  if (!scenario) return nullptr;
  const auto& specs = gpid::scenario_parameters(scenario->config.kind());
  return index < specs.size() ? specs[index].name.c_str() : nullptr;
}

const char* gpid_scenario_param_help(const gpid_scenario* scenario, size_t index) {
  if (!scenario) return nullptr;
  const auto& specs = gpid::scenario_parameters(scenario->config.kind());
  return index < specs.size() ? specs[index].help.c_str() : nullptr;
}

int gpid_scenario_param_required(const gpid_scenario* scenario, size_t index) {
  if (!scenario) return 0;
  const auto& specs = gpid::scenario_parameters(scenario->config.kind());
  return index < specs.size() && specs[index].kind == gpid::ParamSpec::Default::Required;
}

gpid_status gpid_scenario_run(const gpid_scenario* scenario, gpid_run** out) {
  if (!scenario) return null_argument("scenario");
  if (!out) return null_argument("out");
  *out = nullptr;
  return guarded([&] { *out = make_run(gpid::run_scenario(scenario->config)); });
}

gpid_status gpid_run_read_csv(const char* path, gpid_run** out) {
  if (!path) return null_argument("path");
  if (!out) return null_argument("out");
  *out = nullptr;
  return guarded([&] { *out = make_run(gpid::read_scenario_csv(path)); });
}

void gpid_run_destroy(gpid_run* run) { delete run; }

gpid_status gpid_run_write_csv(const gpid_run* run, const char* path) {
  if (!run) return null_argument("run");
  if (!path) return null_argument("path");
  return guarded([&] { gpid::write_scenario_csv(path, run->result); });
}

const char* gpid_run_scenario(const gpid_run* run) {
  return run ? run->scenario_name.c_str() : nullptr;
}

size_t gpid_run_samples(const gpid_run* run) { return run ? run->result.trajectory.size() : 0; }

size_t gpid_run_column_count(const gpid_run* run) { return run ? run->columns.size() : 0; }

size_t gpid_run_state_count(const gpid_run* run) {
  return run ? run->result.trajectory.state_names.size() : 0;
}

const char* gpid_run_column_name(const gpid_run* run, size_t index) {
  return run ? at(run->columns, index) : nullptr;
}

gpid_status gpid_run_column(const gpid_run* run, const char* name, double* out, size_t capacity) {
  if (!run) return null_argument("run");
  if (!name) return null_argument("name");
  if (!out && capacity > 0) return null_argument("out");
  const auto& tr = run->result.trajectory;
  const size_t n = std::min(capacity, tr.size());
  const std::string key(name);
  if (key == "t") {
    std::copy_n(tr.times.begin(), n, out);
    return GPID_OK;
  }
  const auto& sn = tr.state_names;
  if (auto it = std::find(sn.begin(), sn.end(), key); it != sn.end()) {
    const auto col = static_cast<Eigen::Index>(it - sn.begin());
    for (size_t k = 0; k < n; ++k) out[k] = tr.states[k][col];
    return GPID_OK;
  }
  if (tr.has_monitor(key)) {
    const auto& series = tr.monitor(key);
    std::copy_n(series.begin(), n, out);
    return GPID_OK;
  }
  return fail(GPID_ERR_INVALID_ARGUMENT, "no column named '" + key + "'");
}

size_t gpid_run_param_count(const gpid_run* run) { return run ? run->result.params.size() : 0; }

const char* gpid_run_param_name(const gpid_run* run, size_t index) {
  return run && index < run->result.params.size() ? run->result.params[index].first.c_str()
                                                   : nullptr;
}

double gpid_run_param_value(const gpid_run* run, size_t index) {
  return run && index < run->result.params.size() ? run->result.params[index].second : 0.0;
}

size_t gpid_run_summary_count(const gpid_run* run) {
  return run ? run->result.summary.size() : 0;
}

const char* gpid_run_summary_name(const gpid_run* run, size_t index) {
  return run && index < run->result.summary.size() ? run->result.summary[index].first.c_str()
                                                    : nullptr;
}

double gpid_run_summary_value(const gpid_run* run, size_t index) {
  return run && index < run->result.summary.size() ? run->result.summary[index].second : 0.0;
}

gpid_status gpid_run_summary_lookup(const gpid_run* run, const char* name, double* out) {
  if (!run) return null_argument("run");
  if (!name) return null_argument("name");
  if (!out) return null_argument("out");
  const auto v = run->result.summary_value(name);
  if (!v) return fail(GPID_ERR_INVALID_ARGUMENT, std::string("no summary value '") + name + "'");
  *out = *v;
  return GPID_OK;
}

const char* gpid_run_summary_line(const gpid_run* run) {
  return run ? run->summary_line.c_str() : nullptr;
}

size_t gpid_run_warning_count(const gpid_run* run) {
  return run ? run->result.warnings.size() : 0;
}

const char* gpid_run_warning(const gpid_run* run, size_t index) {
  return run ? at(run->result.warnings, index) : nullptr;
}

gpid_status gpid_sweep_create(const char* classifier, gpid_sweep** out) {
  if (!classifier) return null_argument("classifier");
  if (!out) return null_argument("out");
  *out = nullptr;
  const auto c = gpid::parse_classifier(classifier);
  if (!c) {
    return fail(GPID_ERR_INVALID_ARGUMENT, std::string("unknown classifier '") + classifier + "'");
  }
  return guarded([&] { *out = new gpid_sweep{*c, gpid::SweepGrid{}}; });
}

void gpid_sweep_destroy(gpid_sweep* sweep) { delete sweep; }

gpid_status gpid_sweep_set_axis(gpid_sweep* sweep, const char* axis, const double* values,
                                size_t count) {
  if (!sweep) return null_argument("sweep");
  if (!axis) return null_argument("axis");
  if (!values && count > 0) return null_argument("values");
  return guarded([&] {
    sweep->grid.set_axis(axis, std::vector<double>(values, values + count));
  });
}

size_t gpid_sweep_size(const gpid_sweep* sweep) { return sweep ? sweep->grid.size() : 0; }

gpid_status gpid_sweep_run(const gpid_sweep* sweep, unsigned threads, gpid_sweep_result** out) {
  if (!sweep) return null_argument("sweep");
  if (!out) return null_argument("out");
  *out = nullptr;
  return guarded([&] {
    *out = new gpid_sweep_result{sweep->classifier,
                                 gpid::run_sweep(sweep->grid, sweep->classifier, threads)};
  });
}

void gpid_sweep_result_destroy(gpid_sweep_result* result) { delete result; }

size_t gpid_sweep_result_rows(const gpid_sweep_result* result) {
  return result ? result->rows.size() : 0;
}

gpid_status gpid_sweep_result_row(const gpid_sweep_result* result, size_t index, double tuple[5],
                                  int* verdict, double* margin) {
  if (!result) return null_argument("result");
  if (index >= result->rows.size()) {
    return fail(GPID_ERR_OUT_OF_RANGE, "row index " + std::to_string(index) + " out of range");
  }
  const auto& row = result->rows[index];
  if (tuple) std::copy(row.tuple.begin(), row.tuple.end(), tuple);
  if (verdict) *verdict = row.verdict ? 1 : 0;
  if (margin) *margin = row.margin;
  return GPID_OK;
}

size_t gpid_sweep_result_stable_count(const gpid_sweep_result* result) {
  if (!result) return 0;
  return static_cast<size_t>(std::count_if(result->rows.begin(), result->rows.end(),
                                           [](const gpid::SweepRow& r) { return r.verdict; }));
}

gpid_status gpid_sweep_result_write_csv(const gpid_sweep_result* result, const char* path) {
  if (!result) return null_argument("result");
  if (!path) return null_argument("path");
  return guarded([&] { gpid::write_sweep_csv(path, result->rows, result->classifier); });
}

gpid_status gpid_verify_run(double tolerance_scale, gpid_verify_report** out) {
  if (!out) return null_argument("out");
  *out = nullptr;
  if (!(tolerance_scale >= 0.0)) {
    return fail(GPID_ERR_INVALID_ARGUMENT, "tolerance_scale must be non-negative");
  }
  return guarded([&] { *out = new gpid_verify_report{gpid::run_verify_suite(tolerance_scale)}; });
}

void gpid_verify_report_destroy(gpid_verify_report* report) { delete report; }

size_t gpid_verify_report_count(const gpid_verify_report* report) {
  return report ? report->items.size() : 0;
}

const char* gpid_verify_report_name(const gpid_verify_report* report, size_t index) {
  return report && index < report->items.size() ? report->items[index].name.c_str() : nullptr;
}

int gpid_verify_report_passed(const gpid_verify_report* report, size_t index) {
  return report && index < report->items.size() && report->items[index].passed;
}

double gpid_verify_report_measured(const gpid_verify_report* report, size_t index) {
  return report && index < report->items.size() ? report->items[index].measured : 0.0;
}

double gpid_verify_report_threshold(const gpid_verify_report* report, size_t index) {
  return report && index < report->items.size() ? report->items[index].threshold : 0.0;
}

const char* gpid_verify_report_detail(const gpid_verify_report* report, size_t index) {
  return report && index < report->items.size() ? report->items[index].detail.c_str() : nullptr;
}

int gpid_verify_report_all_passed(const gpid_verify_report* report) {
  if (!report || report->items.empty()) return 0;
  return std::all_of(report->items.begin(), report->items.end(),
                     [](const gpid::InvariantResult& r) { return r.passed; });
}

gpid_status gpid_check_cond2(double k_I, double k_D, double b, double k_P, double beta,
                             double d_r, double d_c, gpid_cond2_result* out) {
  if (!out) return null_argument("out");
  return guarded([&] {
    const auto r = gpid::check_cond2(k_I, k_D, b, k_P, beta, d_r, d_c);
    *out = {r.passed ? 1 : 0, r.f, r.k_I_margin, r.k_D_margin};
  });
}

gpid_status gpid_predicted_residual_omega(double omega0, double k_P, double v_x, double v_y,
                                          double* plus, double* minus) {
  return guarded([&] {
    const gpid::BodyVelocity v(gpid::Vec2(v_x, v_y));
    const auto r = gpid::predicted_residual_omega(omega0, k_P, v.norm(), v.misalignment());
    if (plus) *plus = r.plus;
    if (minus) *minus = r.minus;
  });
}

gpid_status gpid_routh_hurwitz(double omega0, double k_P, double k_I, double v_norm, double phi,
                               gpid_routh_result* out) {
  if (!out) return null_argument("out");
  return guarded([&] {
    const auto r = gpid::routh_hurwitz_stable(omega0, k_P, k_I, v_norm, phi);
    *out = {r.sufficient_ok ? 1 : 0, r.exact_ok ? 1 : 0, r.poly.a2, r.poly.a1, r.poly.a0};
  });
}

}  // extern "C"

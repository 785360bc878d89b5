// gpid: runs the simulation scenarios, stability sweeps and the invariant
// suite from the command line. Talks to the library only through gpid.h.

#include "gpid/gpid.h"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace {

constexpr int kExitOk = 0;
constexpr int kExitVerifyFailed = 1;
constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct NumericalFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Turns a failed library call into the matching CLI exception.
void check(gpid_status st) {
  if (st == GPID_OK) return;
  std::string msg = gpid_last_error();
  if (msg.empty()) msg = gpid_status_string(st);
  if (st == GPID_ERR_NUMERICAL) throw NumericalFailure(msg);
  throw ConfigError(msg);
}

template <typename T, void (*Destroy)(T*)>
struct Deleter {
  void operator()(T* p) const { Destroy(p); }
};
using ScenarioPtr = std::unique_ptr<gpid_scenario, Deleter<gpid_scenario, gpid_scenario_destroy>>;
using RunPtr = std::unique_ptr<gpid_run, Deleter<gpid_run, gpid_run_destroy>>;
using SweepPtr = std::unique_ptr<gpid_sweep, Deleter<gpid_sweep, gpid_sweep_destroy>>;
using SweepResultPtr =
    std::unique_ptr<gpid_sweep_result, Deleter<gpid_sweep_result, gpid_sweep_result_destroy>>;
using ReportPtr =
    std::unique_ptr<gpid_verify_report, Deleter<gpid_verify_report, gpid_verify_report_destroy>>;

std::string trim(std::string s) {
  const auto b = s.find_first_not_of(" \t");
  const auto e = s.find_last_not_of(" \t");
  return b == std::string::npos ? std::string{} : s.substr(b, e - b + 1);
}

double parse_plain(const std::string& text, const std::string& key) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != text.size() || !std::isfinite(v)) {
    throw ConfigError("parameter '" + key + "': cannot parse '" + text + "' as a number");
  }
  return v;
}

// Numbers, optionally written as multiples of pi: "pi", "-pi/2", "2*pi/3".
double parse_number(const std::string& raw, const std::string& key) {
  std::string text = trim(raw);
  const auto pos = text.find("pi");
  if (pos == std::string::npos) return parse_plain(text, key);

  double factor = 1.0;
  std::string head = text.substr(0, pos);
  if (head == "-") {
    factor = -1.0;
  } else if (!head.empty() && head != "+") {
    if (head.back() != '*') throw ConfigError("parameter '" + key + "': bad value '" + raw + "'");
    head.pop_back();
    factor = parse_plain(head, key);
  }
  const std::string tail = text.substr(pos + 2);
  double divisor = 1.0;
  if (!tail.empty()) {
    if (tail.front() != '/') throw ConfigError("parameter '" + key + "': bad value '" + raw + "'");
    divisor = parse_plain(tail.substr(1), key);
    if (divisor == 0.0) throw ConfigError("parameter '" + key + "': division by zero");
  }
  return factor * std::numbers::pi / divisor;
}

std::pair<std::string, std::string> split_assignment(const std::string& item) {
  const auto eq = item.find('=');
  if (eq == std::string::npos || eq == 0) {
    throw ConfigError("--set expects key=value, got '" + item + "'");
  }
  return {trim(item.substr(0, eq)), trim(item.substr(eq + 1))};
}

nlohmann::json load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  try {
    nlohmann::json j = nlohmann::json::parse(in);
    if (!j.is_object()) throw ConfigError("config file '" + path + "' must hold a JSON object");
    return j;
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError("config file '" + path + "': " + e.what());
  }
}

double json_number(const nlohmann::json& v, const std::string& key) {
  if (v.is_number()) return v.get<double>();
  if (v.is_string()) return parse_number(v.get<std::string>(), key);
  throw ConfigError("parameter '" + key + "' must be a number");
}

struct CommonOptions {
  std::string config;
  std::vector<std::string> sets;
  std::string out;
  bool quiet = false;
};

// Flat key/value map from the config file, overlaid by --set. Files may hold
// the parameters at top level or under "parameters", next to optional
// "scenario" and "output_path" entries.
struct Settings {
  std::map<std::string, nlohmann::json> values;
  std::vector<std::string> order;
  std::string output_path;

  void put(const std::string& key, nlohmann::json v) {
    if (!values.count(key)) order.push_back(key);
    values[key] = std::move(v);
  }
};

Settings collect_settings(const CommonOptions& opt, const std::string& scenario) {
  Settings s;
  if (!opt.config.empty()) {
    const nlohmann::json j = load_json(opt.config);
    const nlohmann::json* params = &j;
    if (j.contains("parameters")) {
      params = &j.at("parameters");
      if (!params->is_object()) throw ConfigError("'parameters' must be a JSON object");
    }
    if (j.contains("scenario")) {
      if (!j.at("scenario").is_string() || j.at("scenario").get<std::string>() != scenario) {
        throw ConfigError("config file is for scenario " + j.at("scenario").dump() +
                          ", not '" + scenario + "'");
      }
    }
    if (j.contains("output_path")) {
      if (!j.at("output_path").is_string()) throw ConfigError("'output_path' must be a string");
      s.output_path = j.at("output_path").get<std::string>();
    }
    for (const auto& [k, v] : params->items()) {
      if (params == &j && (k == "scenario" || k == "output_path" || k == "parameters")) continue;
      s.put(k, v);
    }
  }
  for (const auto& item : opt.sets) {
    auto [k, v] = split_assignment(item);
    s.put(k, v);
  }
  if (!opt.out.empty()) s.output_path = opt.out;
  return s;
}

int run_scenario_command(const std::string& name, const CommonOptions& opt) {
  Settings s = collect_settings(opt, name);
  gpid_scenario* raw = nullptr;
  check(gpid_scenario_create(name.c_str(), &raw));
  ScenarioPtr scenario(raw);
  for (const auto& key : s.order) {
    check(gpid_scenario_set(scenario.get(), key.c_str(), json_number(s.values.at(key), key)));
  }

  gpid_run* run_raw = nullptr;
  check(gpid_scenario_run(scenario.get(), &run_raw));
  RunPtr run(run_raw);

  const std::string out = s.output_path.empty() ? name + ".csv" : s.output_path;
  check(gpid_run_write_csv(run.get(), out.c_str()));

  for (std::size_t i = 0; i < gpid_run_warning_count(run.get()); ++i) {
    std::cerr << "warning: " << gpid_run_warning(run.get(), i) << '\n';
  }
  if (!opt.quiet) {
    std::cout << gpid_run_summary_line(run.get()) << '\n' << "wrote " << out << '\n';
  }
  return kExitOk;
}

// Axis values: "a", "a,b,c" or "lo:hi:n".
std::vector<double> parse_axis(const std::string& key, const nlohmann::json& v) {
  if (v.is_number()) return {v.get<double>()};
  if (v.is_array()) {
    std::vector<double> out;
    for (const auto& e : v) out.push_back(json_number(e, key));
    return out;
  }
  if (!v.is_string()) throw ConfigError("sweep axis '" + key + "' must be a number, list or range");
  const std::string text = v.get<std::string>();
  if (text.find(':') != std::string::npos) {
    std::vector<std::string> parts;
    std::size_t start = 0;
    for (std::size_t p; (p = text.find(':', start)) != std::string::npos; start = p + 1) {
      parts.push_back(text.substr(start, p - start));
    }
    parts.push_back(text.substr(start));
    if (parts.size() != 3) throw ConfigError("sweep axis '" + key + "': range must be lo:hi:n");
    const double lo = parse_number(parts[0], key);
    const double hi = parse_number(parts[1], key);
    const double n = parse_plain(trim(parts[2]), key);
    if (n < 1 || n != std::floor(n) || n > 1e7) {
      throw ConfigError("sweep axis '" + key + "': point count must be a positive integer");
    }
    const auto count = static_cast<std::size_t>(n);
    std::vector<double> out(count);
    for (std::size_t i = 0; i < count; ++i) {
      out[i] = count == 1 ? lo : lo + (hi - lo) * static_cast<double>(i) / (n - 1.0);
    }
    return out;
  }
  std::vector<double> out;
  std::size_t start = 0;
  for (std::size_t p;; start = p + 1) {
    p = text.find(',', start);
    out.push_back(parse_number(text.substr(start, p - start), key));
    if (p == std::string::npos) break;
  }
  return out;
}

int run_sweep_command(const CommonOptions& opt, std::string classifier) {
  Settings s = collect_settings(opt, "vehicle-integral");
  unsigned threads = 0;
  std::vector<std::pair<std::string, std::vector<double>>> axes;
  for (const auto& key : s.order) {
    const auto& v = s.values.at(key);
    if (key == "classifier") {
      if (!v.is_string()) throw ConfigError("'classifier' must be a string");
      classifier = v.get<std::string>();
    } else if (key == "threads") {
      const double t = json_number(v, key);
      if (t < 0 || t != std::floor(t)) throw ConfigError("'threads' must be a non-negative integer");
      threads = static_cast<unsigned>(t);
    } else {
      axes.emplace_back(key, parse_axis(key, v));
    }
  }

  gpid_sweep* raw = nullptr;
  check(gpid_sweep_create(classifier.c_str(), &raw));
  SweepPtr sweep(raw);
  for (const auto& [axis, values] : axes) {
    check(gpid_sweep_set_axis(sweep.get(), axis.c_str(), values.data(), values.size()));
  }
  gpid_sweep_result* res_raw = nullptr;
  check(gpid_sweep_run(sweep.get(), threads, &res_raw));
  SweepResultPtr result(res_raw);

  const std::string out = s.output_path.empty() ? "sweep.csv" : s.output_path;
  check(gpid_sweep_result_write_csv(result.get(), out.c_str()));
  if (!opt.quiet) {
    std::cout << "sweep: classifier=" << classifier
              << " tuples=" << gpid_sweep_result_rows(result.get())
              << " stable=" << gpid_sweep_result_stable_count(result.get()) << '\n'
              << "wrote " << out << '\n';
  }
  return kExitOk;
}

int run_verify_command(const CommonOptions& opt) {
  Settings s = collect_settings(opt, "verify");
  double scale = 1.0;
  for (const auto& key : s.order) {
    if (key != "tolerance_scale") throw ConfigError("unknown parameter '" + key + "'");
    scale = json_number(s.values.at(key), key);
  }

  gpid_verify_report* raw = nullptr;
  check(gpid_verify_run(scale, &raw));
  ReportPtr report(raw);
  const std::size_t n = gpid_verify_report_count(report.get());
  const bool ok = gpid_verify_report_all_passed(report.get()) != 0;

  std::size_t width = 0;
  for (std::size_t i = 0; i < n; ++i) {
    width = std::max(width, std::string(gpid_verify_report_name(report.get(), i)).size());
  }
  for (std::size_t i = 0; i < n; ++i) {
    const bool passed = gpid_verify_report_passed(report.get(), i) != 0;
    if (opt.quiet && passed) continue;
    std::printf("%-4s  %-*s  measured=%-12.4g threshold=%-12.4g %s\n", passed ? "PASS" : "FAIL",
                static_cast<int>(width), gpid_verify_report_name(report.get(), i),
                gpid_verify_report_measured(report.get(), i),
                gpid_verify_report_threshold(report.get(), i),
                gpid_verify_report_detail(report.get(), i));
  }
  std::size_t failed = 0;
  for (std::size_t i = 0; i < n; ++i) failed += gpid_verify_report_passed(report.get(), i) ? 0 : 1;
  std::printf("%zu invariants, %zu failed\n", n, failed);

  if (!s.output_path.empty()) {
    std::ofstream os(s.output_path);
    if (!os) throw ConfigError("cannot open '" + s.output_path + "' for writing");
    os << "name,passed,measured,threshold,detail\n";
    for (std::size_t i = 0; i < n; ++i) {
      char buf[64];
      os << gpid_verify_report_name(report.get(), i) << ','
         << gpid_verify_report_passed(report.get(), i) << ',';
      std::snprintf(buf, sizeof buf, "%.17g", gpid_verify_report_measured(report.get(), i));
      os << buf << ',';
      std::snprintf(buf, sizeof buf, "%.17g", gpid_verify_report_threshold(report.get(), i));
      os << buf << ",\"" << gpid_verify_report_detail(report.get(), i) << "\"\n";
    }
  }
  std::fflush(stdout);
  return ok ? kExitOk : kExitVerifyFailed;
}

void add_common(CLI::App* cmd, CommonOptions& opt) {
  cmd->add_option("--config", opt.config, "JSON configuration file");
  cmd->add_option("--set", opt.sets, "Override a parameter, key=value (repeatable)")
      ->allow_extra_args(true)
      ->take_all();
  cmd->add_option("--out", opt.out, "Output CSV path");
  cmd->add_flag("--quiet", opt.quiet, "Only print warnings and errors");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Integral control on the circle group: simulations, sweeps and checks"};
  app.require_subcommand(1);
  app.set_version_flag("--version", gpid_version());

  CommonOptions opt;
  std::string classifier = "routh-exact";

  const std::vector<std::pair<std::string, std::string>> scenarios{
      {"pendulum", "Pendulum stabilized by second-order PID under gravity bias"},
      {"vehicle", "Steering vehicle on a circle with the nominal controller"},
      {"vehicle-integral", "Steering vehicle with the adapted integral controller"}};
  std::vector<CLI::App*> scenario_cmds;
  for (const auto& [name, help] : scenarios) {
    auto* cmd = app.add_subcommand(name, help);
    add_common(cmd, opt);
    scenario_cmds.push_back(cmd);
  }
  auto* sweep = app.add_subcommand("sweep", "Classify local stability over a parameter grid");
  add_common(sweep, opt);
  sweep->add_option("--classifier", classifier, "routh-sufficient, routh-exact or eigen");
  auto* verify = app.add_subcommand("verify", "Run the invariant suite");
  add_common(verify, opt);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitConfig;
  }

  try {
    for (std::size_t i = 0; i < scenario_cmds.size(); ++i) {
      if (scenario_cmds[i]->parsed()) return run_scenario_command(scenarios[i].first, opt);
    }
    if (sweep->parsed()) return run_sweep_command(opt, classifier);
    return run_verify_command(opt);
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const NumericalFailure& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfig;
  }
}

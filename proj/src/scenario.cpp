#include "gpid/scenario.hpp"

#include "gpid/error.hpp"
#include "gpid/pendulum.hpp"
#include "gpid/vehicle.hpp"
#include "gpid/vehicle_integral.hpp"
#include "gpid/verify.hpp"

#include <cmath>
#include <sstream>

namespace gpid {

namespace {

using D = ParamSpec::Default;

const std::vector<ParamSpec> kPendulumParams{
    {"w", D::Required, 0.0, "gravity to inertia ratio (1/s^2)"},
    {"b", D::Required, 0.0, "velocity coefficient (1/s); negative is damping"},
    {"k_P", D::Required, 0.0, "proportional gain"},
    {"k_I", D::Required, 0.0, "integral gain"},
    {"k_D", D::Required, 0.0, "derivative gain"},
    {"theta_target", D::Required, 0.0, "target angle (rad)"},
    {"beta", D::Derived, 0.0, "Lyapunov weight; defaults to 1/(k_P (b + k_I) k_I)"},
    {"theta_init", D::Value, 0.0, "initial angle (rad)"},
    {"omega_init", D::Value, 0.0, "initial angular velocity (rad/s)"},
    {"u_I_init", D::Value, 0.0, "initial integrator state"},
    {"t_end", D::Value, 50.0, "final time (s)"},
    {"h", D::Value, kDefaultStep, "RK4 step (s)"},
};

std::vector<ParamSpec> vehicle_params(bool with_integral) {
  std::vector<ParamSpec> p{
      {"omega_0", D::Required, 0.0, "reference turning rate (rad/s)"},
      {"k_P", D::Required, 0.0, "proportional gain"},
  };
  if (with_integral) p.push_back({"k_I", D::Required, 0.0, "integral gain"});
  p.insert(p.end(), {
                        {"v_x", D::Required, 0.0, "body-frame velocity, forward component"},
                        {"v_y", D::Required, 0.0, "body-frame velocity, lateral component"},
                        {"c_r_x", D::Value, 0.0, "reference circle center x"},
                        {"c_r_y", D::Value, 0.0, "reference circle center y"},
                        {"phase_0", D::Value, 0.0, "reference heading at t=0 (rad)"},
                        {"heading_init", D::Value, 0.0, "initial heading (rad)"},
                        {"p_x_init", D::Value, 0.0, "initial position x"},
                        {"p_y_init", D::Value, 0.0, "initial position y"},
                    });
  if (with_integral) p.push_back({"omega_I_init", D::Value, 0.0, "initial integrator state"});
  p.push_back({"t_end", D::Value, 200.0, "final time (s)"});
  p.push_back({"h", D::Value, kDefaultStep, "RK4 step (s)"});
  return p;
}

const std::vector<ParamSpec> kVehicleParams = vehicle_params(false);
const std::vector<ParamSpec> kVehicleIntegralParams = vehicle_params(true);

class Lookup {
 public:
  explicit Lookup(const NamedValues& values) : values_(values) {}
  double operator[](const std::string& key) const {
    for (const auto& [k, v] : values_) {
      if (k == key) return v;
    }
    throw MissingKeyError(key);
  }

 private:
  const NamedValues& values_;
};

void require_finite_params(const NamedValues& values) {
  for (const auto& [k, v] : values) {
    if (!std::isfinite(v)) throw InvalidArgument("parameter '" + k + "' must be finite");
  }
}

Reference make_reference(const Lookup& p) {
  Reference ref;
  ref.omega0 = p["omega_0"];
  ref.center = Vec2(p["c_r_x"], p["c_r_y"]);
  ref.phase0 = Angle(p["phase_0"]);
  return ref;
}

Pose make_init_pose(const Lookup& p) {
  return {Angle(p["heading_init"]), Vec2(p["p_x_init"], p["p_y_init"])};
}

BodyVelocity make_velocity(const Lookup& p) {
  const Vec2 v(p["v_x"], p["v_y"]);
  if (!(v.norm() > 0.0)) throw InvalidArgument("parameters 'v_x', 'v_y' must not both be zero");
  return BodyVelocity(v);
}

ScenarioResult run_pendulum(const NamedValues& params) {
  const Lookup p(params);
  PendulumConfig cfg;
  cfg.w = p["w"];
  cfg.b = p["b"];
  cfg.theta_target = Angle(p["theta_target"]);
  cfg.gains = make_gains(p["k_P"], p["k_I"], p["k_D"], p["beta"]);
  cfg.theta0 = p["theta_init"];
  cfg.omega0 = p["omega_init"];
  cfg.u_I0 = p["u_I_init"];
  cfg.t_end = p["t_end"];
  cfg.h = p["h"];

  PendulumRun run = simulate_pendulum(cfg);
  ScenarioResult r;
  r.kind = ScenarioKind::Pendulum;
  r.params = params;
  r.warnings = std::move(run.warnings);
  r.trajectory = std::move(run.trajectory);

  const auto& traj = r.trajectory;
  const StateVector& x = traj.final_state();
  const MonotoneReport mono = check_monotone_nonincreasing(traj.monitor("V"), 1e-9 * cfg.h);
  r.summary = {
      {"theta_final", wrap_angle(x[0])},
      {"theta_err_final", traj.final_monitor("theta_err")},
      {"omega_final", x[1]},
      {"kI_uI_final", cfg.gains.k_I * x[2]},
      {"kI_uI_predicted", -pendulum_bias(cfg.theta_target.value(), cfg.w)},
      {"V_final", traj.final_monitor("V")},
      {"V_monotone", mono.passed ? 1.0 : 0.0},
      {"V_worst_increase", mono.worst_violation},
      {"cond2_passed", run.cond2.passed ? 1.0 : 0.0},
      {"cond2_f", run.cond2.f},
  };
  return r;
}

ScenarioResult run_vehicle(const NamedValues& params) {
  const Lookup p(params);
  NominalConfig cfg;
  cfg.v = make_velocity(p);
  cfg.ref = make_reference(p);
  cfg.k_P = p["k_P"];
  cfg.init = make_init_pose(p);
  cfg.t_end = p["t_end"];
  cfg.h = p["h"];

  NominalRun run = simulate_nominal(cfg);
  ScenarioResult r;
  r.kind = ScenarioKind::Vehicle;
  r.params = params;
  r.warnings = std::move(run.warnings);
  r.trajectory = std::move(run.trajectory);

  const auto& traj = r.trajectory;
  const StateVector& x = traj.final_state();
  r.summary = {
      {"omega_P_final", traj.final_monitor("omega_P")},
  };
  if (run.has_prediction) {
    r.summary.emplace_back("omega_P_predicted", run.prediction.plus);
  }
  r.summary.emplace_back("c_dist_final", traj.final_monitor("c_dist"));
  r.summary.emplace_back("chat_dist_final", traj.final_monitor("chat_dist"));
  r.summary.emplace_back("radius_final", (Vec2(x[1], x[2]) - cfg.ref.center).norm());
  if (run.has_prediction) {
    r.summary.emplace_back("radius_predicted",
                           cfg.v.norm() / (cfg.ref.omega0 + run.prediction.plus));
  }
  r.summary.emplace_back("V_center_final", traj.final_monitor("V_center"));
  return r;
}

ScenarioResult run_vehicle_integral(const NamedValues& params) {
  const Lookup p(params);
  IntegralConfig cfg;
  cfg.v = make_velocity(p);
  cfg.ref = make_reference(p);
  cfg.k_P = p["k_P"];
  cfg.k_I = p["k_I"];
  cfg.init = make_init_pose(p);
  cfg.omega_I0 = p["omega_I_init"];
  cfg.t_end = p["t_end"];
  cfg.h = p["h"];

  IntegralRun run = simulate_integral(cfg);
  ScenarioResult r;
  r.kind = ScenarioKind::VehicleIntegral;
  r.params = params;
  r.warnings = std::move(run.warnings);
  r.trajectory = std::move(run.trajectory);

  const auto& traj = r.trajectory;
  r.summary = {
      {"omega_cmd_final", traj.final_monitor("omega_cmd")},
      {"omega_0", cfg.ref.omega0},
      {"c_dist_final", traj.final_monitor("c_dist")},
      {"omega_I_final", traj.final_state()[3]},
      {"omega_I_predicted", run.omega_I_equilibrium},
      {"omega_P_final", traj.final_monitor("omega_P")},
      {"routh_sufficient", run.routh.sufficient_ok ? 1.0 : 0.0},
      {"routh_exact", run.routh.exact_ok ? 1.0 : 0.0},
  };
  return r;
}

}  // namespace

std::optional<ScenarioKind> parse_scenario_kind(std::string_view name) {
  if (name == "pendulum") return ScenarioKind::Pendulum;
  if (name == "vehicle") return ScenarioKind::Vehicle;
  if (name == "vehicle-integral") return ScenarioKind::VehicleIntegral;
  return std::nullopt;
}

std::string_view to_string(ScenarioKind kind) {
  switch (kind) {
    case ScenarioKind::Pendulum:
      return "pendulum";
    case ScenarioKind::Vehicle:
      return "vehicle";
    case ScenarioKind::VehicleIntegral:
      return "vehicle-integral";
  }
  return "unknown";
}

const std::vector<ParamSpec>& scenario_parameters(ScenarioKind kind) {
  switch (kind) {
    case ScenarioKind::Pendulum:
      return kPendulumParams;
    case ScenarioKind::Vehicle:
      return kVehicleParams;
    case ScenarioKind::VehicleIntegral:
      return kVehicleIntegralParams;
  }
  return kPendulumParams;
}

void ScenarioConfig::set(const std::string& key, double value) {
  for (const auto& spec : scenario_parameters(kind_)) {
    if (spec.name == key) {
      if (!std::isfinite(value)) {
        throw InvalidArgument("parameter '" + key + "' must be finite");
      }
      values_[key] = value;
      return;
    }
  }
  throw UnknownKeyError(key);
}

std::vector<std::pair<std::string, double>> ScenarioConfig::resolved() const {
  NamedValues out;
  for (const auto& spec : scenario_parameters(kind_)) {
    if (const auto it = values_.find(spec.name); it != values_.end()) {
      out.emplace_back(spec.name, it->second);
      continue;
    }
    switch (spec.kind) {
      case D::Required:
        throw MissingKeyError(spec.name);
      case D::Value:
        out.emplace_back(spec.name, spec.value);
        break;
      case D::Derived:
        out.emplace_back(spec.name, 0.0);  // filled below
        break;
    }
  }
  // beta is the only derived parameter: the value that zeroes the
  // Gershgorin cross term f.
  if (kind_ == ScenarioKind::Pendulum && !has("beta")) {
    const Lookup p(out);
    const double denom = p["k_P"] * (p["b"] + p["k_I"]) * p["k_I"];
    if (!(denom > 0.0)) {
      throw InvalidArgument("parameter 'beta' has no default when k_P (b + k_I) k_I <= 0");
    }
    for (auto& [k, v] : out) {
      if (k == "beta") v = 1.0 / denom;
    }
  }
  return out;
}

std::optional<double> ScenarioResult::summary_value(const std::string& key) const {
  for (const auto& [k, v] : summary) {
    if (k == key) return v;
  }
  return std::nullopt;
}

ScenarioResult run_scenario(const ScenarioConfig& cfg) {
  const NamedValues params = cfg.resolved();
  require_finite_params(params);
  switch (cfg.kind()) {
    case ScenarioKind::Pendulum:
      return run_pendulum(params);
    case ScenarioKind::Vehicle:
      return run_vehicle(params);
    case ScenarioKind::VehicleIntegral:
      return run_vehicle_integral(params);
  }
  throw InvalidArgument("unknown scenario");
}

std::string format_summary(const ScenarioResult& result) {
  std::ostringstream os;
  os << to_string(result.kind) << ':';
  os.precision(10);
  for (const auto& [k, v] : result.summary) os << ' ' << k << '=' << v;
  return os.str();
}

Metadata scenario_metadata(const ScenarioResult& result) {
  Metadata m;
  m.emplace_back("format", "gpid-trajectory-v1");
  m.emplace_back("scenario", std::string(to_string(result.kind)));
  for (const auto& [k, v] : result.params) m.emplace_back("param." + k, format_double(v));
  for (const auto& [k, v] : result.summary) m.emplace_back("summary." + k, format_double(v));
  for (const auto& w : result.warnings) m.emplace_back("warning", w);
  return m;
}

void write_scenario_csv(const std::string& path, const ScenarioResult& result) {
  write_trajectory_csv(path, result.trajectory, scenario_metadata(result));
}

ScenarioResult read_scenario_csv(const std::string& path) {
  CsvDocument doc = read_trajectory_csv(path);
  const auto kind = parse_scenario_kind(doc.meta("scenario"));
  if (!kind) throw IoError("'" + path + "' does not name a known scenario");
  ScenarioResult r;
  r.kind = *kind;
  r.trajectory = std::move(doc.trajectory);
  auto to_double = [&path](const std::string& s) {
    try {
      std::size_t used = 0;
      const double v = std::stod(s, &used);
      if (used != s.size()) throw std::invalid_argument(s);
      return v;
    } catch (const std::exception&) {
      throw IoError("'" + path + "': bad metadata number '" + s + "'");
    }
  };
  for (const auto& [k, v] : doc.metadata) {
    if (k.rfind("param.", 0) == 0) {
      r.params.emplace_back(k.substr(6), to_double(v));
    } else if (k.rfind("summary.", 0) == 0) {
      r.summary.emplace_back(k.substr(8), to_double(v));
    } else if (k == "warning") {
      r.warnings.push_back(v);
    }
  }
  return r;
}

}  // namespace gpid

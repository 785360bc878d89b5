#pragma once

// Named-parameter scenario runs behind the command line tool and the C API.
// A configuration is a flat map from parameter name to number; unknown names
// are rejected and parameters without a default must be supplied.

#include "gpid/csv.hpp"
#include "gpid/ode.hpp"

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace gpid {

enum class ScenarioKind { Pendulum, Vehicle, VehicleIntegral };

std::optional<ScenarioKind> parse_scenario_kind(std::string_view name);
std::string_view to_string(ScenarioKind kind);

struct ParamSpec {
  enum class Default { Required, Value, Derived };

  std::string name;
  Default kind = Default::Required;
  double value = 0.0;
  std::string help;
};

/// Parameters accepted by a scenario, in output order.
const std::vector<ParamSpec>& scenario_parameters(ScenarioKind kind);

class ScenarioConfig {
 public:
  explicit ScenarioConfig(ScenarioKind kind) : kind_(kind) {}

  ScenarioKind kind() const noexcept { return kind_; }

  /// Throws UnknownKeyError for names the scenario does not accept.
  void set(const std::string& key, double value);
  bool has(const std::string& key) const { return values_.count(key) != 0; }

  /// Every parameter with defaults filled in, in scenario_parameters order.
  /// Throws MissingKeyError naming the first absent required parameter.
  std::vector<std::pair<std::string, double>> resolved() const;

 private:
  ScenarioKind kind_;
  std::map<std::string, double> values_;
};

using NamedValues = std::vector<std::pair<std::string, double>>;

struct ScenarioResult {
  ScenarioKind kind = ScenarioKind::Pendulum;
  Trajectory trajectory;
  NamedValues params;
  /// Final monitor values and, where a closed form exists, predicted steady
  /// states. Verdicts are stored as 1 (pass) or 0 (fail).
  NamedValues summary;
  std::vector<std::string> warnings;

  std::optional<double> summary_value(const std::string& key) const;
};

/// Throws InvalidArgument (including UnknownKeyError / MissingKeyError) for a
/// bad configuration and NumericalError when integration fails.
ScenarioResult run_scenario(const ScenarioConfig& cfg);

/// One line: "<scenario>: key=value key=value ...".
std::string format_summary(const ScenarioResult& result);

/// Metadata block embedding the resolved configuration and the summary.
Metadata scenario_metadata(const ScenarioResult& result);

void write_scenario_csv(const std::string& path, const ScenarioResult& result);

/// Rebuilds a result (trajectory, parameters, summary) from a written file.
ScenarioResult read_scenario_csv(const std::string& path);

}  // namespace gpid

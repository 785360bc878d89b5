#pragma once

// Trajectory CSV format:
//
//   # key=value            metadata, one per line, above the header
//   # state_columns=N      always present; splits states from monitors
//   t,<state...>,<monitor...>
//   <rows>
//
// Numbers are written in shortest round-trip form, so reading a file back
// reproduces every value bit for bit.

#include "gpid/ode.hpp"

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

namespace gpid {

using Metadata = std::vector<std::pair<std::string, std::string>>;

struct CsvDocument {
  Metadata metadata;
  Trajectory trajectory;

  /// First metadata value for `key`, or empty when absent.
  std::string meta(const std::string& key) const;
};

std::string format_double(double x);

void write_trajectory_csv(std::ostream& os, const Trajectory& traj, const Metadata& metadata);
void write_trajectory_csv(const std::string& path, const Trajectory& traj,
                          const Metadata& metadata);

CsvDocument read_trajectory_csv(std::istream& is);
CsvDocument read_trajectory_csv(const std::string& path);

}  // namespace gpid

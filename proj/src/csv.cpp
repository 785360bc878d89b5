#include "gpid/csv.hpp"

#include "gpid/error.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace gpid {

namespace {

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string::size_type start = 0;
  while (true) {
    const auto pos = line.find(sep, start);
    out.push_back(line.substr(start, pos - start));
    if (pos == std::string::npos) break;
    start = pos + 1;
  }
  return out;
}

double parse_double(const std::string& s, std::size_t line_no) {
  double v = 0.0;
  const char* first = s.data();
  const char* last = s.data() + s.size();
  const auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last) {
    std::ostringstream msg;
    msg << "csv line " << line_no << ": cannot parse number '" << s << "'";
    throw IoError(msg.str());
  }
  return v;
}

std::string strip_cr(std::string s) {
  if (!s.empty() && s.back() == '\r') s.pop_back();
  return s;
}

}  // namespace

std::string CsvDocument::meta(const std::string& key) const {
  for (const auto& [k, v] : metadata) {
    if (k == key) return v;
  }
  return {};
}

std::string format_double(double x) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), x);
  if (ec != std::errc()) {
    throw IoError("format_double: conversion failed");
  }
  return std::string(buf, ptr);
}

void write_trajectory_csv(std::ostream& os, const Trajectory& traj, const Metadata& metadata) {
  const std::size_t dim = traj.dimension();
  for (const auto& [k, v] : metadata) {
    if (k.find('=') != std::string::npos || k.find('\n') != std::string::npos ||
        v.find('\n') != std::string::npos) {
      throw IoError("csv metadata entries must be single-line and keys may not contain '='");
    }
    os << "# " << k << '=' << v << '\n';
  }
  os << "# state_columns=" << dim << '\n';

  os << 't';
  for (std::size_t i = 0; i < dim; ++i) {
    os << ',' << (i < traj.state_names.size() ? traj.state_names[i] : "x" + std::to_string(i));
  }
  for (const auto& name : traj.monitor_names) os << ',' << name;
  os << '\n';

  for (std::size_t k = 0; k < traj.size(); ++k) {
    os << format_double(traj.times[k]);
    for (Eigen::Index i = 0; i < traj.states[k].size(); ++i) {
      os << ',' << format_double(traj.states[k][i]);
    }
    for (const auto& series : traj.monitor_values) os << ',' << format_double(series[k]);
    os << '\n';
  }
}

void write_trajectory_csv(const std::string& path, const Trajectory& traj,
                          const Metadata& metadata) {
  std::ofstream os(path);
  if (!os) throw IoError("cannot open '" + path + "' for writing");
  write_trajectory_csv(os, traj, metadata);
  os.flush();
  if (!os) throw IoError("failed writing '" + path + "'");
}

CsvDocument read_trajectory_csv(std::istream& is) {
  CsvDocument doc;
  std::string line;
  std::size_t line_no = 0;
  std::size_t state_columns = 0;
  bool have_state_columns = false;
  std::vector<std::string> header;

  while (std::getline(is, line)) {
    ++line_no;
    line = strip_cr(line);
    if (line.empty()) continue;
    if (line.front() == '#') {
      std::string body = line.substr(1);
      if (!body.empty() && body.front() == ' ') body.erase(0, 1);
      const auto eq = body.find('=');
      if (eq == std::string::npos) {
        doc.metadata.emplace_back(body, "");
        continue;
      }
      std::string key = body.substr(0, eq);
      std::string value = body.substr(eq + 1);
      if (key == "state_columns") {
        state_columns = static_cast<std::size_t>(parse_double(value, line_no));
        have_state_columns = true;
      } else {
        doc.metadata.emplace_back(std::move(key), std::move(value));
      }
      continue;
    }
    header = split(line, ',');
    break;
  }
  if (header.empty() || header.front() != "t") {
    throw IoError("csv: missing header row starting with 't'");
  }
  if (!have_state_columns || state_columns + 1 > header.size()) {
    throw IoError("csv: missing or inconsistent state_columns metadata");
  }

  Trajectory& traj = doc.trajectory;
  traj.state_names.assign(header.begin() + 1,
                          header.begin() + 1 + static_cast<std::ptrdiff_t>(state_columns));
  traj.monitor_names.assign(header.begin() + 1 + static_cast<std::ptrdiff_t>(state_columns),
                            header.end());
  traj.monitor_values.resize(traj.monitor_names.size());

  while (std::getline(is, line)) {
    ++line_no;
    line = strip_cr(line);
    if (line.empty()) continue;
    const auto cells = split(line, ',');
    if (cells.size() != header.size()) {
      std::ostringstream msg;
      msg << "csv line " << line_no << ": expected " << header.size() << " columns, got "
          << cells.size();
      throw IoError(msg.str());
    }
    traj.times.push_back(parse_double(cells[0], line_no));
    StateVector x(static_cast<Eigen::Index>(state_columns));
    for (std::size_t i = 0; i < state_columns; ++i) {
      x[static_cast<Eigen::Index>(i)] = parse_double(cells[1 + i], line_no);
    }
    traj.states.push_back(std::move(x));
    for (std::size_t m = 0; m < traj.monitor_names.size(); ++m) {
      traj.monitor_values[m].push_back(parse_double(cells[1 + state_columns + m], line_no));
    }
  }
  return doc;
}

CsvDocument read_trajectory_csv(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw IoError("cannot open '" + path + "' for reading");
  return read_trajectory_csv(is);
}

}  // namespace gpid

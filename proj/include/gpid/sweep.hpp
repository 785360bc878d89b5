#pragma once

// Parameter sweeps classifying local stability of the integral vehicle loop.

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace gpid {

enum class Classifier {
  /// Small-gain sufficient bounds.
  RouthSufficient,
  /// Routh-Hurwitz on the closed-form characteristic polynomial.
  RouthExact,
  /// Largest eigenvalue real part of the finite-difference linearization.
  Eigen,
};

std::optional<Classifier> parse_classifier(std::string_view name);
std::string_view to_string(Classifier c);

/// Sweep axes in row order; the last axis varies fastest.
inline constexpr std::array<std::string_view, 5> kSweepAxes{"omega_0", "k_P", "k_I", "v_norm",
                                                             "phi"};

struct SweepGrid {
  /// Defaults to the single point omega_0 = k_P = 1, k_I = 0.1, v = (1, 0.1).
  std::array<std::vector<double>, 5> axes = default_axes();

  static std::array<std::vector<double>, 5> default_axes();

  /// Throws InvalidArgument for an unknown axis or an empty value list.
  void set_axis(std::string_view name, std::vector<double> values);
  std::size_t size() const noexcept;
};

/// n evenly spaced values from lo to hi inclusive (n = 1 gives lo).
std::vector<double> linspace(double lo, double hi, std::size_t n);

struct SweepRow {
  std::array<double, 5> tuple{};
  bool verdict = false;
  /// Positive when stable: min of the bound margins (routh-sufficient),
  /// min(a2, a0, a2 a1 - a0) (routh-exact), or -max Re(lambda) (eigen).
  double margin = 0.0;
};

SweepRow classify(const std::array<double, 5>& tuple, Classifier classifier);

/// Evaluates every grid tuple, using up to `threads` workers (0 picks the
/// hardware concurrency). Rows come back in lexicographic index order
/// regardless of scheduling.
std::vector<SweepRow> run_sweep(const SweepGrid& grid, Classifier classifier,
                                unsigned threads = 0);

/// Header row: omega_0,k_P,k_I,v_norm,phi,verdict,margin.
void write_sweep_csv(const std::string& path, const std::vector<SweepRow>& rows,
                     Classifier classifier);

}  // namespace gpid

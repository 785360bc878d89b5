#include "gpid/sweep.hpp"

#include "gpid/csv.hpp"
#include "gpid/error.hpp"
#include "gpid/vehicle_integral.hpp"
#include "gpid/verify.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <thread>

namespace gpid {

std::optional<Classifier> parse_classifier(std::string_view name) {
  if (name == "routh-sufficient") return Classifier::RouthSufficient;
  if (name == "routh-exact") return Classifier::RouthExact;
  if (name == "eigen") return Classifier::Eigen;
  return std::nullopt;
}

std::string_view to_string(Classifier c) {
  switch (c) {
    case Classifier::RouthSufficient:
      return "routh-sufficient";
    case Classifier::RouthExact:
      return "routh-exact";
    case Classifier::Eigen:
      return "eigen";
  }
  return "unknown";
}

std::array<std::vector<double>, 5> SweepGrid::default_axes() {
  return {std::vector<double>{1.0}, std::vector<double>{1.0}, std::vector<double>{0.1},
          std::vector<double>{std::hypot(1.0, 0.1)}, std::vector<double>{std::atan2(0.1, 1.0)}};
}

void SweepGrid::set_axis(std::string_view name, std::vector<double> values) {
  const auto it = std::find(kSweepAxes.begin(), kSweepAxes.end(), name);
  if (it == kSweepAxes.end()) {
    throw UnknownKeyError(std::string(name));
  }
  if (values.empty()) {
    throw InvalidArgument("sweep axis '" + std::string(name) + "' has no values");
  }
  for (double v : values) {
    if (!std::isfinite(v)) {
      throw InvalidArgument("sweep axis '" + std::string(name) + "' has a non-finite value");
    }
  }
  axes[static_cast<std::size_t>(it - kSweepAxes.begin())] = std::move(values);
}

std::size_t SweepGrid::size() const noexcept {
  std::size_t n = 1;
  for (const auto& a : axes) n *= a.size();
  return n;
}

std::vector<double> linspace(double lo, double hi, std::size_t n) {
  if (n == 0) throw InvalidArgument("linspace: need at least one point");
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    out[i] = n == 1 ? lo : lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
  }
  return out;
}

SweepRow classify(const std::array<double, 5>& t, Classifier classifier) {
  const double omega0 = t[0], k_P = t[1], k_I = t[2], v_norm = t[3], phi = t[4];
  if (!(omega0 > 0.0) || !(k_P > 0.0) || !(k_I > 0.0) || !(v_norm > 0.0)) {
    throw InvalidArgument("sweep: omega_0, k_P, k_I and v_norm must be positive");
  }
  SweepRow row;
  row.tuple = t;
  switch (classifier) {
    case Classifier::RouthSufficient: {
      const RouthReport r = routh_hurwitz_stable(omega0, k_P, k_I, v_norm, phi);
      row.verdict = r.sufficient_ok;
      row.margin = std::min(r.bound1_margin, r.bound2_margin);
      break;
    }
    case Classifier::RouthExact: {
      const RouthReport r = routh_hurwitz_stable(omega0, k_P, k_I, v_norm, phi);
      row.verdict = r.exact_ok;
      row.margin = std::min({r.poly.a2, r.poly.a0, r.hurwitz_margin});
      break;
    }
    case Classifier::Eigen: {
      const IntegralParams p{omega0, k_P, k_I, BodyVelocity::from_polar(v_norm, phi)};
      const auto re = cubic_real_parts(characteristic_polynomial(linearization_jacobian(p)));
      row.verdict = re[0] < 0.0;
      row.margin = -re[0];
      break;
    }
  }
  return row;
}

std::vector<SweepRow> run_sweep(const SweepGrid& grid, Classifier classifier, unsigned threads) {
  const std::size_t n = grid.size();
  std::vector<SweepRow> rows(n);

  auto tuple_at = [&grid](std::size_t index) {
    std::array<double, 5> t{};
    for (std::size_t a = grid.axes.size(); a-- > 0;) {
      const auto& axis = grid.axes[a];
      t[a] = axis[index % axis.size()];
      index /= axis.size();
    }
    return t;
  };

  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(n, 1)));

  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::atomic<bool> failed{false};
  auto worker = [&] {
    try {
      for (std::size_t i = next++; i < n && !failed; i = next++) {
        rows[i] = classify(tuple_at(i), classifier);
      }
    } catch (...) {
      if (!failed.exchange(true)) failure = std::current_exception();
    }
  };

  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (unsigned k = 0; k < threads; ++k) pool.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);
  return rows;
}

void write_sweep_csv(const std::string& path, const std::vector<SweepRow>& rows,
                     Classifier classifier) {
  std::ofstream os(path);
  if (!os) throw IoError("cannot open '" + path + "' for writing");
  os << "# format=gpid-sweep-v1\n# classifier=" << to_string(classifier) << '\n';
  for (const auto& a : kSweepAxes) os << a << ',';
  os << "verdict,margin\n";
  for (const auto& r : rows) {
    for (double v : r.tuple) os << format_double(v) << ',';
    os << (r.verdict ? 1 : 0) << ',' << format_double(r.margin) << '\n';
  }
  os.flush();
  if (!os) throw IoError("failed writing '" + path + "'");
}

}  // namespace gpid

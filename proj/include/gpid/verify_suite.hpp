#pragma once

#include <string>
#include <vector>

namespace gpid {

struct InvariantResult {
  std::string name;
  bool passed = false;
  double measured = 0.0;
  double threshold = 0.0;
  std::string detail;
};

/// Runs the library's invariant suite: integrator order, potential and
/// Lyapunov identities, gain certificates, the three reference scenarios,
/// linearization fidelity and the stability-certificate sweeps.
///
/// Every tolerance is multiplied by `tolerance_scale`; 1 is the calibrated
/// suite. Names are unique and the order is fixed.
std::vector<InvariantResult> run_verify_suite(double tolerance_scale = 1.0);

}  // namespace gpid

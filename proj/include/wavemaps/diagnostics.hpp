#pragma once

#include <string>
#include <vector>

#include "wavemaps/config.hpp"

namespace wm {

struct CheckResult {
  std::string suite;
  std::string name;
  double value = 0.0;
  double tolerance = 0.0;
  // pass, fail, expected-fail (a negative control that fired), or
  // unexpected-pass (a negative control that stayed silent)
  std::string status;

  bool ok() const { return status == "pass" || status == "expected-fail"; }
};

/// Exact algebraic identities on a 1D grid: discrete null form, Box_tau
/// symbol, Parseval and inversion, free-flow group law and mode energy,
/// sharp modulation partition, Bernstein count, d_tau bounds.
std::vector<CheckResult> identity_suite(const DiagnosticsConfig& d);

/// The six vanishing cases at their default scales, plus negative controls.
std::vector<CheckResult> vanishing_suite(const DiagnosticsConfig& d);

/// Strichartz ratio spread across the tau ladder for each (p, q) pair.
std::vector<CheckResult> strichartz_suite(const DiagnosticsConfig& d);

/// Parses "p,q" where either entry may be "inf".
std::pair<double, double> parse_exponents(const std::string& pq);

}  // namespace wm

#pragma once

#include <string>
#include <vector>

namespace fekete {

struct SelftestCheck {
  std::string name;
  double error = 0.0;
  double tolerance = 0.0;
  bool passed = false;
};

struct SelftestOptions {
  /// Perturbs the Gram matrix of the determinant identity; that check must fail.
  bool inject_fault = false;
};

/// Brute-force identity suite: determinant identity, balanced configurations,
/// trace identity, weight-shift covariance, finite-difference derivatives and
/// recursive-construction invariants.
std::vector<SelftestCheck> run_selftest(SelftestOptions opts = {});

}  // namespace fekete

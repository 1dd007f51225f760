#pragma once

#include <span>
#include <vector>

#include "fekete/core.hpp"
#include "fekete/gram.hpp"
#include "fekete/model_spaces.hpp"

namespace fekete {

/// Distortion (Christoffel-Darboux) function rho(mu, k phi)(x) =
/// sum_i |t_i(x)|^2 e^{-2 k phi(x)} over a (mu, k phi)-orthonormal basis t.
/// x may lie off the support. Throws NumericalError for a singular system.
double rho_at(const GramSystem& gs, const Point& x);
std::vector<double> rho_values(const GramSystem& gs, std::span<const Point> points);

struct BergmanField {
  int k = 0;
  std::vector<Point> grid;
  std::vector<double> rho;
  double sup_rho = 0.0;
};

BergmanField bergman_field(const GramSystem& gs, std::vector<Point> grid);

/// beta(mu, k phi) = N^{-1} rho mu, on the atoms of mu.
DiscreteMeasure bergman_measure(const GramSystem& gs);

/// Least-squares fit of log(value) = c + p log N_k + r k.
struct GrowthFit {
  double poly_exponent = 0.0;
  double exp_rate = 0.0;
};

GrowthFit fit_growth(const ModelSpace& model, std::span<const int> degrees, std::span<const double> values);

struct GrowthDiagnostic {
  std::vector<int> degrees;
  std::vector<double> sup_rho;
  double poly_exponent = 0.0;
  double exp_rate = 0.0;
  bool bm_flag = false;
};

/// Rate threshold for the Bernstein-Markov flag (pragmatic cutoff).
inline constexpr double kBernsteinMarkovRate = 0.01;

/// sup over the candidate grid of rho(mu, k phi) per degree, with the growth
/// fit; flags Bernstein-Markov behaviour when the exponential rate <= 0.01.
/// Needs at least three degrees.
GrowthDiagnostic bm_growth_diagnostic(const WeightedSet& set, const DiscreteMeasure& mu, std::span<const int> degrees);

/// phi(x) + (1/(2k)) log rho(x): envelope-based proxy for the extremal weight.
double extremal_weight_estimate(const GramSystem& gs, const Point& x);

}  // namespace fekete

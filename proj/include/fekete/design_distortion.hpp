#pragma once

#include <memory>

#include <span>
#include <vector>

#include "fekete/core.hpp"
#include "fekete/gram.hpp"
#include "fekete/model_spaces.hpp"

namespace fekete {

struct OptimalMeasureOptions {
  /// Stop once sup_grid rho <= N_k (1 + tol).
  double tol = 1e-3;
  int max_iter = 10000;
};

struct OptimalMeasureResult {
  /// Masses on the candidate grid, in grid order.
  DiscreteMeasure measure;
  double sup_rho = 0.0;
  int iterations = 0;
  bool converged = false;
  /// logdet G(mu_t, k phi) for every iterate, starting with the uniform one.
  std::vector<double> logdet_trace;
};

/// Multiplicative design update m_i <- m_i rho(mu_t, k phi)(x_i) / N_k from
/// uniform grid masses. Throws NumericalError when the grid is degenerate.
OptimalMeasureResult optimal_measure_fixed_point(const WeightedSet& set, int k, OptimalMeasureOptions opts = {});

/// Lagrange sections e_1..e_N of a configuration: e_i(x_j) = delta_ij.
class LagrangeSystem {
 public:
  /// Throws NumericalError for a degenerate configuration.
  LagrangeSystem(const WeightedSet& set, int k, Configuration config);

  const Configuration& config() const { return config_; }
  int degree() const { return k_; }
  /// Rows are canonical-basis coefficients of e_i.
  MatrixXc coefficients() const;
  /// (e_1(x), ..., e_N(x)), unweighted.
  VectorXc values(const Point& x) const;
  /// Entry (r, i) = |e_i(x_r)| e^{-k phi(x_r) + k phi(x_i)}.
  Eigen::MatrixXd weighted_abs_values(std::span<const Point> points) const;

 private:
  Configuration config_;
  SectionBasis basis_;
  Weight weight_;
  int k_;
  /// Working-basis coefficients, one row per e_i.
  MatrixXc working_;
  /// Rows orthonormal on grid and nodes, and their LU at the nodes (transposed).
  std::shared_ptr<const ConditionedRows> conditioned_;
  Eigen::PartialPivLU<MatrixXc> node_lu_;
};

LagrangeSystem lagrange_system(const WeightedSet& set, int k, const Configuration& p);

/// max over the candidate grid and the nodes of sum_i |e_i(x)| e^{-k phi(x) + k phi(x_i)}.
double lebesgue_constant(const WeightedSet& set, int k, const Configuration& p);

enum class DistortionPair { InfInf, Inf2, TwoTwo, Inf1Bound };

std::string to_string(DistortionPair pair);
/// Parses "inf-inf", "inf-2", "2-2" or "inf-1"; throws DomainError otherwise.
DistortionPair parse_distortion_pair(const std::string& text);

/// sup_s ||s||_{L^p(mu, k phi)} / ||s||_{L^q(delta_P, k phi)} with delta_P
/// carrying masses 1/N. L^infinity numerators are taken over the candidate
/// grid. InfInf is the Lebesgue constant, Inf2 is sqrt(sup rho(delta_P)),
/// TwoTwo the square root of the top generalized eigenvalue of Gram(mu)
/// against Gram(delta_P), and Inf1Bound = N sup_x max_i |e_i(x)|_w, which is at
/// most N for Fekete configurations. mu is only used by TwoTwo.
double distortion(const WeightedSet& set, int k, const DiscreteMeasure& mu, const Configuration& p, DistortionPair pair);

struct DistortionReport {
  DistortionPair pair = DistortionPair::InfInf;
  std::vector<int> degrees;
  std::vector<double> values;
  double poly_exponent = 0.0;
  double exp_rate = 0.0;
  /// exp_rate <= kBernsteinMarkovRate.
  bool subexponential = false;
};

/// One configuration per degree; needs at least three degrees.
DistortionReport distortion_growth_report(const WeightedSet& set, std::span<const int> degrees, const DiscreteMeasure& mu,
                                          std::span<const Configuration> configs, DistortionPair pair);

}  // namespace fekete

#include "fekete/bergman.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace fekete {

double rho_at(const GramSystem& gs, const Point& x) {
  const VectorXc t = gs.orthonormal_values(x);
  return t.squaredNorm() * std::exp(-2.0 * gs.degree() * gs.weight()(x));
}

std::vector<double> rho_values(const GramSystem& gs, std::span<const Point> points) {
  const MatrixXc cols = gs.weighted_orthonormal_columns(points);
  std::vector<double> out(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) out[i] = cols.col(static_cast<Index>(i)).squaredNorm();
  return out;
}

BergmanField bergman_field(const GramSystem& gs, std::vector<Point> grid) {
  BergmanField field;
  field.k = gs.degree();
  field.rho = rho_values(gs, grid);
  field.grid = std::move(grid);
  field.sup_rho = field.rho.empty() ? 0.0 : *std::max_element(field.rho.begin(), field.rho.end());
  return field;
}

DiscreteMeasure bergman_measure(const GramSystem& gs) {
  const auto& mu = gs.measure();
  const auto rho = rho_values(gs, mu.atoms());
  const double n = static_cast<double>(gs.dimension());
  std::vector<double> masses(mu.size());
  for (std::size_t i = 0; i < mu.size(); ++i) masses[i] = mu.masses()[i] * rho[i] / n;
  const double total = std::accumulate(masses.begin(), masses.end(), 0.0);
  if (std::abs(total - 1.0) > 1e-8) throw NumericalError("Bergman measure lost normalization", total - 1.0);
  for (double& m : masses) m /= total;
  return {mu.atoms(), std::move(masses)};
}

GrowthFit fit_growth(const ModelSpace& model, std::span<const int> degrees, std::span<const double> values) {
  if (degrees.size() < 3) throw DomainError("growth fit needs at least three degrees");
  if (degrees.size() != values.size()) throw DomainError("degrees and values differ in length");
  const Index n = static_cast<Index>(degrees.size());
  Eigen::MatrixXd design(n, 3);
  Eigen::VectorXd rhs(n);
  for (Index i = 0; i < n; ++i) {
    if (!(values[i] > 0.0)) throw DomainError("growth fit needs positive values");
    design(i, 0) = 1.0;
    design(i, 1) = std::log(static_cast<double>(model.dimension(degrees[i])));
    design(i, 2) = degrees[i];
    rhs[i] = std::log(values[i]);
  }
  const Eigen::VectorXd coef = design.colPivHouseholderQr().solve(rhs);
  return {coef[1], coef[2]};
}

GrowthDiagnostic bm_growth_diagnostic(const WeightedSet& set, const DiscreteMeasure& mu, std::span<const int> degrees) {
  if (degrees.size() < 3) throw DomainError("growth diagnostic needs at least three degrees");
  GrowthDiagnostic diag;
  for (int k : degrees) {
    const GramSystem gs(set, mu, k);
    const auto rho = rho_values(gs, set.grid());
    diag.degrees.push_back(k);
    diag.sup_rho.push_back(*std::max_element(rho.begin(), rho.end()));
  }
  const auto fit = fit_growth(set.model(), diag.degrees, diag.sup_rho);
  diag.poly_exponent = fit.poly_exponent;
  diag.exp_rate = fit.exp_rate;
  diag.bm_flag = fit.exp_rate <= kBernsteinMarkovRate;
  return diag;
}

double extremal_weight_estimate(const GramSystem& gs, const Point& x) {
  if (gs.degree() < 1) throw DomainError("extremal weight estimate needs k >= 1");
  return gs.weight()(x) + std::log(rho_at(gs, x)) / (2.0 * gs.degree());
}

}  // namespace fekete

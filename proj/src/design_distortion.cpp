#include "fekete/design_distortion.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <Eigen/Eigenvalues>

#include "fekete/bergman.hpp"

namespace fekete {

OptimalMeasureResult optimal_measure_fixed_point(const WeightedSet& set, int k, OptimalMeasureOptions opts) {
  const auto& grid = set.grid();
  const Index n = set.model().dimension(k);
  if (static_cast<Index>(grid.size()) < n) throw DomainError("candidate grid smaller than N_k");
  const double nd = static_cast<double>(n);

  OptimalMeasureResult out;
  DiscreteMeasure mu = DiscreteMeasure::uniform(grid);
  std::vector<double> masses = mu.masses();
  for (;;) {
    const GramSystem gs(set, mu, k);
    if (gs.singular()) throw NumericalError("candidate grid is degenerate for this degree");
    out.logdet_trace.push_back(gs.logdet());
    const auto rho = rho_values(gs, grid);
    out.sup_rho = *std::max_element(rho.begin(), rho.end());
    if (out.sup_rho <= nd * (1.0 + opts.tol)) {
      out.converged = true;
      break;
    }
    if (out.iterations >= opts.max_iter) break;
    for (std::size_t i = 0; i < masses.size(); ++i) masses[i] *= rho[i] / nd;
    const double total = std::accumulate(masses.begin(), masses.end(), 0.0);
    for (double& m : masses) m /= total;
    mu = DiscreteMeasure(grid, masses);
    ++out.iterations;
  }
  out.measure = std::move(mu);
  return out;
}

LagrangeSystem::LagrangeSystem(const WeightedSet& set, int k, Configuration config)
    : config_(std::move(config)), basis_(set.support(), k), weight_(set.weight()), k_(k) {
  if (static_cast<Index>(config_.size()) != basis_.size()) throw DomainError("configuration size differs from N_k");
  const MatrixXc v = basis_.eval_rows(config_.points);
  const Eigen::FullPivLU<MatrixXc> lu(v.transpose());
  if (lu.rank() < basis_.size()) throw NumericalError("degenerate configuration has no Lagrange sections");
  // C V^T = I
  working_ = lu.solve(MatrixXc::Identity(basis_.size(), basis_.size()));
  if (!working_.allFinite()) throw NumericalError("Lagrange solve produced non-finite coefficients");
  std::vector<Point> reference = set.grid();
  reference.insert(reference.end(), config_.points.begin(), config_.points.end());
  conditioned_ = std::make_shared<const ConditionedRows>(basis_, weight_, k_, reference);
  node_lu_.compute(conditioned_->rows(config_.points).transpose());
}

MatrixXc LagrangeSystem::coefficients() const { return working_ * basis_.change_matrix(); }

VectorXc LagrangeSystem::values(const Point& x) const { return working_ * basis_.eval(x); }

Eigen::MatrixXd LagrangeSystem::weighted_abs_values(std::span<const Point> points) const {
  // (e_i(x) e^{-k phi(x) + k phi(x_i)}) = T(x) T(nodes)^{-1} for any basis T
  const MatrixXc e = node_lu_.solve(conditioned_->rows(points).transpose()).transpose();
  return e.cwiseAbs();
}

LagrangeSystem lagrange_system(const WeightedSet& set, int k, const Configuration& p) { return {set, k, p}; }

namespace {

std::vector<Point> grid_and_nodes(const WeightedSet& set, const Configuration& p) {
  std::vector<Point> pts = set.grid();
  pts.insert(pts.end(), p.points.begin(), p.points.end());
  return pts;
}

}  // namespace

double lebesgue_constant(const WeightedSet& set, int k, const Configuration& p) {
  const LagrangeSystem ls(set, k, p);
  const auto pts = grid_and_nodes(set, p);
  return ls.weighted_abs_values(pts).rowwise().sum().maxCoeff();
}

std::string to_string(DistortionPair pair) {
  switch (pair) {
    case DistortionPair::InfInf:
      return "inf-inf";
    case DistortionPair::Inf2:
      return "inf-2";
    case DistortionPair::TwoTwo:
      return "2-2";
    case DistortionPair::Inf1Bound:
      return "inf-1";
  }
  return {};
}

DistortionPair parse_distortion_pair(const std::string& text) {
  for (auto p : {DistortionPair::InfInf, DistortionPair::Inf2, DistortionPair::TwoTwo, DistortionPair::Inf1Bound})
    if (text == to_string(p)) return p;
  throw DomainError("unknown distortion pair: " + text);
}

double distortion(const WeightedSet& set, int k, const DiscreteMeasure& mu, const Configuration& p, DistortionPair pair) {
  switch (pair) {
    case DistortionPair::InfInf:
      return lebesgue_constant(set, k, p);
    case DistortionPair::Inf2: {
      const GramSystem gs(set, p.as_measure(), k);
      if (gs.singular()) throw NumericalError("degenerate configuration");
      const auto rho = rho_values(gs, grid_and_nodes(set, p));
      return std::sqrt(*std::max_element(rho.begin(), rho.end()));
    }
    case DistortionPair::TwoTwo: {
      const GramSystem gp(set, p.as_measure(), k);
      if (gp.singular()) throw NumericalError("degenerate configuration");
      const GramSystem gm(set, mu, k);
      MatrixXc m = gm.gram();
      const auto l = gp.cholesky_factor().triangularView<Eigen::Lower>();
      l.solveInPlace(m);
      MatrixXc sym = l.solve(m.adjoint());
      sym = (0.5 * (sym + sym.adjoint())).eval();
      const Eigen::SelfAdjointEigenSolver<MatrixXc> eig(sym, Eigen::EigenvaluesOnly);
      return std::sqrt(std::max(0.0, eig.eigenvalues().maxCoeff()));
    }
    case DistortionPair::Inf1Bound: {
      const LagrangeSystem ls(set, k, p);
      const double sup = ls.weighted_abs_values(grid_and_nodes(set, p)).maxCoeff();
      return static_cast<double>(p.size()) * sup;
    }
  }
  throw DomainError("unsupported distortion pair");
}

DistortionReport distortion_growth_report(const WeightedSet& set, std::span<const int> degrees, const DiscreteMeasure& mu,
                                          std::span<const Configuration> configs, DistortionPair pair) {
  if (degrees.size() < 3) throw DomainError("distortion growth report needs at least three degrees");
  if (configs.size() != degrees.size()) throw DomainError("one configuration per degree is required");
  DistortionReport rep;
  rep.pair = pair;
  for (std::size_t i = 0; i < degrees.size(); ++i) {
    rep.degrees.push_back(degrees[i]);
    rep.values.push_back(distortion(set, degrees[i], mu, configs[i], pair));
  }
  const auto fit = fit_growth(set.model(), rep.degrees, rep.values);
  rep.poly_exponent = fit.poly_exponent;
  rep.exp_rate = fit.exp_rate;
  rep.subexponential = fit.exp_rate <= kBernsteinMarkovRate;
  return rep;
}

}  // namespace fekete

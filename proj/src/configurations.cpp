#include "fekete/configurations.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace fekete {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

/// Lowest index whose value is within a relative 1e-12 of the maximum.
Index argmax_lowest(const Eigen::VectorXd& v) {
  const double best = v.maxCoeff();
  const double floor = best - 1e-12 * std::abs(best);
  for (Index i = 0; i < v.size(); ++i)
    if (v[i] >= floor) return i;
  return 0;
}

double log_abs_det(const MatrixXc& m) {
  const Eigen::PartialPivLU<MatrixXc> lu(m);
  double acc = 0.0;
  const MatrixXc& packed = lu.matrixLU();
  for (Index i = 0; i < m.rows(); ++i) {
    const double d = std::abs(packed(i, i));
    if (!(d > 0.0)) return kNegInf;
    acc += std::log(d);
  }
  return acc;
}

struct GreedyPivots {
  std::vector<Index> rows;
  std::vector<double> pivots_sq;
  /// Column r is the unit vector q_r selected at step r.
  MatrixXc directions;
};

/// Greedy maximal-residual row selection with Gram-Schmidt deflation: at each
/// step the row of largest residual norm is chosen and every residual is
/// projected off its direction. Equivalent to column-pivoted QR of rows^T and
/// to pivoted Cholesky of rows * rows^H.
GreedyPivots greedy_rows(MatrixXc rows, Index steps) {
  GreedyPivots out;
  out.directions.resize(rows.cols(), steps);
  Eigen::VectorXd norms = rows.rowwise().squaredNorm();
  for (Index s = 0; s < steps; ++s) {
    const Index y = argmax_lowest(norms);
    const double piv = norms[y];
    if (!(piv > 0.0)) throw NumericalError("candidate grid is degenerate for this degree");
    const VectorXc q = rows.row(y).transpose() / std::sqrt(piv);
    const VectorXc coef = rows * q.conjugate();
    rows.noalias() -= coef * q.transpose();
    norms = rows.rowwise().squaredNorm();
    norms[y] = 0.0;
    out.rows.push_back(y);
    out.pivots_sq.push_back(piv);
    out.directions.col(s) = q;
  }
  return out;
}

void check_size(const ModelSpace& model, int k, const Configuration& p) {
  if (static_cast<Index>(p.size()) != model.dimension(k)) throw DomainError("configuration size differs from N_k");
}

std::vector<Point> pick(const std::vector<Point>& grid, const std::vector<Index>& idx) {
  std::vector<Point> out;
  out.reserve(idx.size());
  for (Index i : idx) out.push_back(grid[static_cast<std::size_t>(i)]);
  return out;
}

}  // namespace

std::string to_string(ConfigMethod m) {
  switch (m) {
    case ConfigMethod::GreedyOnly:
      return "GreedyOnly";
    case ConfigMethod::GreedyPlusExchange:
      return "GreedyPlusExchange";
    case ConfigMethod::Leja:
      return "Leja";
    case ConfigMethod::RecursiveExtremal:
      return "RecursiveExtremal";
  }
  return {};
}

double weighted_vandermonde(const WeightedSet& set, int k, const Configuration& p) {
  check_size(set.model(), k, p);
  const SectionBasis basis(set.support(), k);
  const double v = log_abs_det(weighted_rows(basis, set.weight(), k, p.points));
  return v == kNegInf ? v : v - basis.log_abs_det_change();
}

double weighted_vandermonde(const WeightedSet& set, int k, const Configuration& p, const MatrixXc& coefficients) {
  const double base = weighted_vandermonde(set, k, p);
  if (coefficients.rows() != coefficients.cols() || coefficients.rows() != set.model().dimension(k))
    throw DomainError("coefficient matrix has the wrong shape");
  return base == kNegInf ? base : base + log_abs_det(coefficients);
}

FeketeResult evaluate_configuration(const WeightedSet& set, int k, Configuration p, ConfigMethod method) {
  FeketeResult r;
  r.k = k;
  r.method = method;
  r.log_abs_det_weighted = weighted_vandermonde(set, k, p);
  r.config = std::move(p);
  r.converged = true;
  return r;
}

FeketeResult fekete_search(const WeightedSet& set, int k, FeketeOptions opts) {
  const SectionBasis basis(set.support(), k);
  const Index n = basis.size();
  const auto& grid = set.grid();
  if (static_cast<Index>(grid.size()) < n) throw DomainError("candidate grid smaller than N_k");

  const ConditionedRows conditioned(basis, set.weight(), k, grid);
  const MatrixXc& v = conditioned.reference_rows();
  std::vector<Index> idx = greedy_rows(v, n).rows;
  auto log_det = [&](const MatrixXc& a) {
    const double d = log_abs_det(a);
    return d == kNegInf ? d : d + conditioned.log_abs_det_factor();
  };

  auto current_matrix = [&] {
    MatrixXc a(n, n);
    for (Index j = 0; j < n; ++j) a.row(j) = v.row(idx[static_cast<std::size_t>(j)]);
    return a;
  };

  FeketeResult r;
  r.k = k;
  r.method = opts.exchange ? ConfigMethod::GreedyPlusExchange : ConfigMethod::GreedyOnly;
  r.sweep_trace.push_back(log_det(current_matrix()));

  if (opts.exchange) {
    for (int sweep = 0; sweep < opts.max_sweeps; ++sweep) {
      // b(y, j) = det ratio when x_j is replaced by grid point y
      const Eigen::PartialPivLU<MatrixXc> lu(current_matrix().transpose());
      MatrixXc b = lu.solve(v.transpose()).transpose();
      bool swapped = false;
      for (Index j = 0; j < n; ++j) {
        const Eigen::VectorXd col = b.col(j).cwiseAbs();
        const Index y = argmax_lowest(col);
        if (y == idx[static_cast<std::size_t>(j)] || !(std::log(col[y]) > opts.exchange_tol)) continue;
        const Complex factor = b(y, j);
        Eigen::RowVectorXcd u = b.row(y);
        u[j] -= 1.0;
        const VectorXc bj = b.col(j);
        b.noalias() -= (bj / factor) * u;
        idx[static_cast<std::size_t>(j)] = y;
        swapped = true;
      }
      ++r.iterations;
      r.sweep_trace.push_back(log_det(current_matrix()));
      if (!swapped) {
        r.converged = true;
        break;
      }
    }
  } else {
    r.converged = true;
  }

  r.grid_indices = idx;
  r.config = Configuration{pick(grid, idx)};
  const double raw = r.sweep_trace.back();
  r.log_abs_det_weighted = raw == kNegInf ? raw : raw - basis.log_abs_det_change();
  return r;
}

double exchange_certificate(const WeightedSet& set, int k, const Configuration& p) {
  check_size(set.model(), k, p);
  const SectionBasis basis(set.support(), k);
  const ConditionedRows conditioned(basis, set.weight(), k, set.grid());
  const MatrixXc& v = conditioned.reference_rows();
  const MatrixXc a = conditioned.rows(p.points);
  const Eigen::PartialPivLU<MatrixXc> lu(a.transpose());
  const MatrixXc b = lu.solve(v.transpose()).transpose();
  return std::log(b.cwiseAbs().maxCoeff());
}

Configuration leja_sequence(const WeightedSet& set, int k) {
  const SectionBasis basis(set.support(), k);
  const Index n = basis.size();
  const auto& grid = set.grid();
  if (static_cast<Index>(grid.size()) < n) throw DomainError("candidate grid smaller than N_k");
  MatrixXc r = basis.eval_rows(grid);
  Eigen::VectorXd phi(static_cast<Index>(grid.size()));
  for (std::size_t g = 0; g < grid.size(); ++g) phi[static_cast<Index>(g)] = set.weight()(grid[g]);
  std::vector<Index> idx;
  // Step c uses the weight e^{-c phi} matching the degree of the residual, so
  // the sequence does not depend on k.
  for (Index c = 0; c < n; ++c) {
    const Eigen::VectorXd col = r.col(c).cwiseAbs().cwiseProduct((-static_cast<double>(c) * phi).array().exp().matrix());
    const Index y = argmax_lowest(col);
    if (!(col[y] > 0.0)) throw NumericalError("candidate grid is degenerate for this degree");
    const Eigen::RowVectorXcd pivot = r.row(y) / r(y, c);
    const VectorXc factors = r.col(c);
    r.noalias() -= factors * pivot;
    r.row(y).setZero();
    idx.push_back(y);
  }
  return {pick(grid, idx)};
}

double RecursiveTrace::log_abs_det_sq() const {
  double acc = 0.0;
  for (double v : rho_values) acc += std::log(v);
  return acc;
}

MatrixXc RecursiveTrace::evaluation_matrix() const {
  const MatrixXc cols = weighted_rows(basis, weight, k, points).transpose();
  return sections * cols;
}

MatrixXc RecursiveTrace::canonical_sections() const { return sections * basis.change_matrix(); }

RecursiveTrace recursively_extremal(const WeightedSet& set, const DiscreteMeasure& mu, int k) {
  const GramSystem gs(set, mu, k);
  if (gs.singular()) throw NumericalError("recursively extremal construction needs a nonsingular Gram system");
  std::vector<Point> candidates = set.grid();
  candidates.insert(candidates.end(), mu.atoms().begin(), mu.atoms().end());

  const Index n = gs.dimension();
  const MatrixXc rows = gs.weighted_orthonormal_columns(candidates).transpose();
  const auto piv = greedy_rows(rows, n);

  RecursiveTrace trace;
  trace.k = k;
  trace.basis = gs.basis();
  trace.weight = gs.weight();
  trace.points = pick(candidates, piv.rows);
  trace.rho_values = piv.pivots_sq;
  // s_r = q_r^H t, and t = C w with C = L^{-1}
  const MatrixXc c = gs.orthonormal_coefficients();
  trace.sections = piv.directions.adjoint() * c;
  return trace;
}

double k_diameter(const WeightedSet& set, int k, const FeketeResult& result) {
  if (k < 1) throw DomainError("k-diameter needs k >= 1");
  if (result.k != k) throw DomainError("result degree differs from k");
  if (result.log_abs_det_weighted == kNegInf) throw NumericalError("k-diameter of a degenerate configuration");
  const double kn = static_cast<double>(k) * static_cast<double>(set.model().dimension(k));
  return -result.log_abs_det_weighted / kn;
}

AsymptoticFeketeReport asymptotic_fekete_check(std::span<const FeketeResult> results,
                                               std::span<const GramSystem> normalizers) {
  if (results.size() < 3) throw DomainError("asymptotic Fekete check needs at least three degrees");
  if (!normalizers.empty() && normalizers.size() != results.size())
    throw DomainError("one normalizing Gram system per result is required");
  AsymptoticFeketeReport rep;
  for (std::size_t i = 0; i < results.size(); ++i) {
    const auto& r = results[i];
    if (r.k < 1) throw DomainError("asymptotic Fekete check needs k >= 1");
    double v = r.log_abs_det_weighted;
    Index n = static_cast<Index>(r.config.size());
    if (!normalizers.empty()) {
      const auto& g = normalizers[i];
      if (g.degree() != r.k) throw DomainError("normalizer degree differs from result");
      if (g.singular()) throw NumericalError("singular normalizing Gram system");
      v -= 0.5 * g.logdet();
    }
    rep.degrees.push_back(r.k);
    rep.values.push_back(v / (static_cast<double>(r.k) * static_cast<double>(n)));
  }
  std::vector<std::size_t> order(results.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](auto a, auto b) { return rep.degrees[a] < rep.degrees[b]; });
  rep.liminf_estimate = std::numeric_limits<double>::infinity();
  for (std::size_t i = order.size() / 2; i < order.size(); ++i)
    rep.liminf_estimate = std::min(rep.liminf_estimate, rep.values[order[i]]);
  return rep;
}

}  // namespace fekete

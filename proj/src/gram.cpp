#include "fekete/gram.hpp"

#include <cmath>

namespace fekete {

namespace {

/// Relative pivot floor below which a Gram matrix is treated as singular.
constexpr double kPivotFloor = 1e-13;

}  // namespace

MatrixXc assemble_gram(const SectionBasis& basis, const Weight& weight, int k, std::span<const Point> atoms,
                       std::span<const double> masses) {
  if (atoms.size() != masses.size()) throw DomainError("atoms and masses differ in length");
  const MatrixXc rows = basis.eval_rows(atoms);
  Eigen::VectorXd c(static_cast<Index>(atoms.size()));
  for (std::size_t a = 0; a < atoms.size(); ++a)
    c[static_cast<Index>(a)] = masses[a] * std::exp(-2.0 * k * weight(atoms[a]));
  return rows.transpose() * (c.cast<Complex>().asDiagonal() * rows.conjugate());
}

GramSystem::GramSystem(const WeightedSet& set, const DiscreteMeasure& mu, int k)
    : k_(k), basis_(set.support(), k), weight_(set.weight()), measure_(mu) {
  for (const Point& p : mu.atoms())
    if (!set.support().contains(p)) throw DomainError("measure atom outside the support");

  gram_ = assemble_gram(basis_, weight_, k, mu.atoms(), mu.masses());
  gram_ = 0.5 * (gram_ + gram_.adjoint()).eval();

  const Index n = gram_.rows();
  const double scale = gram_.diagonal().real().maxCoeff();
  chol_ = MatrixXc::Zero(n, n);
  const auto atoms = static_cast<Index>(mu.atoms().size());
  singular_ = !(scale > 0.0) || atoms < n;
  if (!singular_) {
    // Householder QR of the square-root-weighted sample rows gives G = R^H R
    // without squaring the condition number.
    MatrixXc sample = basis_.eval_rows(mu.atoms()).conjugate();
    for (Index a = 0; a < atoms; ++a)
      sample.row(a) *= std::sqrt(mu.masses()[static_cast<std::size_t>(a)]) * std::exp(-k * weight_(mu.atoms()[static_cast<std::size_t>(a)]));
    const Eigen::HouseholderQR<MatrixXc> qr(sample);
    const MatrixXc r = qr.matrixQR().topRows(n).triangularView<Eigen::Upper>();
    for (Index j = 0; j < n; ++j) {
      const double d = std::abs(r(j, j));
      if (!(d * d > kPivotFloor * scale)) {
        singular_ = true;
        break;
      }
      const Complex phase = std::conj(r(j, j)) / d;
      chol_.col(j) = (phase * r.row(j)).adjoint();
    }
  }
  if (!singular_) {
    double ld = 0.0;
    for (Index j = 0; j < n; ++j) ld += 2.0 * std::log(chol_(j, j).real());
    logdet_ = ld - 2.0 * basis_.log_abs_det_change();
  }
}

MatrixXc GramSystem::canonical_gram() const {
  const MatrixXc a = basis_.change_matrix();
  const MatrixXc ainv = a.triangularView<Eigen::Lower>().solve(MatrixXc::Identity(a.rows(), a.cols()));
  return ainv * gram_ * ainv.adjoint();
}

void GramSystem::require_nonsingular() const {
  if (singular_) throw NumericalError("Gram system is singular");
}

MatrixXc GramSystem::orthonormal_coefficients() const {
  require_nonsingular();
  const Index n = dimension();
  return chol_.triangularView<Eigen::Lower>().solve(MatrixXc::Identity(n, n));
}

VectorXc GramSystem::orthonormal_values(const Point& x) const {
  require_nonsingular();
  return chol_.triangularView<Eigen::Lower>().solve(basis_.eval(x));
}

MatrixXc GramSystem::weighted_orthonormal_columns(std::span<const Point> points) const {
  require_nonsingular();
  MatrixXc cols = weighted_rows(basis_, weight_, k_, points).transpose();
  chol_.triangularView<Eigen::Lower>().solveInPlace(cols);
  return cols;
}

GramSystem gram_system(const WeightedSet& set, const DiscreteMeasure& mu, int k) { return {set, mu, k}; }

MatrixXc orthonormal_sections(const GramSystem& gs) { return gs.orthonormal_coefficients() * gs.basis().change_matrix(); }

double l_functional(const GramSystem& gs, const GramSystem& reference) {
  if (gs.degree() != reference.degree() || !(gs.model() == reference.model()))
    throw DomainError("L-functional needs matching degree and model");
  if (gs.degree() < 1) throw DomainError("L-functional needs k >= 1");
  if (gs.singular() || reference.singular()) throw NumericalError("L-functional of a singular Gram system");
  const double kn = static_cast<double>(gs.degree()) * static_cast<double>(gs.dimension());
  return -(gs.logdet() - reference.logdet()) / (2.0 * kn);
}

double l_functional(const WeightedSet& set, const DiscreteMeasure& mu, int k, const ReferencePair& ref) {
  return l_functional(GramSystem(set, mu, k), GramSystem(ref.set, ref.measure, k));
}

double volume_ratio_log(const GramSystem& a, const GramSystem& b) {
  if (a.degree() != b.degree() || !(a.model() == b.model()))
    throw DomainError("volume ratio needs matching degree and model");
  if (a.singular() || b.singular()) throw NumericalError("volume ratio of a singular Gram system");
  return b.logdet() - a.logdet();
}

IdentityCheck det_section_l2_identity_check(const WeightedSet& set, const DiscreteMeasure& mu, int k,
                                            double gram_perturbation) {
  const ModelSpace& model = set.model();
  const Index n = model.dimension(k);
  const std::size_t atoms = mu.size();
  if (atoms > 8 || n > 4) throw DomainError("enumeration too large for the determinant identity check");

  std::vector<VectorXc> values;
  std::vector<double> factors;
  for (std::size_t a = 0; a < atoms; ++a) {
    values.push_back(basis_eval(model, k, mu.atoms()[a]));
    factors.push_back(mu.masses()[a] * std::exp(-2.0 * k * set.weight()(mu.atoms()[a])));
  }

  IdentityCheck out;
  std::vector<std::size_t> tuple(static_cast<std::size_t>(n), 0);
  MatrixXc m(n, n);
  for (;;) {
    double factor = 1.0;
    for (Index j = 0; j < n; ++j) {
      m.col(j) = values[tuple[j]];
      factor *= factors[tuple[j]];
    }
    out.lhs += std::norm(m.determinant()) * factor;
    Index pos = 0;
    while (pos < n && ++tuple[pos] == atoms) tuple[pos++] = 0;
    if (pos == n) break;
  }

  MatrixXc gram = MatrixXc::Zero(n, n);
  for (std::size_t a = 0; a < atoms; ++a) gram.noalias() += factors[a] * (values[a] * values[a].adjoint());
  gram.diagonal().array() += gram_perturbation;
  double fact = 1.0;
  for (Index j = 2; j <= n; ++j) fact *= static_cast<double>(j);
  out.rhs = fact * gram.determinant().real();
  return out;
}

}  // namespace fekete

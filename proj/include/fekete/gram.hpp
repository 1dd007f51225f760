#pragma once

#include <limits>
#include <span>

#include "fekete/core.hpp"
#include "fekete/model_spaces.hpp"

namespace fekete {

/// Gram matrix G_ij = int w_i conj(w_j) e^{-2k phi} dmu of the working basis,
/// with its Cholesky factor. Degenerate measures (e.g. configurations with
/// repeated points) give a singular system with logdet = -inf instead of an
/// error.
class GramSystem {
 public:
  GramSystem(const WeightedSet& set, const DiscreteMeasure& mu, int k);

  int degree() const { return k_; }
  Index dimension() const { return basis_.size(); }
  const ModelSpace& model() const { return basis_.model(); }
  const SectionBasis& basis() const { return basis_; }
  const Weight& weight() const { return weight_; }
  const DiscreteMeasure& measure() const { return measure_; }

  /// Gram matrix in the working basis.
  const MatrixXc& gram() const { return gram_; }
  /// Gram matrix in the canonical basis, A^{-1} G A^{-H}.
  MatrixXc canonical_gram() const;
  /// Lower-triangular L with G = L L^H (working basis).
  const MatrixXc& cholesky_factor() const { return chol_; }

  bool singular() const { return singular_; }
  /// log det of the canonical Gram matrix; -inf when singular.
  double logdet() const { return logdet_; }

  /// Rows are coefficients (working basis) of a (mu, k phi)-orthonormal basis.
  MatrixXc orthonormal_coefficients() const;
  /// (t_1(x), ..., t_N(x)) for the orthonormal sections t = L^{-1} w, without weight.
  VectorXc orthonormal_values(const Point& x) const;
  /// Columns are orthonormal_values at each point, times e^{-k phi}.
  MatrixXc weighted_orthonormal_columns(std::span<const Point> points) const;

 private:
  void require_nonsingular() const;

  int k_;
  SectionBasis basis_;
  Weight weight_;
  DiscreteMeasure measure_;
  MatrixXc gram_;
  MatrixXc chol_;
  bool singular_ = false;
  double logdet_ = -std::numeric_limits<double>::infinity();
};

GramSystem gram_system(const WeightedSet& set, const DiscreteMeasure& mu, int k);

/// Affine map (atoms, masses) -> Gram matrix in the given basis. Masses may be
/// signed; used for directional derivatives along mu + t(nu - mu).
MatrixXc assemble_gram(const SectionBasis& basis, const Weight& weight, int k, std::span<const Point> atoms,
                       std::span<const double> masses);

/// Canonical-basis coefficients of a (mu, k phi)-orthonormal basis (rows).
/// Throws NumericalError for a singular system.
MatrixXc orthonormal_sections(const GramSystem& gs);

/// -(1/(2 k N_k)) [logdet G(mu, k phi) - logdet G(mu0, k phi0)]: the
/// L-functional normalized against the reference L^2 ball.
double l_functional(const GramSystem& gs, const GramSystem& reference);
double l_functional(const WeightedSet& set, const DiscreteMeasure& mu, int k, const ReferencePair& ref);

/// log(vol B2(A) / vol B2(B)) = logdet G_B - logdet G_A.
double volume_ratio_log(const GramSystem& a, const GramSystem& b);

struct IdentityCheck {
  double lhs = 0.0;
  double rhs = 0.0;
};

/// Brute-force squared L^2 norm of the determinant section over all
/// N_k-tuples of atoms (lhs) against N_k! det G (rhs), canonical basis.
/// Limited to at most 8 atoms and N_k <= 4. A nonzero gram_perturbation is
/// added to the diagonal of G before the determinant (negative control).
IdentityCheck det_section_l2_identity_check(const WeightedSet& set, const DiscreteMeasure& mu, int k,
                                            double gram_perturbation = 0.0);

}  // namespace fekete

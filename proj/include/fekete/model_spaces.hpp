#pragma once

#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "fekete/core.hpp"

namespace fekete {

/// Continuous weight phi of a Hermitian metric e^{-phi}, evaluable at any
/// point of the model. A constant offset can be added to any kind.
class Weight {
 public:
  enum class Kind { Zero, Quadratic, LogAbsShift, Tabulated, Custom };
  enum class Axis { RealPart, Angle };

  Weight() = default;

  static Weight zero();
  /// phi(z) = c |z|^2.
  static Weight quadratic(double c);
  /// phi(z) = log|z - a|; only admissible on sets that stay away from a.
  static Weight log_abs_shift(Complex a);
  /// Piecewise-linear table over Re(z) or arg(z), clamped at the ends.
  static Weight tabulated(std::vector<double> nodes, std::vector<double> values, Axis axis);
  static Weight custom(std::function<double(const Point&)> fn, std::string label);

  double operator()(const Point& p) const;

  /// phi + c.
  Weight shifted(double c) const;

  Kind kind() const { return kind_; }
  double offset() const { return offset_; }
  /// True for Zero (with any offset): the unweighted case up to a constant.
  bool is_constant() const { return kind_ == Kind::Zero; }
  /// Short textual form, e.g. "zero", "quad:0.25", "logshift:2,0".
  std::string label() const;

 private:
  Kind kind_ = Kind::Zero;
  double offset_ = 0.0;
  double c_ = 0.0;
  Complex a_{};
  std::vector<double> nodes_;
  std::vector<double> values_;
  Axis axis_ = Axis::RealPart;
  std::function<double(const Point&)> fn_;
  std::string custom_label_;
};

struct Support {
  enum class Kind { Interval, Circle, Disk, Sphere, PointCloud };

  Kind kind = Kind::Interval;
  double radius = 1.0;
  std::vector<Point> cloud;

  static Support interval();
  static Support circle(double r = 1.0);
  static Support disk(double r = 1.0);
  static Support sphere();
  static Support point_cloud(std::vector<Point> points);

  ModelSpace model() const;
  bool contains(const Point& p, double tol = 1e-12) const;
  std::string label() const;
};

/// Weighted compact set (K, phi) together with the finite candidate grid used
/// wherever a supremum over K is needed.
class WeightedSet {
 public:
  /// Throws DomainError if the grid is empty, leaves the support, or the
  /// weight is non-finite on it, or if a nonzero weight is put on the sphere.
  WeightedSet(Support support, Weight weight, std::vector<Point> grid);

  const ModelSpace& model() const { return model_; }
  const Support& support() const { return support_; }
  const Weight& weight() const { return weight_; }
  const std::vector<Point>& grid() const { return grid_; }

  /// Same support and grid, different weight.
  WeightedSet with_weight(Weight w) const;

 private:
  ModelSpace model_;
  Support support_;
  Weight weight_;
  std::vector<Point> grid_;
};

// Grids and quadrature --------------------------------------------------------

struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// Gauss-Legendre rule on [-1, 1], nodes ascending, weights summing to 2.
QuadratureRule gauss_legendre(int n);

/// First-kind Chebyshev points cos((2j+1)pi/(2m)), ascending.
std::vector<Point> chebyshev_grid(int m);
/// Chebyshev extrema cos(j pi/(m-1)), ascending; contains +-1 (and 0 for odd m).
std::vector<Point> chebyshev_lobatto_grid(int m);
/// m equispaced points on the circle of radius r, starting at angle 0.
std::vector<Point> circle_grid(double r, int m);
/// Concentric rings inside the closed disk; outermost ring on |z| = r.
std::vector<Point> disk_grid(double r, int rings, int per_ring);

struct SphereGrid {
  std::vector<Point> points;
  std::vector<double> weights;  // sums to 1
  int n_theta = 0;
  int n_phi = 0;
};
/// Gauss-Legendre in cos(theta) times uniform azimuth; weights normalized to
/// total mass 1. Exact for spherical polynomials of degree <= min(2 n_theta - 1, n_phi - 1).
SphereGrid sphere_product_grid(int n_theta, int n_phi);

/// Deterministic degree-adapted candidate grid: interval -> oversample*(k+1)
/// Chebyshev points; circle -> oversample*(2k+1) equispaced points;
/// sphere -> product grid with at least oversample*(k+1)^2 nodes.
std::vector<Point> default_grid(const Support& support, int k, int oversample);
std::vector<Point> default_grid(const WeightedSet& set, int k, int oversample);

// Bases -----------------------------------------------------------------------

/// Canonical basis values (s_1(x), ..., s_{N_k}(x)): monomials z^j on the
/// complex line, sqrt(4 pi) Y_{l,m} (l <= k) on the sphere.
VectorXc basis_eval(const ModelSpace& model, int k, const Point& x);

/// Working basis used for all numerics on a given support. Its sections are
/// w = A s for the canonical sections s, with A lower triangular:
/// orthonormal Chebyshev polynomials on the interval, (z/r)^j on circles and
/// disks, canonical harmonics on the sphere.
class SectionBasis {
 public:
  SectionBasis() : SectionBasis(Support::interval(), 0) {}
  SectionBasis(const Support& support, int k);

  int degree() const { return k_; }
  Index size() const { return n_; }
  const ModelSpace& model() const { return model_; }

  VectorXc eval(const Point& x) const;
  /// Rows are eval(points[r])^T.
  MatrixXc eval_rows(std::span<const Point> points) const;

  /// log|det A|.
  double log_abs_det_change() const { return log_abs_det_change_; }
  /// The change-of-basis matrix A (working = A * canonical).
  MatrixXc change_matrix() const;

 private:
  enum class Family { Chebyshev, ScaledMonomial, Harmonic };

  ModelSpace model_;
  Family family_;
  double scale_ = 1.0;
  int k_;
  Index n_;
  double log_abs_det_change_ = 0.0;
};

/// Rows are e^{-k phi(x_r)} * eval(x_r)^T.
MatrixXc weighted_rows(const SectionBasis& basis, const Weight& weight, int k,
                       std::span<const Point> points);

/// Weighted rows re-expressed in a basis orthonormal for the counting measure
/// on a reference point set (thin QR). Determinant ratios and Lagrange values
/// are unchanged, but far better conditioned than in the working basis.
class ConditionedRows {
 public:
  ConditionedRows(const SectionBasis& basis, const Weight& weight, int k, std::span<const Point> reference);

  /// Orthonormal rows at the reference points.
  const MatrixXc& reference_rows() const { return q_; }
  /// weighted_rows(points) R^{-1}.
  MatrixXc rows(std::span<const Point> points) const;
  /// log|det R|: log|det| of working-basis rows minus that of conditioned rows.
  double log_abs_det_factor() const { return log_abs_det_r_; }

 private:
  SectionBasis basis_;
  Weight weight_;
  int k_;
  MatrixXc r_;
  MatrixXc q_;
  double log_abs_det_r_ = 0.0;
};

// Reference pair ----------------------------------------------------------------

struct ReferencePair {
  WeightedSet set;
  DiscreteMeasure measure;
};

/// (unit circle, 0) with discretized normalized arclength, or (S^2, 0) with the
/// uniform product-quadrature measure; exact for Gram matrices up to degree k.
ReferencePair reference_pair(const ModelSpace& model, int k);

}  // namespace fekete

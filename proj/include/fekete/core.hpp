#pragma once

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace fekete {

using Complex = std::complex<double>;
using Index = Eigen::Index;
using MatrixXc = Eigen::MatrixXcd;
using VectorXc = Eigen::VectorXcd;

/// Input outside the admissible domain of an operation (off-support atom,
/// non-unit sphere point, unsupported model/law combination).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A numerical procedure failed to reach its stopping criterion, or was
/// asked to factor a singular system.
class NumericalError : public std::runtime_error {
 public:
  explicit NumericalError(const std::string& what, double residual = 0.0)
      : std::runtime_error(what), residual_(residual) {}

  /// Last value of the monitored residual (gap, pivot, ...).
  double residual() const noexcept { return residual_; }

 private:
  double residual_;
};

enum class ModelKind { ComplexLine, Sphere2 };

/// Concrete polynomial model standing in for a line bundle over a compact
/// manifold: univariate polynomials on the complex line, or real spherical
/// polynomials on S^2.
struct ModelSpace {
  ModelKind kind = ModelKind::ComplexLine;
  std::string description;

  static ModelSpace complex_line();
  static ModelSpace sphere();

  /// Dimension N_k of the degree-k section space.
  Index dimension(int k) const;

  friend bool operator==(const ModelSpace& a, const ModelSpace& b) { return a.kind == b.kind; }
};

/// A point of the ambient model. On the complex line (x, y) are the real and
/// imaginary parts and z = 0; on the sphere (x, y, z) is a unit vector.
struct Point {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  static Point complex(Complex w) { return {w.real(), w.imag(), 0.0}; }
  static Point real(double t) { return {t, 0.0, 0.0}; }

  Complex as_complex() const { return {x, y}; }
  double norm() const;

  friend bool operator==(const Point& a, const Point& b) = default;
};

/// Probability measure with finitely many atoms.
class DiscreteMeasure {
 public:
  DiscreteMeasure() = default;
  /// Throws DomainError unless masses are nonnegative, sum to 1 within 1e-12
  /// and match the atoms in length.
  DiscreteMeasure(std::vector<Point> atoms, std::vector<double> masses);

  static DiscreteMeasure uniform(std::vector<Point> atoms);
  static DiscreteMeasure dirac(const Point& p);

  const std::vector<Point>& atoms() const { return atoms_; }
  const std::vector<double>& masses() const { return masses_; }
  std::size_t size() const { return atoms_.size(); }

  /// (1 - t) * this + t * other on the concatenated atom list, t in [0, 1].
  DiscreteMeasure mix(const DiscreteMeasure& other, double t) const;

 private:
  std::vector<Point> atoms_;
  std::vector<double> masses_;
};

/// Ordered point configuration P = (x_1, ..., x_N).
struct Configuration {
  std::vector<Point> points;

  std::size_t size() const { return points.size(); }
  /// The averaging measure (1/N) sum delta_{x_j}.
  DiscreteMeasure as_measure() const;
};

}  // namespace fekete

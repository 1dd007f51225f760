#pragma once

#include <functional>
#include <iosfwd>
#include <span>
#include <vector>

#include "fekete/core.hpp"
#include "fekete/model_spaces.hpp"

namespace fekete {

/// Closed-form or tabulated equilibrium law used as a weak-convergence target.
class ReferenceLaw {
 public:
  enum class Kind { ArcsineInterval, UniformCircle, UniformSphere, OracleTable };

  static ReferenceLaw arcsine();
  static ReferenceLaw uniform_circle(double r);
  static ReferenceLaw uniform_sphere();
  /// Discrete law on the real axis (interval) or on a circle (by angle).
  static ReferenceLaw oracle_table(DiscreteMeasure table, Weight::Axis axis);

  Kind kind() const { return kind_; }
  double radius() const { return radius_; }
  bool is_one_dimensional() const { return kind_ != Kind::UniformSphere; }
  Weight::Axis axis() const { return axis_; }
  const DiscreteMeasure& table() const { return table_; }

  /// CDF in the law's parameter (x on the interval, angle in [0, 2 pi) on a
  /// circle). Right-continuous for tables.
  double cdf(double t) const;

 private:
  Kind kind_ = Kind::ArcsineInterval;
  double radius_ = 1.0;
  Weight::Axis axis_ = Weight::Axis::RealPart;
  DiscreteMeasure table_;
};

/// sum_i m_i f(x_i); throws NumericalError if f is non-finite on an atom.
double integrate(const DiscreteMeasure& mu, const std::function<double(const Point&)>& f);

/// Kolmogorov-Smirnov sup-distance of CDFs. On circles the CDF origin is
/// free, so the distance is minimized over it (half the range of the CDF
/// difference). Throws DomainError for the sphere law.
double ks_distance(const DiscreteMeasure& mu, const ReferenceLaw& law);

/// sqrt(sum_{1<=l<=L, m} |int Y_{l,m} dmu|^2) with area-normalized real
/// harmonics; atoms must lie on S^2.
double harmonic_discrepancy(const DiscreteMeasure& mu, int max_degree);

/// Closed-form equilibrium law when one is known, otherwise the energy
/// oracle's table (grid_size atoms).
ReferenceLaw reference_equilibrium(const WeightedSet& set, int grid_size = 1000);

struct EquilibriumOptions {
  double gap_tol = 1e-6;
  int max_iter = 500;
};

struct EquilibriumResult {
  DiscreteMeasure measure;
  double energy = 0.0;
  double gap = 0.0;
  int iterations = 0;
  std::vector<double> energy_trace;
};

/// Minimizes the discretized weighted logarithmic energy
///   E(m) = sum_{i,j} m_i m_j H_ij + 2 sum_i m_i Q(x_i)
/// over the probability simplex on a Chebyshev (interval) or equispaced
/// (circle) grid of size grid_size. H_ij is log(1/|x_i - x_j|) for distant
/// cells and the exact cell-averaged kernel for neighbouring and identical
/// cells. Energy is nonincreasing along the iterations; throws
/// NumericalError (carrying the gap) when max_iter is exhausted.
EquilibriumResult equilibrium_oracle(const WeightedSet& set, int grid_size, EquilibriumOptions opts = {});

// CSV ---------------------------------------------------------------------------

/// One row per atom: index,x_re,x_im,mass (complex line) or index,x,y,z,mass (sphere).
void write_measure_csv(std::ostream& os, const DiscreteMeasure& mu, ModelKind kind);
DiscreteMeasure read_measure_csv(std::istream& is);

}  // namespace fekete

#include "fekete/core.hpp"

#include <cmath>
#include <numeric>

namespace fekete {

ModelSpace ModelSpace::complex_line() { return {ModelKind::ComplexLine, "polynomials on the complex line"}; }

ModelSpace ModelSpace::sphere() { return {ModelKind::Sphere2, "spherical polynomials on S^2"}; }

Index ModelSpace::dimension(int k) const {
  if (k < 0) throw DomainError("degree must be nonnegative");
  const Index n = k + 1;
  return kind == ModelKind::ComplexLine ? n : n * n;
}

double Point::norm() const { return std::sqrt(x * x + y * y + z * z); }

DiscreteMeasure::DiscreteMeasure(std::vector<Point> atoms, std::vector<double> masses)
    : atoms_(std::move(atoms)), masses_(std::move(masses)) {
  if (atoms_.size() != masses_.size()) throw DomainError("atoms and masses differ in length");
  if (atoms_.empty()) throw DomainError("measure has no atoms");
  double total = 0.0;
  for (double m : masses_) {
    if (!(m >= 0.0) || !std::isfinite(m)) throw DomainError("negative or non-finite mass");
    total += m;
  }
  if (std::abs(total - 1.0) > 1e-12) throw DomainError("masses do not sum to 1");
}

DiscreteMeasure DiscreteMeasure::uniform(std::vector<Point> atoms) {
  const auto n = atoms.size();
  if (n == 0) throw DomainError("measure has no atoms");
  return {std::move(atoms), std::vector<double>(n, 1.0 / static_cast<double>(n))};
}

DiscreteMeasure DiscreteMeasure::dirac(const Point& p) { return {{p}, {1.0}}; }

DiscreteMeasure DiscreteMeasure::mix(const DiscreteMeasure& other, double t) const {
  if (!(t >= 0.0 && t <= 1.0)) throw DomainError("mixing parameter outside [0, 1]");
  std::vector<Point> atoms = atoms_;
  atoms.insert(atoms.end(), other.atoms_.begin(), other.atoms_.end());
  std::vector<double> masses;
  masses.reserve(atoms.size());
  for (double m : masses_) masses.push_back((1.0 - t) * m);
  for (double m : other.masses_) masses.push_back(t * m);
  return {std::move(atoms), std::move(masses)};
}

DiscreteMeasure Configuration::as_measure() const { return DiscreteMeasure::uniform(points); }

}  // namespace fekete

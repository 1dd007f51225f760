#include "fekete/selftest.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "fekete/bergman.hpp"
#include "fekete/configurations.hpp"
#include "fekete/gram.hpp"

namespace fekete {

namespace {

struct Case {
  WeightedSet set;
  DiscreteMeasure mu;
  int k;
};

std::vector<Point> interval_points(std::initializer_list<double> xs) {
  std::vector<Point> out;
  for (double x : xs) out.push_back(Point::real(x));
  return out;
}

std::vector<Point> angles(double r, std::initializer_list<double> ts) {
  std::vector<Point> out;
  for (double t : ts) out.push_back(Point::complex(std::polar(r, t)));
  return out;
}

std::vector<Point> sphere_points(std::initializer_list<std::pair<double, double>> ts) {
  std::vector<Point> out;
  for (auto [theta, phi] : ts)
    out.push_back({std::sin(theta) * std::cos(phi), std::sin(theta) * std::sin(phi), std::cos(theta)});
  return out;
}

DiscreteMeasure weighted(std::vector<Point> atoms, std::vector<double> raw) {
  double total = 0.0;
  for (double v : raw) total += v;
  for (double& v : raw) v /= total;
  return {std::move(atoms), std::move(raw)};
}

SelftestCheck check(std::string name, double error, double tol) {
  return {std::move(name), error, tol, error <= tol};
}

/// Small enumerable cases for the determinant identity.
std::vector<Case> identity_cases() {
  std::vector<Case> out;
  {
    auto atoms = interval_points({-0.9, -0.2, 0.35, 0.8, 1.0});
    WeightedSet set(Support::interval(), Weight::quadratic(0.3), atoms);
    out.push_back({set, weighted(atoms, {1, 2, 3, 1, 2}), 2});
  }
  {
    auto atoms = angles(1.0, {0.1, 1.3, 2.0, 3.9, 5.2, 5.9});
    WeightedSet set(Support::circle(), Weight::zero(), atoms);
    out.push_back({set, weighted(atoms, {2, 1, 1, 3, 1, 2}), 3});
  }
  {
    auto atoms = sphere_points({{0.3, 0.2}, {1.1, 2.5}, {2.0, 4.1}, {2.8, 0.9}, {1.6, 5.5}, {0.9, 3.3}});
    WeightedSet set(Support::sphere(), Weight::zero(), atoms);
    out.push_back({set, weighted(atoms, {1, 1, 2, 1, 3, 1}), 1});
  }
  {
    auto atoms = angles(0.7, {0.0, 0.9, 2.2, 3.0, 4.4});
    for (auto& p : atoms) p = Point::complex(p.as_complex() * 0.8);
    WeightedSet set(Support::disk(), Weight::log_abs_shift({2.0, 0.5}), atoms);
    out.push_back({set, weighted(atoms, {1, 2, 1, 2, 1}), 2});
  }
  return out;
}

/// Nondegenerate configurations of size N_k.
std::vector<Case> configuration_cases() {
  std::vector<Case> out;
  auto add = [&](Support s, Weight w, std::vector<Point> pts, int k) {
    WeightedSet set(std::move(s), std::move(w), pts);
    out.push_back({set, DiscreteMeasure::uniform(pts), k});
  };
  add(Support::interval(), Weight::zero(), interval_points({-1.0, -0.6, 0.1, 0.5, 0.95}), 4);
  add(Support::interval(), Weight::quadratic(0.25), interval_points({-0.8, -0.1, 0.4, 1.0}), 3);
  add(Support::circle(2.0), Weight::zero(), angles(2.0, {0.0, 0.7, 1.9, 3.1, 4.0, 5.6}), 5);
  add(Support::disk(), Weight::log_abs_shift({3.0, 0.0}), angles(0.6, {0.2, 2.1, 4.4}), 2);
  add(Support::sphere(), Weight::zero(),
      sphere_points({{0.2, 0.0}, {0.9, 1.0}, {1.2, 2.9}, {1.7, 4.3}, {2.3, 0.5}, {2.9, 5.0}, {1.5, 1.5}, {0.6, 3.7},
                     {2.0, 2.2}}),
      2);
  return out;
}

}  // namespace

std::vector<SelftestCheck> run_selftest(SelftestOptions opts) {
  std::vector<SelftestCheck> out;
  std::mt19937_64 rng(20240611);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);

  const std::vector<Case> small = identity_cases();
  int idx = 0;
  for (const auto& c : small) {
    const auto r = det_section_l2_identity_check(c.set, c.mu, c.k, opts.inject_fault ? 1e-3 : 0.0);
    out.push_back(check("det identity #" + std::to_string(++idx) + " (" + c.set.support().label() + ")",
                        std::abs(r.lhs / r.rhs - 1.0), 1e-12));
  }

  idx = 0;
  for (const auto& c : configuration_cases()) {
    ++idx;
    const GramSystem gs(c.set, c.mu, c.k);
    const auto beta = bergman_measure(gs);
    double err = 0.0;
    for (std::size_t i = 0; i < beta.size(); ++i) err = std::max(err, std::abs(beta.masses()[i] - c.mu.masses()[i]));
    out.push_back(check("balanced config #" + std::to_string(idx) + " (" + c.set.support().label() + ")", err, 1e-8));
  }

  idx = 0;
  for (const auto& c : small) {
    ++idx;
    const GramSystem gs(c.set, c.mu, c.k);
    const auto rho = rho_values(gs, c.mu.atoms());
    double trace = 0.0;
    for (std::size_t i = 0; i < rho.size(); ++i) trace += c.mu.masses()[i] * rho[i];
    out.push_back(check("trace identity #" + std::to_string(idx), std::abs(trace - gs.dimension()), 1e-8));
  }

  idx = 0;
  for (const auto& c : small) {
    ++idx;
    const ReferencePair ref = reference_pair(c.set.model(), c.k);
    const double shift = 0.37;
    const double base = l_functional(c.set, c.mu, c.k, ref);
    const double moved = l_functional(c.set.with_weight(c.set.weight().shifted(shift)), c.mu, c.k, ref);
    out.push_back(check("weight shift #" + std::to_string(idx), std::abs(moved - base - shift), 1e-10));
  }

  // Derivatives of -logdet G (log-volume of the L2 unit ball up to a constant).
  const double h = 1e-5;
  auto fd_tol = [](double v) { return std::max(1e-6, 1e-4 * std::abs(v)); };
  for (int trial = 0; trial < 10; ++trial) {
    const auto& c = small[static_cast<std::size_t>(trial) % small.size()];
    std::vector<double> nu_raw;
    for (std::size_t i = 0; i < c.mu.size(); ++i) nu_raw.push_back(1.0 + 0.9 * unit(rng));
    const DiscreteMeasure nu = weighted(c.mu.atoms(), nu_raw);
    auto vol = [&](double t) {
      std::vector<double> m(c.mu.size());
      for (std::size_t i = 0; i < m.size(); ++i) m[i] = c.mu.masses()[i] + t * (nu.masses()[i] - c.mu.masses()[i]);
      return -GramSystem(c.set, DiscreteMeasure(c.mu.atoms(), m), c.k).logdet();
    };
    const double fd = (vol(h) - vol(-h)) / (2.0 * h);
    const GramSystem gs(c.set, c.mu, c.k);
    const auto rho = rho_values(gs, c.mu.atoms());
    double exact = 0.0;
    for (std::size_t i = 0; i < rho.size(); ++i) exact -= rho[i] * (nu.masses()[i] - c.mu.masses()[i]);
    out.push_back(check("d/dmu #" + std::to_string(trial + 1), std::abs(fd - exact), fd_tol(exact)));
  }
  // the sphere only carries the zero weight
  const std::size_t flat[] = {0, 1, 3};
  for (int trial = 0; trial < 10; ++trial) {
    const auto& c = small[flat[trial % 3]];
    const double a = unit(rng), b = unit(rng), q = unit(rng);
    auto v = [=](const Point& p) { return a * p.x + b * p.y + q * (p.x * p.x + p.y * p.y); };
    const Weight phi = c.set.weight();
    auto vol = [&](double t) {
      const Weight w = Weight::custom([=](const Point& p) { return phi(p) + t * v(p); }, "perturbed");
      return -GramSystem(c.set.with_weight(w), c.mu, c.k).logdet();
    };
    const double fd = (vol(h) - vol(-h)) / (2.0 * h);
    const GramSystem gs(c.set, c.mu, c.k);
    const auto beta = bergman_measure(gs);
    double integral = 0.0;
    for (std::size_t i = 0; i < beta.size(); ++i) integral += v(beta.atoms()[i]) * beta.masses()[i];
    const double exact = 2.0 * c.k * gs.dimension() * integral;
    out.push_back(check("d/dphi #" + std::to_string(trial + 1), std::abs(fd - exact), fd_tol(exact)));
  }

  idx = 0;
  for (const auto& c : small) {
    ++idx;
    const auto trace = recursively_extremal(c.set, c.mu, c.k);
    double worst = 0.0;
    const Index n = static_cast<Index>(trace.rho_values.size());
    for (Index j = 0; j < n; ++j) worst = std::max(worst, static_cast<double>(n - j) - trace.rho_values[j]);
    out.push_back(check("recursive rho >= j #" + std::to_string(idx), std::max(0.0, worst), 1e-9));
    const MatrixXc e = trace.evaluation_matrix();
    double off = 0.0;
    for (Index r = 0; r < n; ++r)
      for (Index col = 0; col < r; ++col) off = std::max(off, std::abs(e(r, col)));
    out.push_back(check("recursive triangular #" + std::to_string(idx), off / e.cwiseAbs().maxCoeff(), 1e-10));
    const double log_fact = std::lgamma(static_cast<double>(n) + 1.0);
    out.push_back(check("recursive det^2 >= N! #" + std::to_string(idx),
                        std::max(0.0, log_fact - trace.log_abs_det_sq()), 1e-9));
  }
  return out;
}

}  // namespace fekete

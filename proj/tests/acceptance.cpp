// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include "fekete/bergman.hpp"
#include "fekete/cli.hpp"
#include "fekete/configurations.hpp"
#include "fekete/design_distortion.hpp"
#include "fekete/gram.hpp"
#include "fekete/measures.hpp"

using namespace fekete;

namespace {

struct Outcome {
  bool passed = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      passed = false;
      if (!detail.empty()) detail += "; ";
      detail += what;
    }
  }
  void note(const std::string& what) {
    if (!detail.empty()) detail += "; ";
    detail += what;
  }
};

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

std::vector<Point> reals(std::initializer_list<double> xs) {
  std::vector<Point> out;
  for (double x : xs) out.push_back(Point::real(x));
  return out;
}

std::vector<Point> arc(double r, std::initializer_list<double> ts) {
  std::vector<Point> out;
  for (double t : ts) out.push_back(Point::complex(std::polar(r, t)));
  return out;
}

std::vector<Point> sphere_pts(std::initializer_list<std::pair<double, double>> ts) {
  std::vector<Point> out;
  for (auto [theta, phi] : ts)
    out.push_back({std::sin(theta) * std::cos(phi), std::sin(theta) * std::sin(phi), std::cos(theta)});
  return out;
}

DiscreteMeasure normalized(std::vector<Point> atoms, std::vector<double> raw) {
  const double total = std::accumulate(raw.begin(), raw.end(), 0.0);
  for (double& v : raw) v /= total;
  return {std::move(atoms), std::move(raw)};
}

struct Case {
  WeightedSet set;
  DiscreteMeasure mu;
  int k;
};

std::vector<Case> small_cases() {
  std::vector<Case> out;
  auto add = [&](Support s, Weight w, std::vector<Point> atoms, std::vector<double> masses, int k) {
    WeightedSet set(std::move(s), std::move(w), atoms);
    out.push_back({set, normalized(atoms, std::move(masses)), k});
  };
  add(Support::interval(), Weight::quadratic(0.3), reals({-0.9, -0.2, 0.35, 0.8, 1.0}), {1, 2, 3, 1, 2}, 2);
  add(Support::circle(), Weight::zero(), arc(1.0, {0.1, 1.3, 2.0, 3.9, 5.2, 5.9}), {2, 1, 1, 3, 1, 2}, 3);
  add(Support::sphere(), Weight::zero(),
      sphere_pts({{0.3, 0.2}, {1.1, 2.5}, {2.0, 4.1}, {2.8, 0.9}, {1.6, 5.5}, {0.9, 3.3}}), {1, 1, 2, 1, 3, 1}, 1);
  add(Support::disk(), Weight::log_abs_shift({2.0, 0.5}), arc(0.56, {0.0, 0.9, 2.2, 3.0, 4.4}), {1, 2, 1, 2, 1}, 2);
  add(Support::circle(2.0), Weight::zero(), arc(2.0, {0.0, 1.0, 2.5, 4.0, 5.5}), {3, 1, 2, 1, 1}, 2);
  return out;
}

std::vector<Case> balanced_cases() {
  std::vector<Case> out;
  auto add = [&](Support s, Weight w, std::vector<Point> pts, int k) {
    WeightedSet set(std::move(s), std::move(w), pts);
    out.push_back({set, DiscreteMeasure::uniform(pts), k});
  };
  add(Support::interval(), Weight::zero(), reals({-1.0, -0.6, 0.1, 0.5, 0.95}), 4);
  add(Support::interval(), Weight::quadratic(0.25), reals({-0.8, -0.1, 0.4, 1.0}), 3);
  add(Support::circle(2.0), Weight::zero(), arc(2.0, {0.0, 0.7, 1.9, 3.1, 4.0, 5.6}), 5);
  add(Support::disk(), Weight::log_abs_shift({3.0, 0.0}), arc(0.6, {0.2, 2.1, 4.4}), 2);
  add(Support::sphere(), Weight::zero(),
      sphere_pts({{0.2, 0.0}, {0.9, 1.0}, {1.2, 2.9}, {1.7, 4.3}, {2.3, 0.5}, {2.9, 5.0}, {1.5, 1.5}, {0.6, 3.7}, {2.0, 2.2}}),
      2);
  add(Support::circle(), Weight::zero(), arc(1.0, {0.3, 1.4, 2.2, 4.9}), 3);
  return out;
}

double trace_error(const GramSystem& gs) {
  const auto& mu = gs.measure();
  const auto rho = rho_values(gs, mu.atoms());
  double trace = 0.0;
  for (std::size_t i = 0; i < rho.size(); ++i) trace += mu.masses()[i] * rho[i];
  return std::abs(trace - static_cast<double>(gs.dimension()));
}

/// Uniform probability measure on [-1, 1] by Gauss-Legendre quadrature.
DiscreteMeasure interval_uniform(int m) {
  const QuadratureRule q = gauss_legendre(m);
  std::vector<Point> atoms;
  std::vector<double> masses;
  for (std::size_t i = 0; i < q.nodes.size(); ++i) {
    atoms.push_back(Point::real(q.nodes[i]));
    masses.push_back(0.5 * q.weights[i]);
  }
  return {atoms, masses};
}

WeightedSet lobatto_set(int m, Weight w = Weight::zero()) {
  return {Support::interval(), std::move(w), chebyshev_lobatto_grid(m % 2 == 0 ? m + 1 : m)};
}

bool strictly_decreasing(const std::vector<double>& v) {
  for (std::size_t i = 1; i < v.size(); ++i)
    if (!(v[i] < v[i - 1])) return false;
  return true;
}

std::string list(const std::vector<double>& v) {
  std::string s = "[";
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + fmt(v[i]);
  return s + "]";
}

double ks_arcsine(const DiscreteMeasure& m) { return ks_distance(m, ReferenceLaw::arcsine()); }

// 1 ------------------------------------------------------------------------------------
Outcome exact_identities() {
  Outcome o;
  const auto start = std::chrono::steady_clock::now();
  const auto cases = small_cases();
  double det_err = 0.0, trace_err = 0.0, shift_err = 0.0, bal_err = 0.0;
  for (const auto& c : cases) {
    const auto r = det_section_l2_identity_check(c.set, c.mu, c.k);
    det_err = std::max(det_err, std::abs(r.lhs / r.rhs - 1.0));
    trace_err = std::max(trace_err, trace_error(GramSystem(c.set, c.mu, c.k)));
    const ReferencePair ref = reference_pair(c.set.model(), c.k);
    for (double shift : {-1.3, 0.37, 2.5}) {
      const WeightedSet moved = c.set.with_weight(c.set.weight().shifted(shift));
      trace_err = std::max(trace_err, trace_error(GramSystem(moved, c.mu, c.k)));
      const double d = l_functional(moved, c.mu, c.k, ref) - l_functional(c.set, c.mu, c.k, ref) - shift;
      shift_err = std::max(shift_err, std::abs(d));
    }
  }
  const auto balanced = balanced_cases();
  for (const auto& c : balanced) {
    const GramSystem gs(c.set, c.mu, c.k);
    trace_err = std::max(trace_err, trace_error(gs));
    const auto beta = bergman_measure(gs);
    for (std::size_t i = 0; i < beta.size(); ++i)
      bal_err = std::max(bal_err, std::abs(beta.masses()[i] - c.mu.masses()[i]));
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  o.require(cases.size() >= 3 && det_err <= 1e-12, "det identity error " + fmt(det_err));
  o.require(balanced.size() >= 5 && bal_err <= 1e-8, "balanced error " + fmt(bal_err));
  o.require(trace_err <= 1e-8, "trace error " + fmt(trace_err));
  o.require(shift_err <= 1e-10, "weight shift error " + fmt(shift_err));
  o.require(secs <= 60.0, "runtime " + fmt(secs) + " s");
  if (o.passed)
    o.note("det " + fmt(det_err) + ", balanced " + fmt(bal_err) + ", trace " + fmt(trace_err) + ", shift " +
           fmt(shift_err) + ", " + fmt(secs) + " s");
  return o;
}

// 2 ------------------------------------------------------------------------------------
double neg_logdet(const WeightedSet& set, const DiscreteMeasure& mu, int k) { return -GramSystem(set, mu, k).logdet(); }

Outcome derivatives() {
  Outcome o;
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  const auto cases = small_cases();
  const double h = 1e-5;
  double worst_mu = 0.0, worst_phi = 0.0;
  int n_mu = 0, n_phi = 0;
  for (int trial = 0; trial < 12; ++trial) {
    const auto& c = cases[static_cast<std::size_t>(trial) % cases.size()];
    std::vector<double> raw;
    for (std::size_t i = 0; i < c.mu.size(); ++i) raw.push_back(1.0 + 0.9 * unit(rng));
    const DiscreteMeasure nu = normalized(c.mu.atoms(), raw);
    auto vol = [&](double t) {
      std::vector<double> m(c.mu.size());
      for (std::size_t i = 0; i < m.size(); ++i) m[i] = c.mu.masses()[i] + t * (nu.masses()[i] - c.mu.masses()[i]);
      return neg_logdet(c.set, DiscreteMeasure(c.mu.atoms(), m), c.k);
    };
    const double fd = (vol(h) - vol(-h)) / (2.0 * h);
    const auto rho = rho_values(GramSystem(c.set, c.mu, c.k), c.mu.atoms());
    double exact = 0.0;
    for (std::size_t i = 0; i < rho.size(); ++i) exact -= rho[i] * (nu.masses()[i] - c.mu.masses()[i]);
    worst_mu = std::max(worst_mu, std::abs(fd - exact) / std::abs(exact));
    ++n_mu;
  }
  // the sphere only carries constant weights
  std::vector<const Case*> flat;
  for (const auto& c : cases)
    if (c.set.support().kind != Support::Kind::Sphere) flat.push_back(&c);
  for (int trial = 0; trial < 12; ++trial) {
    const Case& c = *flat[static_cast<std::size_t>(trial) % flat.size()];
    const double a = unit(rng), b = unit(rng), q = unit(rng);
    auto v = [=](const Point& p) { return 0.5 + a * p.x + b * p.y + q * (p.x * p.x + p.y * p.y); };
    const Weight phi = c.set.weight();
    auto vol = [&](double t) {
      const Weight w = Weight::custom([=](const Point& p) { return phi(p) + t * v(p); }, "perturbed");
      return neg_logdet(c.set.with_weight(w), c.mu, c.k);
    };
    const double fd = (vol(h) - vol(-h)) / (2.0 * h);
    const GramSystem gs(c.set, c.mu, c.k);
    const auto beta = bergman_measure(gs);
    double integral = 0.0;
    for (std::size_t i = 0; i < beta.size(); ++i) integral += v(beta.atoms()[i]) * beta.masses()[i];
    const double exact = 2.0 * c.k * static_cast<double>(gs.dimension()) * integral;
    worst_phi = std::max(worst_phi, std::abs(fd - exact) / std::abs(exact));
    ++n_phi;
  }
  o.require(n_mu >= 10 && worst_mu <= 1e-4, "mu-direction relative error " + fmt(worst_mu));
  o.require(n_phi >= 10 && worst_phi <= 1e-4, "phi-direction relative error " + fmt(worst_phi));
  if (o.passed)
    o.note("mu " + fmt(worst_mu) + " over " + std::to_string(n_mu) + ", phi (factor 2kN) " + fmt(worst_phi) + " over " +
           std::to_string(n_phi));
  return o;
}

// 3 ------------------------------------------------------------------------------------
Outcome convexity() {
  Outcome o;
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  const auto cases = small_cases();
  double worst_mu = 0.0, worst_phi = 0.0;
  int triples = 0;
  for (int trial = 0; trial < 24; ++trial) {
    const auto& c = cases[static_cast<std::size_t>(trial) % cases.size()];
    std::vector<double> r1, r2;
    for (std::size_t i = 0; i < c.mu.size(); ++i) {
      r1.push_back(1.0 + 0.95 * unit(rng));
      r2.push_back(1.0 + 0.95 * unit(rng));
    }
    const DiscreteMeasure m1 = normalized(c.mu.atoms(), r1), m2 = normalized(c.mu.atoms(), r2);
    const DiscreteMeasure mid = m1.mix(m2, 0.5);
    // convex in mu: f(mid) <= average
    worst_mu = std::max(worst_mu, neg_logdet(c.set, mid, c.k) -
                                      0.5 * (neg_logdet(c.set, m1, c.k) + neg_logdet(c.set, m2, c.k)));
    ++triples;
  }
  int phi_triples = 0;
  for (int trial = 0; phi_triples < 24; ++trial) {
    const auto& c = cases[static_cast<std::size_t>(trial) % cases.size()];
    if (c.set.support().kind == Support::Kind::Sphere) continue;
    const double a1 = unit(rng), b1 = unit(rng), q1 = unit(rng);
    const double a2 = unit(rng), b2 = unit(rng), q2 = unit(rng);
    auto make = [&](double a, double b, double q) {
      const Weight base = c.set.weight();
      return c.set.with_weight(Weight::custom(
          [=](const Point& p) { return base(p) + a * p.x + b * p.y + q * (p.x * p.x + p.y * p.y); }, "probe"));
    };
    const double f1 = neg_logdet(make(a1, b1, q1), c.mu, c.k);
    const double f2 = neg_logdet(make(a2, b2, q2), c.mu, c.k);
    const double fm = neg_logdet(make(0.5 * (a1 + a2), 0.5 * (b1 + b2), 0.5 * (q1 + q2)), c.mu, c.k);
    // concave in phi: f(mid) >= average
    worst_phi = std::max(worst_phi, 0.5 * (f1 + f2) - fm);
    ++phi_triples;
  }
  o.require(triples >= 20 && worst_mu <= 1e-10, "mu midpoint violation " + fmt(worst_mu));
  o.require(phi_triples >= 20 && worst_phi <= 1e-10, "phi midpoint violation " + fmt(worst_phi));
  if (o.passed)
    o.note(std::to_string(triples) + " mu triples, " + std::to_string(phi_triples) + " phi triples, worst violations " +
           fmt(worst_mu) + ", " + fmt(worst_phi));
  return o;
}

// 4 ------------------------------------------------------------------------------------
Outcome circle_exactness() {
  Outcome o;
  double worst = 0.0;
  for (int k = 1; k <= 20; ++k) {
    const int n = k + 1;
    const WeightedSet set(Support::circle(), Weight::zero(), circle_grid(1.0, 4 * n));
    const auto r = fekete_search(set, k);
    worst = std::max(worst, std::abs(r.log_abs_det_weighted - 0.5 * n * std::log(static_cast<double>(n))));
  }
  o.require(worst <= 1e-6, "worst log|det| error for k <= 20: " + fmt(worst));
  const WeightedSet unit(Support::circle(), Weight::zero(), circle_grid(1.0, 8));
  const double d1 = k_diameter(unit, 1, fekete_search(unit, 1));
  o.require(std::abs(d1 + 0.5 * std::log(2.0)) <= 1e-9, "D_1(r=1) = " + fmt(d1));
  const WeightedSet wide(Support::circle(2.0), Weight::zero(), circle_grid(2.0, 4 * 41));
  const double d40 = k_diameter(wide, 40, fekete_search(wide, 40));
  const double gap = std::abs(d40 + 0.5 * std::log(2.0));
  o.require(gap <= 0.02, "D_40(r=2) = " + fmt(d40) + ", distance " + fmt(gap) + " > 0.02");
  if (o.passed) o.note("log|det| error " + fmt(worst) + ", D_40(r=2) = " + fmt(d40));
  return o;
}

// 5 ------------------------------------------------------------------------------------
double brute_best(const WeightedSet& set, int k, std::vector<Point>* best_pts) {
  const auto& g = set.grid();
  const int n = k + 1;
  std::vector<int> idx(static_cast<std::size_t>(n));
  std::iota(idx.begin(), idx.end(), 0);
  double best = -std::numeric_limits<double>::infinity();
  const int m = static_cast<int>(g.size());
  for (;;) {
    std::vector<Point> pts;
    for (int i : idx) pts.push_back(g[static_cast<std::size_t>(i)]);
    const double v = weighted_vandermonde(set, k, Configuration{pts});
    if (v > best) {
      best = v;
      if (best_pts) *best_pts = pts;
    }
    int j = n - 1;
    while (j >= 0 && idx[static_cast<std::size_t>(j)] == m - n + j) --j;
    if (j < 0) break;
    ++idx[static_cast<std::size_t>(j)];
    for (int t = j + 1; t < n; ++t) idx[static_cast<std::size_t>(t)] = idx[static_cast<std::size_t>(t - 1)] + 1;
  }
  return best;
}

std::vector<double> sorted_x(const Configuration& p) {
  std::vector<double> xs;
  for (const auto& q : p.points) xs.push_back(q.x);
  std::sort(xs.begin(), xs.end());
  return xs;
}

Outcome interval_fekete() {
  Outcome o;
  const WeightedSet fine = lobatto_set(2001);
  const auto x2 = sorted_x(fekete_search(fine, 2).config);
  o.require(x2 == std::vector<double>{-1.0, 0.0, 1.0}, "k=2 nodes " + list(x2));
  const auto x3 = sorted_x(fekete_search(fine, 3).config);
  const double s = 1.0 / std::sqrt(5.0);
  const std::vector<double> want3{-1.0, -s, s, 1.0};
  double err3 = 0.0;
  for (std::size_t i = 0; i < 4; ++i) err3 = std::max(err3, std::abs(x3[i] - want3[i]));
  o.require(err3 <= 1e-3, "k=3 node error " + fmt(err3));

  const WeightedSet coarse = lobatto_set(41);
  double brute_gap = 0.0;
  for (int k = 1; k <= 3; ++k) {
    const double best = brute_best(coarse, k, nullptr);
    brute_gap = std::max(brute_gap, best - fekete_search(coarse, k).log_abs_det_weighted);
  }
  o.require(brute_gap <= 1e-10, "search falls short of brute force by " + fmt(brute_gap));

  std::vector<double> ks;
  for (int k : {10, 40}) ks.push_back(ks_arcsine(fekete_search(lobatto_set(8 * (k + 1)), k).config.as_measure()));
  o.require(ks[1] <= 0.10, "KS at k=40 " + fmt(ks[1]));
  o.require(ks[1] < ks[0], "KS not smaller than at k=10: " + list(ks));
  if (o.passed) o.note("k=3 error " + fmt(err3) + ", KS(k=10,40) " + list(ks));
  return o;
}

// 6 ------------------------------------------------------------------------------------
Outcome transfinite_diameter() {
  Outcome o;
  const WeightedSet set = lobatto_set(8 * 41);
  const double d = k_diameter(set, 40, fekete_search(set, 40));
  const double target = 0.5 * std::log(2.0);
  const auto eq = equilibrium_oracle(WeightedSet(Support::interval(), Weight::zero(), chebyshev_grid(64)), 400);
  o.require(std::abs(d - target) <= 0.03,
            "D_40 = " + fmt(d) + ", distance " + fmt(std::abs(d - target)) + " from (1/2)log 2 > 0.03");
  o.require(std::abs(eq.energy - std::log(2.0)) <= 5e-2, "energy oracle Robin constant " + fmt(eq.energy));
  o.note("Robin constant " + fmt(eq.energy) + ", half of it " + fmt(0.5 * eq.energy));
  if (o.passed) o.note("D_40 = " + fmt(d));
  return o;
}

// 7 ------------------------------------------------------------------------------------
Outcome bergman_measures() {
  Outcome o;
  const DiscreteMeasure mu = interval_uniform(2000);
  const WeightedSet iv(Support::interval(), Weight::zero(), mu.atoms());
  std::vector<double> ks;
  for (int k : {10, 20, 40}) ks.push_back(ks_arcsine(bergman_measure(GramSystem(iv, mu, k))));
  o.require(strictly_decreasing(ks), "KS not decreasing " + list(ks));
  o.require(ks.back() <= 0.10, "KS at k=40 " + fmt(ks.back()));
  double worst = 0.0;
  for (int k = 1; k <= 20; ++k) {
    const auto grid = circle_grid(1.0, 64);
    const WeightedSet circ(Support::circle(), Weight::zero(), grid);
    const DiscreteMeasure u = DiscreteMeasure::uniform(grid);
    const auto beta = bergman_measure(GramSystem(circ, u, k));
    for (std::size_t i = 0; i < beta.size(); ++i) worst = std::max(worst, std::abs(beta.masses()[i] - u.masses()[i]));
  }
  o.require(worst <= 1e-10, "circle beta - mu " + fmt(worst));
  if (o.passed) o.note("KS " + list(ks) + ", circle error " + fmt(worst));
  return o;
}

// 8 ------------------------------------------------------------------------------------
Outcome optimal_measures() {
  Outcome o;
  int max_iter = 0;
  std::vector<double> ks;
  for (int k = 1; k <= 20; ++k) {
    const WeightedSet set = lobatto_set(8 * (k + 1));
    const auto r = optimal_measure_fixed_point(set, k, {1e-3, 10000});
    const double n = k + 1.0;
    o.require(r.converged && r.sup_rho <= n * (1.0 + 1e-3),
              "k=" + std::to_string(k) + " sup rho " + fmt(r.sup_rho) + " after " + std::to_string(r.iterations));
    for (std::size_t i = 1; i < r.logdet_trace.size(); ++i)
      if (r.logdet_trace[i] < r.logdet_trace[i - 1]) {
        o.require(false, "logdet trace decreases at k=" + std::to_string(k));
        break;
      }
    max_iter = std::max(max_iter, r.iterations);
    if (k == 5 || k == 10 || k == 20) ks.push_back(ks_arcsine(r.measure));
  }
  o.require(strictly_decreasing(ks), "KS not decreasing " + list(ks));

  // k = 1 design against a brute-force two-atom search
  const WeightedSet set = lobatto_set(41);
  const auto r1 = optimal_measure_fixed_point(set, 1, {1e-6, 10000});
  const auto& g = set.grid();
  double best = -std::numeric_limits<double>::infinity();
  DiscreteMeasure best_mu;
  for (std::size_t a = 0; a < g.size(); ++a)
    for (std::size_t b = a + 1; b < g.size(); ++b)
      for (int s = 1; s < 100; ++s) {
        const double t = s / 100.0;
        const DiscreteMeasure m({g[a], g[b]}, {t, 1.0 - t});
        const double ld = GramSystem(set, m, 1).logdet();
        if (ld > best) best = ld, best_mu = m;
      }
  double mass_err = 0.0;
  double stray = 0.0;
  for (std::size_t i = 0; i < r1.measure.size(); ++i) {
    const double x = r1.measure.atoms()[i].x;
    const double m = r1.measure.masses()[i];
    if (std::abs(std::abs(x) - 1.0) < 1e-15)
      mass_err = std::max(mass_err, std::abs(m - 0.5));
    else
      stray += m;
  }
  double oracle_err = 0.0;
  for (std::size_t i = 0; i < 2; ++i)
    oracle_err = std::max({oracle_err, std::abs(std::abs(best_mu.atoms()[i].x) - 1.0), std::abs(best_mu.masses()[i] - 0.5)});
  o.require(oracle_err <= 1e-12, "brute-force oracle optimum is not 1/2 at +-1");
  o.require(mass_err + stray <= 1e-3, "k=1 design error " + fmt(mass_err + stray));
  if (o.passed)
    o.note("max iterations " + std::to_string(max_iter) + ", k=1 error " + fmt(mass_err + stray) + ", KS " + list(ks));
  return o;
}

// 9 ------------------------------------------------------------------------------------
Outcome recursive_extremal() {
  Outcome o;
  std::vector<FeketeResult> results;
  std::vector<GramSystem> normalizers;
  std::vector<double> ks;
  double rho_gap = 0.0, det_gap = 0.0;
  for (int k : {5, 10, 20, 40}) {
    const DiscreteMeasure mu = interval_uniform(4 * (k + 1));
    const WeightedSet set = lobatto_set(8 * (k + 1));
    const auto trace = recursively_extremal(set, mu, k);
    const auto n = static_cast<Index>(trace.rho_values.size());
    for (Index j = 0; j < n; ++j) rho_gap = std::max(rho_gap, static_cast<double>(n - j) - trace.rho_values[j]);
    det_gap = std::max(det_gap, std::lgamma(static_cast<double>(n) + 1.0) - trace.log_abs_det_sq());
    results.push_back(evaluate_configuration(set, k, trace.configuration(), ConfigMethod::RecursiveExtremal));
    normalizers.emplace_back(set, mu, k);
    if (k >= 10) ks.push_back(ks_arcsine(trace.configuration().as_measure()));
  }
  // the sphere and circle runs check the invariants on other supports
  for (const auto& c : small_cases()) {
    const auto trace = recursively_extremal(c.set, c.mu, c.k);
    const auto n = static_cast<Index>(trace.rho_values.size());
    for (Index j = 0; j < n; ++j) rho_gap = std::max(rho_gap, static_cast<double>(n - j) - trace.rho_values[j]);
    det_gap = std::max(det_gap, std::lgamma(static_cast<double>(n) + 1.0) - trace.log_abs_det_sq());
  }
  const auto report = asymptotic_fekete_check(results, normalizers);
  const double min_value = *std::min_element(report.values.begin(), report.values.end());
  o.require(rho_gap <= 0.0, "rho(x_j) falls below j by " + fmt(rho_gap));
  o.require(det_gap <= 0.0, "|det|^2 falls below N! by " + fmt(det_gap) + " in log");
  o.require(min_value >= 0.0, "negative asymptotic-Fekete value " + fmt(min_value));
  o.require(strictly_decreasing(ks), "KS not decreasing " + list(ks));
  if (o.passed) o.note("min normalized value " + fmt(min_value) + ", KS " + list(ks));
  return o;
}

// 10 -----------------------------------------------------------------------------------
Outcome lagrange_sum() {
  Outcome o;
  double worst = -std::numeric_limits<double>::infinity();
  int runs = 0;
  for (int k = 1; k <= 20; ++k) {
    const int n = k + 1;
    const std::vector<WeightedSet> sets{
        lobatto_set(8 * n),
        lobatto_set(8 * n, Weight::quadratic(0.4)),
        WeightedSet(Support::circle(2.0), Weight::zero(), circle_grid(2.0, 4 * n)),
        WeightedSet(Support::disk(), Weight::log_abs_shift({1.5, 0.5}), disk_grid(1.0, 6, 4 * n)),
    };
    for (const auto& set : sets) {
      const auto r = fekete_search(set, k);
      if (!r.converged) {
        o.require(false, "exchange did not converge at k=" + std::to_string(k) + " on " + set.support().label() +
                             " after " + std::to_string(r.iterations) + " sweeps");
        continue;
      }
      ++runs;
      const auto e = lagrange_system(set, k, r.config).weighted_abs_values(set.grid());
      worst = std::max(worst, e.rowwise().sum().maxCoeff() - n);
    }
  }
  o.require(worst <= 1e-6, "sum exceeds N_k by " + fmt(worst));
  if (o.passed) o.note(std::to_string(runs) + " runs, max(sum - N_k) = " + fmt(worst));
  return o;
}

// 11 -----------------------------------------------------------------------------------
Outcome sphere() {
  Outcome o;
  cli::RunConfig c;
  c.domain = "sphere";
  c.degrees = {4, 8, 12};
  std::vector<double> disc;
  for (int k : c.degrees) {
    const auto s = cli::make_setup(c, k);
    disc.push_back(harmonic_discrepancy(build_configuration(s, cli::Method::GreedyExtremal).config.as_measure(), 4));
  }
  o.require(strictly_decreasing(disc), "harmonic discrepancy not decreasing " + list(disc));
  std::mt19937_64 rng(3);
  std::normal_distribution<double> g;
  double worst = 0.0;
  for (int k : {1, 2, 4, 8, 12}) {
    const auto q = sphere_product_grid(k + 1, 2 * k + 2);
    const DiscreteMeasure mu(q.points, q.weights);
    const WeightedSet set(Support::sphere(), Weight::zero(), q.points);
    const GramSystem gs(set, mu, k);
    std::vector<Point> probe;
    for (int i = 0; i < 200; ++i) {
      const double x = g(rng), y = g(rng), z = g(rng), r = std::sqrt(x * x + y * y + z * z);
      probe.push_back({x / r, y / r, z / r});
    }
    for (double v : rho_values(gs, probe)) worst = std::max(worst, std::abs(v - static_cast<double>(gs.dimension())));
  }
  o.require(worst <= 1e-6, "rho deviates from N_k by " + fmt(worst));
  if (o.passed) o.note("discrepancy " + list(disc) + ", rho error " + fmt(worst));
  return o;
}

// 12 -----------------------------------------------------------------------------------
Outcome bernstein_markov() {
  Outcome o;
  const std::vector<int> degrees{4, 8, 16};
  const auto grid = circle_grid(1.0, 128);
  const auto circ = bm_growth_diagnostic(WeightedSet(Support::circle(), Weight::zero(), grid),
                                         DiscreteMeasure::uniform(grid), degrees);
  o.require(std::abs(circ.exp_rate) <= 1e-12, "circle rate " + fmt(circ.exp_rate));
  const DiscreteMeasure mu = interval_uniform(200);
  const auto iv = bm_growth_diagnostic(lobatto_set(201), mu, degrees);
  double rel = 0.0;
  for (std::size_t i = 0; i < degrees.size(); ++i) {
    // Legendre endpoint sum: sum_j (2j + 1) = (k + 1)^2
    double endpoint = 0.0;
    for (int j = 0; j <= degrees[i]; ++j) endpoint += 2.0 * j + 1.0;
    rel = std::max(rel, std::abs(iv.sup_rho[i] / endpoint - 1.0));
  }
  o.require(rel <= 0.01, "interval sup rho relative error " + fmt(rel));
  // |x|^2 / 4 restricted to [-1, 1]
  const auto w = bm_growth_diagnostic(lobatto_set(201, Weight::quadratic(0.25)), mu, degrees);
  o.require(w.bm_flag, "weighted case not flagged, rate " + fmt(w.exp_rate));
  o.require(w.poly_exponent < 3.0, "weighted exponent " + fmt(w.poly_exponent));
  if (o.passed)
    o.note("circle rate " + fmt(circ.exp_rate) + ", interval error " + fmt(rel) + ", weighted exponent " +
           fmt(w.poly_exponent));
  return o;
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"exact identities", exact_identities},
      {"derivative checks", derivatives},
      {"convexity and concavity probes", convexity},
      {"circle exactness", circle_exactness},
      {"interval Fekete points", interval_fekete},
      {"transfinite diameter", transfinite_diameter},
      {"Bergman measures", bergman_measures},
      {"optimal measures", optimal_measures},
      {"recursively extremal configurations", recursive_extremal},
      {"Lagrange sums at Fekete points", lagrange_sum},
      {"sphere", sphere},
      {"Bernstein-Markov diagnostics", bernstein_markov},
  };
  int failures = 0;
  int index = 0;
  for (const auto& [name, fn] : criteria) {
    ++index;
    Outcome r;
    try {
      r = fn();
    } catch (const std::exception& e) {
      r.passed = false;
      r.detail = std::string("exception: ") + e.what();
    }
    if (!r.passed) ++failures;
    std::printf("%s %2d %s: %s\n", r.passed ? "PASS" : "FAIL", index, name.c_str(), r.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}

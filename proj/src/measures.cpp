#include "fekete/measures.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <limits>
#include <numbers>
#include <numeric>
#include <ostream>
#include <sstream>
#include <string>

namespace fekete {

namespace {

constexpr double kPi = std::numbers::pi;

double angle_of(const Point& p) {
  double t = std::atan2(p.y, p.x);
  if (t < 0.0) t += 2.0 * kPi;
  return t;
}

}  // namespace

// ReferenceLaw ------------------------------------------------------------------

ReferenceLaw ReferenceLaw::arcsine() { return {}; }

ReferenceLaw ReferenceLaw::uniform_circle(double r) {
  ReferenceLaw law;
  law.kind_ = Kind::UniformCircle;
  law.radius_ = r;
  law.axis_ = Weight::Axis::Angle;
  return law;
}

ReferenceLaw ReferenceLaw::uniform_sphere() {
  ReferenceLaw law;
  law.kind_ = Kind::UniformSphere;
  return law;
}

ReferenceLaw ReferenceLaw::oracle_table(DiscreteMeasure table, Weight::Axis axis) {
  ReferenceLaw law;
  law.kind_ = Kind::OracleTable;
  law.axis_ = axis;
  law.table_ = std::move(table);
  return law;
}

double ReferenceLaw::cdf(double t) const {
  switch (kind_) {
    case Kind::ArcsineInterval:
      return 0.5 + std::asin(std::clamp(t, -1.0, 1.0)) / kPi;
    case Kind::UniformCircle:
      return std::clamp(t / (2.0 * kPi), 0.0, 1.0);
    case Kind::UniformSphere:
      throw DomainError("the uniform sphere law has no one-dimensional CDF");
    case Kind::OracleTable: {
      double acc = 0.0;
      const auto& atoms = table_.atoms();
      for (std::size_t i = 0; i < atoms.size(); ++i) {
        const double s = axis_ == Weight::Axis::RealPart ? atoms[i].x : angle_of(atoms[i]);
        if (s <= t) acc += table_.masses()[i];
      }
      return std::min(acc, 1.0);
    }
  }
  return 0.0;
}

// Integration and discrepancies -------------------------------------------------

double integrate(const DiscreteMeasure& mu, const std::function<double(const Point&)>& f) {
  double acc = 0.0;
  for (std::size_t i = 0; i < mu.size(); ++i) {
    const double v = f(mu.atoms()[i]);
    if (!std::isfinite(v)) throw NumericalError("integrand is not finite on an atom");
    acc += mu.masses()[i] * v;
  }
  return acc;
}

double ks_distance(const DiscreteMeasure& mu, const ReferenceLaw& law) {
  if (!law.is_one_dimensional())
    throw DomainError("KS distance is unsupported for the sphere; use harmonic_discrepancy");
  const bool on_circle = law.axis() == Weight::Axis::Angle;
  auto param = [&](const Point& p) { return on_circle ? angle_of(p) : p.x; };

  struct Event {
    double t;
    double dm_mu;
    double dm_law;
  };
  std::vector<Event> events;
  events.reserve(mu.size() + law.table().size());
  for (std::size_t i = 0; i < mu.size(); ++i) events.push_back({param(mu.atoms()[i]), mu.masses()[i], 0.0});
  const bool discrete_law = law.kind() == ReferenceLaw::Kind::OracleTable;
  if (discrete_law)
    for (std::size_t i = 0; i < law.table().size(); ++i)
      events.push_back({param(law.table().atoms()[i]), 0.0, law.table().masses()[i]});
  std::sort(events.begin(), events.end(), [](const Event& a, const Event& b) { return a.t < b.t; });

  double f_mu = 0.0;
  double f_law = 0.0;
  double d_max = 0.0;
  double d_min = 0.0;
  auto record = [&](double d) {
    d_max = std::max(d_max, d);
    d_min = std::min(d_min, d);
  };
  for (std::size_t i = 0; i < events.size();) {
    const double t = events[i].t;
    const double law_left = discrete_law ? f_law : law.cdf(t);
    record(f_mu - law_left);
    double add_mu = 0.0;
    double add_law = 0.0;
    for (; i < events.size() && events[i].t == t; ++i) {
      add_mu += events[i].dm_mu;
      add_law += events[i].dm_law;
    }
    f_mu += add_mu;
    f_law = discrete_law ? f_law + add_law : law.cdf(t);
    record(f_mu - f_law);
  }
  return on_circle ? 0.5 * (d_max - d_min) : std::max(d_max, -d_min);
}

double harmonic_discrepancy(const DiscreteMeasure& mu, int max_degree) {
  if (max_degree < 1) return 0.0;
  const auto model = ModelSpace::sphere();
  VectorXc moments = VectorXc::Zero(model.dimension(max_degree));
  for (std::size_t i = 0; i < mu.size(); ++i) moments += mu.masses()[i] * basis_eval(model, max_degree, mu.atoms()[i]);
  // basis_eval carries sqrt(4 pi); drop it and the l = 0 moment
  return moments.tail(moments.size() - 1).norm() / std::sqrt(4.0 * kPi);
}

ReferenceLaw reference_equilibrium(const WeightedSet& set, int grid_size) {
  const bool unweighted = set.weight().is_constant();
  switch (set.support().kind) {
    case Support::Kind::Interval:
      if (unweighted) return ReferenceLaw::arcsine();
      return ReferenceLaw::oracle_table(equilibrium_oracle(set, grid_size).measure, Weight::Axis::RealPart);
    case Support::Kind::Circle:
      if (unweighted) return ReferenceLaw::uniform_circle(set.support().radius);
      return ReferenceLaw::oracle_table(equilibrium_oracle(set, grid_size).measure, Weight::Axis::Angle);
    case Support::Kind::Disk:
      if (unweighted) return ReferenceLaw::uniform_circle(set.support().radius);
      break;
    case Support::Kind::Sphere:
      if (unweighted) return ReferenceLaw::uniform_sphere();
      break;
    case Support::Kind::PointCloud:
      break;
  }
  throw DomainError("no equilibrium reference for this weighted set");
}

// Energy oracle -----------------------------------------------------------------

namespace {

/// Second antiderivative of log|x|, vanishing at 0.
double log_g(double x) {
  if (x == 0.0) return 0.0;
  return 0.5 * x * x * std::log(std::abs(x)) - 0.75 * x * x;
}

/// -(1/(|I||J|)) int_I int_J log|s - t| ds dt for I = [a, b], J = [c, d].
double cell_kernel(double a, double b, double c, double d) {
  const double integral = log_g(b - c) - log_g(a - c) - log_g(b - d) + log_g(a - d);
  return -integral / ((b - a) * (d - c));
}

void project_to_simplex(Eigen::VectorXd& v) {
  const Index n = v.size();
  std::vector<double> u(v.data(), v.data() + n);
  std::sort(u.begin(), u.end(), std::greater<>());
  double cumsum = 0.0;
  double theta = 0.0;
  for (Index i = 0; i < n; ++i) {
    cumsum += u[i];
    const double t = (cumsum - 1.0) / static_cast<double>(i + 1);
    if (u[i] - t > 0.0) theta = t;
  }
  v = (v.array() - theta).max(0.0);
  v /= v.sum();
}

struct EnergyProblem {
  Eigen::MatrixXd h;
  Eigen::VectorXd q;

  double energy(const Eigen::VectorXd& m) const { return m.dot(h * m) + 2.0 * q.dot(m); }
  Eigen::VectorXd gradient(const Eigen::VectorXd& m) const { return 2.0 * (h * m + q); }
};

}  // namespace

EquilibriumResult equilibrium_oracle(const WeightedSet& set, int grid_size, EquilibriumOptions opts) {
  if (set.model().kind != ModelKind::ComplexLine) throw DomainError("energy oracle needs the complex line model");
  const auto kind = set.support().kind;
  if (kind != Support::Kind::Interval && kind != Support::Kind::Circle)
    throw DomainError("energy oracle supports the interval and circles only");
  if (grid_size < 3) throw DomainError("energy oracle grid too small");

  const Index m = grid_size;
  std::vector<Point> nodes;
  EnergyProblem prob;
  prob.h.resize(m, m);
  if (kind == Support::Kind::Interval) {
    nodes = chebyshev_grid(grid_size);
    std::vector<double> edges(m + 1);
    for (Index i = 0; i <= m; ++i) edges[i] = -std::cos(kPi * static_cast<double>(i) / static_cast<double>(m));
    edges.front() = -1.0;
    edges.back() = 1.0;
    for (Index i = 0; i < m; ++i) {
      for (Index j = 0; j < m; ++j) {
        if (std::abs(i - j) <= 1)
          prob.h(i, j) = cell_kernel(edges[i], edges[i + 1], edges[j], edges[j + 1]);
        else
          prob.h(i, j) = -std::log(std::abs(nodes[i].x - nodes[j].x));
      }
    }
  } else {
    const double r = set.support().radius;
    nodes = circle_grid(r, grid_size);
    const double arc = 2.0 * kPi * r / static_cast<double>(m);
    const double self = cell_kernel(0.0, arc, 0.0, arc);
    const double adjacent = cell_kernel(0.0, arc, arc, 2.0 * arc);
    for (Index i = 0; i < m; ++i) {
      for (Index j = 0; j < m; ++j) {
        const Index sep = std::min(std::abs(i - j), m - std::abs(i - j));
        if (sep == 0)
          prob.h(i, j) = self;
        else if (sep == 1)
          prob.h(i, j) = adjacent;
        else
          prob.h(i, j) = -std::log(std::abs(nodes[i].as_complex() - nodes[j].as_complex()));
      }
    }
  }
  prob.q.resize(m);
  for (Index i = 0; i < m; ++i) prob.q[i] = set.weight()(nodes[i]);

  Eigen::VectorXd mass = Eigen::VectorXd::Constant(m, 1.0 / static_cast<double>(m));
  double energy = prob.energy(mass);
  EquilibriumResult result;
  result.energy_trace.push_back(energy);
  double step = 1.0 / (2.0 * prob.h.cwiseAbs().rowwise().sum().maxCoeff());
  double gap = 0.0;

  auto accept = [&](const Eigen::VectorXd& cand, double e) {
    mass = cand;
    energy = e;
    result.energy_trace.push_back(energy);
    ++result.iterations;
  };

  for (int iter = 0;; ++iter) {
    const Eigen::VectorXd g = prob.gradient(mass);
    gap = g.dot(mass) - g.minCoeff();
    if (gap <= opts.gap_tol) break;
    if (iter >= opts.max_iter)
      throw NumericalError("energy oracle did not reach the stationarity gap", gap);

    // Exact minimizer on the current face {m_i > 0, sum m = 1}.
    std::vector<Index> free;
    for (Index i = 0; i < m; ++i)
      if (mass[i] > 0.0) free.push_back(i);
    const Index nf = static_cast<Index>(free.size());
    Eigen::MatrixXd hff(nf, nf);
    Eigen::VectorXd qf(nf);
    for (Index a = 0; a < nf; ++a) {
      qf[a] = prob.q[free[a]];
      for (Index b = 0; b < nf; ++b) hff(a, b) = prob.h(free[a], free[b]);
    }
    const Eigen::PartialPivLU<Eigen::MatrixXd> lu(hff);
    const Eigen::VectorXd ones_sol = lu.solve(Eigen::VectorXd::Ones(nf));
    const Eigen::VectorXd q_sol = lu.solve(qf);
    const double half_lambda = (1.0 + q_sol.sum()) / ones_sol.sum();
    Eigen::VectorXd face_min = Eigen::VectorXd::Zero(m);
    for (Index a = 0; a < nf; ++a) face_min[free[a]] = half_lambda * ones_sol[a] - q_sol[a];
    const Eigen::VectorXd dir = face_min - mass;

    bool moved = false;
    if (dir.cwiseAbs().maxCoeff() > 1e-14 && face_min.allFinite()) {
      Eigen::VectorXd cand = face_min;
      project_to_simplex(cand);
      const double e = prob.energy(cand);
      if (e < energy) {
        accept(cand, e);
        moved = true;
      } else {
        double t_max = 1.0;
        for (Index i = 0; i < m; ++i)
          if (dir[i] < 0.0) t_max = std::min(t_max, -mass[i] / dir[i]);
        cand = mass + t_max * dir;
        for (Index i = 0; i < m; ++i)
          if (dir[i] < 0.0 && -mass[i] / dir[i] <= t_max * (1.0 + 1e-12)) cand[i] = 0.0;
        cand = cand.cwiseMax(0.0);
        cand /= cand.sum();
        const double eb = prob.energy(cand);
        if (eb < energy) {
          accept(cand, eb);
          moved = true;
        }
      }
    }
    if (moved) continue;

    // Projected-gradient step with Armijo backtracking releases new atoms.
    double alpha = 2.0 * step;
    for (int bt = 0; bt < 80; ++bt, alpha *= 0.5) {
      Eigen::VectorXd cand = mass - alpha * g;
      project_to_simplex(cand);
      const double e = prob.energy(cand);
      if (e <= energy + 1e-4 * g.dot(cand - mass) && e < energy) {
        step = alpha;
        accept(cand, e);
        moved = true;
        break;
      }
    }
    if (!moved) throw NumericalError("energy oracle stalled", gap);
  }

  result.gap = gap;
  result.energy = energy;
  std::vector<double> masses(mass.data(), mass.data() + m);
  const double total = std::accumulate(masses.begin(), masses.end(), 0.0);
  for (double& v : masses) v /= total;
  result.measure = DiscreteMeasure(std::move(nodes), std::move(masses));
  return result;
}

// CSV ---------------------------------------------------------------------------

namespace {

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

void write_measure_csv(std::ostream& os, const DiscreteMeasure& mu, ModelKind kind) {
  if (kind == ModelKind::ComplexLine)
    os << "index,x_re,x_im,mass\n";
  else
    os << "index,x,y,z,mass\n";
  for (std::size_t i = 0; i < mu.size(); ++i) {
    const Point& p = mu.atoms()[i];
    os << i << ',' << fmt17(p.x) << ',' << fmt17(p.y) << ',';
    if (kind == ModelKind::Sphere2) os << fmt17(p.z) << ',';
    os << fmt17(mu.masses()[i]) << '\n';
  }
}

DiscreteMeasure read_measure_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line)) throw DomainError("empty measure CSV");
  std::size_t columns = static_cast<std::size_t>(std::count(line.begin(), line.end(), ',')) + 1;
  const bool sphere = line.rfind("index,x,y,z,mass", 0) == 0;
  if (!sphere && line.rfind("index,x_re,x_im,mass", 0) != 0) throw DomainError("unrecognized measure CSV header");
  std::vector<Point> atoms;
  std::vector<double> masses;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::vector<double> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(std::stod(cell));
    if (cells.size() != columns) throw DomainError("malformed measure CSV row");
    if (sphere)
      atoms.push_back({cells[1], cells[2], cells[3]});
    else
      atoms.push_back({cells[1], cells[2], 0.0});
    masses.push_back(cells.back());
  }
  return {std::move(atoms), std::move(masses)};
}

}  // namespace fekete

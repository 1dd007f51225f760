#include "fekete/model_spaces.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace fekete {

namespace {

constexpr double kPi = std::numbers::pi;

double angle_of(const Point& p) {
  double t = std::atan2(p.y, p.x);
  if (t < 0.0) t += 2.0 * kPi;
  return t;
}

std::string format_number(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

}  // namespace

// Weight ----------------------------------------------------------------------

Weight Weight::zero() { return {}; }

Weight Weight::quadratic(double c) {
  Weight w;
  w.kind_ = Kind::Quadratic;
  w.c_ = c;
  return w;
}

Weight Weight::log_abs_shift(Complex a) {
  Weight w;
  w.kind_ = Kind::LogAbsShift;
  w.a_ = a;
  return w;
}

Weight Weight::tabulated(std::vector<double> nodes, std::vector<double> values, Axis axis) {
  if (nodes.size() != values.size() || nodes.empty())
    throw DomainError("tabulated weight needs matching, nonempty nodes and values");
  if (!std::is_sorted(nodes.begin(), nodes.end()) ||
      std::adjacent_find(nodes.begin(), nodes.end()) != nodes.end())
    throw DomainError("tabulated weight nodes must be strictly increasing");
  for (double v : values)
    if (!std::isfinite(v)) throw DomainError("tabulated weight values must be finite");
  Weight w;
  w.kind_ = Kind::Tabulated;
  w.nodes_ = std::move(nodes);
  w.values_ = std::move(values);
  w.axis_ = axis;
  return w;
}

Weight Weight::custom(std::function<double(const Point&)> fn, std::string label) {
  Weight w;
  w.kind_ = Kind::Custom;
  w.fn_ = std::move(fn);
  w.custom_label_ = std::move(label);
  return w;
}

double Weight::operator()(const Point& p) const {
  double v = 0.0;
  switch (kind_) {
    case Kind::Zero:
      break;
    case Kind::Quadratic:
      v = c_ * std::norm(p.as_complex());
      break;
    case Kind::LogAbsShift:
      v = std::log(std::abs(p.as_complex() - a_));
      break;
    case Kind::Tabulated: {
      const double t = axis_ == Axis::RealPart ? p.x : angle_of(p);
      if (t <= nodes_.front()) {
        v = values_.front();
      } else if (t >= nodes_.back()) {
        v = values_.back();
      } else {
        const auto hi = std::upper_bound(nodes_.begin(), nodes_.end(), t) - nodes_.begin();
        const auto lo = hi - 1;
        const double s = (t - nodes_[lo]) / (nodes_[hi] - nodes_[lo]);
        v = (1.0 - s) * values_[lo] + s * values_[hi];
      }
      break;
    }
    case Kind::Custom:
      v = fn_(p);
      break;
  }
  return v + offset_;
}

Weight Weight::shifted(double c) const {
  Weight w = *this;
  w.offset_ += c;
  return w;
}

std::string Weight::label() const {
  std::string base;
  switch (kind_) {
    case Kind::Zero:
      base = "zero";
      break;
    case Kind::Quadratic:
      base = "quad:" + format_number(c_);
      break;
    case Kind::LogAbsShift:
      base = "logshift:" + format_number(a_.real()) + "," + format_number(a_.imag());
      break;
    case Kind::Tabulated:
      base = "tabulated";
      break;
    case Kind::Custom:
      base = custom_label_;
      break;
  }
  if (offset_ != 0.0) base += "+" + format_number(offset_);
  return base;
}

// Support -----------------------------------------------------------------------

Support Support::interval() { return {Kind::Interval, 1.0, {}}; }

Support Support::circle(double r) {
  if (!(r > 0.0)) throw DomainError("circle radius must be positive");
  return {Kind::Circle, r, {}};
}

Support Support::disk(double r) {
  if (!(r > 0.0)) throw DomainError("disk radius must be positive");
  return {Kind::Disk, r, {}};
}

Support Support::sphere() { return {Kind::Sphere, 1.0, {}}; }

Support Support::point_cloud(std::vector<Point> points) {
  if (points.empty()) throw DomainError("empty point cloud");
  return {Kind::PointCloud, 1.0, std::move(points)};
}

ModelSpace Support::model() const {
  return kind == Kind::Sphere ? ModelSpace::sphere() : ModelSpace::complex_line();
}

bool Support::contains(const Point& p, double tol) const {
  switch (kind) {
    case Kind::Interval:
      return p.z == 0.0 && std::abs(p.y) <= tol && p.x >= -1.0 - tol && p.x <= 1.0 + tol;
    case Kind::Circle:
      return p.z == 0.0 && std::abs(std::abs(p.as_complex()) - radius) <= tol * std::max(1.0, radius);
    case Kind::Disk:
      return p.z == 0.0 && std::abs(p.as_complex()) <= radius * (1.0 + tol);
    case Kind::Sphere:
      return std::abs(p.norm() - 1.0) <= tol;
    case Kind::PointCloud:
      return std::any_of(cloud.begin(), cloud.end(), [&](const Point& q) {
        return std::abs(q.x - p.x) <= tol && std::abs(q.y - p.y) <= tol && std::abs(q.z - p.z) <= tol;
      });
  }
  return false;
}

std::string Support::label() const {
  switch (kind) {
    case Kind::Interval:
      return "interval";
    case Kind::Circle:
      return "circle:" + format_number(radius);
    case Kind::Disk:
      return "disk:" + format_number(radius);
    case Kind::Sphere:
      return "sphere";
    case Kind::PointCloud:
      return "cloud";
  }
  return {};
}

// WeightedSet ---------------------------------------------------------------------

WeightedSet::WeightedSet(Support support, Weight weight, std::vector<Point> grid)
    : model_(support.model()), support_(std::move(support)), weight_(std::move(weight)), grid_(std::move(grid)) {
  if (grid_.empty()) throw DomainError("candidate grid is empty");
  if (model_.kind == ModelKind::Sphere2 && !weight_.is_constant())
    throw DomainError("weighted sphere models are not supported");
  for (const Point& p : grid_) {
    if (!support_.contains(p)) throw DomainError("candidate grid point outside the support");
    if (!std::isfinite(weight_(p))) throw DomainError("weight is not finite on the candidate grid");
  }
}

WeightedSet WeightedSet::with_weight(Weight w) const { return {support_, std::move(w), grid_}; }

// Grids -------------------------------------------------------------------------

QuadratureRule gauss_legendre(int n) {
  if (n < 1) throw DomainError("Gauss-Legendre rule needs at least one node");
  QuadratureRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    // Newton from the Tricomi initial guess.
    double x = std::cos(kPi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0;
      double p1 = x;
      for (int j = 2; j <= n; ++j) {
        const double p2 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p0) / j;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    // recompute derivative at the converged node
    double p0 = 1.0;
    double p1 = x;
    for (int j = 2; j <= n; ++j) {
      const double p2 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p0) / j;
      p0 = p1;
      p1 = p2;
    }
    dp = n == 1 ? 1.0 : n * (x * p1 - p0) / (x * x - 1.0);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes[n - 1 - i] = x;
    rule.nodes[i] = -x;
    rule.weights[i] = w;
    rule.weights[n - 1 - i] = w;
  }
  if (n % 2 == 1) rule.nodes[n / 2] = 0.0;
  return rule;
}

std::vector<Point> chebyshev_grid(int m) {
  if (m < 1) throw DomainError("grid size must be positive");
  std::vector<Point> pts(m);
  for (int j = 0; j < m; ++j) pts[m - 1 - j] = Point::real(std::cos((2.0 * j + 1.0) * kPi / (2.0 * m)));
  return pts;
}

std::vector<Point> chebyshev_lobatto_grid(int m) {
  if (m < 2) throw DomainError("Lobatto grid needs at least two points");
  std::vector<Point> pts(m);
  for (int j = 0; j < m; ++j) {
    // symmetric evaluation so that +-x pairs and the midpoint are exact
    double v = std::sin(kPi * (2.0 * j - (m - 1.0)) / (2.0 * (m - 1.0)));
    if (2 * j == m - 1) v = 0.0;
    pts[j] = Point::real(v);
  }
  pts.front() = Point::real(-1.0);
  pts.back() = Point::real(1.0);
  return pts;
}

std::vector<Point> circle_grid(double r, int m) {
  if (m < 1) throw DomainError("grid size must be positive");
  std::vector<Point> pts(m);
  for (int j = 0; j < m; ++j) {
    const double t = 2.0 * kPi * j / m;
    pts[j] = {r * std::cos(t), r * std::sin(t), 0.0};
  }
  return pts;
}

std::vector<Point> disk_grid(double r, int rings, int per_ring) {
  if (rings < 1 || per_ring < 1) throw DomainError("disk grid needs rings and points per ring");
  std::vector<Point> pts{Point{}};
  for (int i = 1; i <= rings; ++i) {
    const auto ring = circle_grid(r * i / rings, per_ring);
    pts.insert(pts.end(), ring.begin(), ring.end());
  }
  return pts;
}

SphereGrid sphere_product_grid(int n_theta, int n_phi) {
  if (n_theta < 1 || n_phi < 1) throw DomainError("sphere grid sizes must be positive");
  const auto gl = gauss_legendre(n_theta);
  SphereGrid g;
  g.n_theta = n_theta;
  g.n_phi = n_phi;
  g.points.reserve(static_cast<std::size_t>(n_theta) * n_phi);
  for (int i = 0; i < n_theta; ++i) {
    const double ct = gl.nodes[i];
    const double st = std::sqrt(std::max(0.0, 1.0 - ct * ct));
    for (int j = 0; j < n_phi; ++j) {
      const double ph = 2.0 * kPi * j / n_phi;
      Point p{st * std::cos(ph), st * std::sin(ph), ct};
      const double nrm = p.norm();
      g.points.push_back({p.x / nrm, p.y / nrm, p.z / nrm});
      g.weights.push_back(gl.weights[i] / (2.0 * n_phi));
    }
  }
  return g;
}

std::vector<Point> default_grid(const Support& support, int k, int oversample) {
  if (oversample < 2) throw DomainError("oversample must be at least 2");
  if (k < 0) throw DomainError("degree must be nonnegative");
  switch (support.kind) {
    case Support::Kind::Interval:
      return chebyshev_grid(oversample * (k + 1));
    case Support::Kind::Circle:
      return circle_grid(support.radius, oversample * (2 * k + 1));
    case Support::Kind::Disk:
      return disk_grid(support.radius, oversample, oversample * (2 * k + 1));
    case Support::Kind::Sphere: {
      const int n_theta =
          static_cast<int>(std::ceil(std::sqrt(oversample / 2.0) * (k + 1) - 1e-9));
      return sphere_product_grid(n_theta, 2 * n_theta).points;
    }
    case Support::Kind::PointCloud:
      return support.cloud;
  }
  return {};
}

std::vector<Point> default_grid(const WeightedSet& set, int k, int oversample) {
  return default_grid(set.support(), k, oversample);
}

// Bases -------------------------------------------------------------------------

namespace {

/// sqrt(4 pi) times the real spherical harmonics, ordered by l then m = -l..l.
void real_harmonics(int k, const Point& v, VectorXc& out) {
  const double theta = std::acos(std::clamp(v.z, -1.0, 1.0));
  const double phi = std::atan2(v.y, v.x);
  const double scale = std::sqrt(4.0 * kPi);
  Index idx = 0;
  for (int l = 0; l <= k; ++l) {
    for (int m = -l; m <= l; ++m) {
      const unsigned am = static_cast<unsigned>(std::abs(m));
      const double sign = (am % 2 == 0) ? 1.0 : -1.0;  // drop Condon-Shortley phase
      const double p = sign * std::sph_legendre(static_cast<unsigned>(l), am, theta);
      double y;
      if (m == 0)
        y = p;
      else if (m > 0)
        y = std::numbers::sqrt2 * p * std::cos(m * phi);
      else
        y = std::numbers::sqrt2 * p * std::sin(static_cast<double>(am) * phi);
      out[idx++] = scale * y;
    }
  }
}

void check_sphere_point(const Point& x) {
  if (std::abs(x.norm() - 1.0) > 1e-12) throw DomainError("sphere point is not a unit vector");
}

}  // namespace

VectorXc basis_eval(const ModelSpace& model, int k, const Point& x) {
  const Index n = model.dimension(k);
  VectorXc out(n);
  if (model.kind == ModelKind::Sphere2) {
    check_sphere_point(x);
    real_harmonics(k, x, out);
    return out;
  }
  const Complex z = x.as_complex();
  Complex p = 1.0;
  for (Index j = 0; j < n; ++j) {
    out[j] = p;
    p *= z;
  }
  return out;
}

SectionBasis::SectionBasis(const Support& support, int k) : model_(support.model()), k_(k), n_(model_.dimension(k)) {
  switch (support.kind) {
    case Support::Kind::Interval:
      family_ = Family::Chebyshev;
      for (int j = 1; j <= k; ++j) log_abs_det_change_ += 0.5 * std::log(2.0) + (j - 1) * std::log(2.0);
      break;
    case Support::Kind::Circle:
    case Support::Kind::Disk:
      family_ = Family::ScaledMonomial;
      scale_ = support.radius;
      break;
    case Support::Kind::PointCloud: {
      family_ = Family::ScaledMonomial;
      double r = 0.0;
      for (const Point& p : support.cloud) r = std::max(r, std::abs(p.as_complex()));
      scale_ = r > 0.0 ? r : 1.0;
      break;
    }
    case Support::Kind::Sphere:
      family_ = Family::Harmonic;
      break;
  }
  if (family_ == Family::ScaledMonomial)
    log_abs_det_change_ = -0.5 * k * (k + 1.0) * std::log(scale_);
}

VectorXc SectionBasis::eval(const Point& x) const {
  VectorXc out(n_);
  switch (family_) {
    case Family::Harmonic:
      check_sphere_point(x);
      real_harmonics(k_, x, out);
      break;
    case Family::ScaledMonomial: {
      const Complex z = x.as_complex() / scale_;
      Complex p = 1.0;
      for (Index j = 0; j < n_; ++j) {
        out[j] = p;
        p *= z;
      }
      break;
    }
    case Family::Chebyshev: {
      const Complex z = x.as_complex();
      Complex t0 = 1.0;
      Complex t1 = z;
      out[0] = 1.0;
      for (Index j = 1; j < n_; ++j) {
        out[j] = std::numbers::sqrt2 * t1;
        const Complex t2 = 2.0 * z * t1 - t0;
        t0 = t1;
        t1 = t2;
      }
      break;
    }
  }
  return out;
}

MatrixXc SectionBasis::eval_rows(std::span<const Point> points) const {
  MatrixXc rows(static_cast<Index>(points.size()), n_);
  for (std::size_t r = 0; r < points.size(); ++r) rows.row(static_cast<Index>(r)) = eval(points[r]).transpose();
  return rows;
}

MatrixXc SectionBasis::change_matrix() const {
  MatrixXc a = MatrixXc::Zero(n_, n_);
  switch (family_) {
    case Family::Harmonic:
      a.setIdentity();
      break;
    case Family::ScaledMonomial:
      for (Index j = 0; j < n_; ++j) a(j, j) = std::pow(scale_, -static_cast<double>(j));
      break;
    case Family::Chebyshev: {
      // monomial coefficients of T_j, then scale rows j >= 1 by sqrt(2)
      Eigen::MatrixXd t = Eigen::MatrixXd::Zero(n_, n_);
      t(0, 0) = 1.0;
      if (n_ > 1) t(1, 1) = 1.0;
      for (Index j = 2; j < n_; ++j) {
        for (Index c = 1; c < n_; ++c) t(j, c) = 2.0 * t(j - 1, c - 1);
        t.row(j) -= t.row(j - 2);
      }
      for (Index j = 1; j < n_; ++j) t.row(j) *= std::numbers::sqrt2;
      a = t.cast<Complex>();
      break;
    }
  }
  return a;
}

MatrixXc weighted_rows(const SectionBasis& basis, const Weight& weight, int k, std::span<const Point> points) {
  MatrixXc rows = basis.eval_rows(points);
  for (std::size_t r = 0; r < points.size(); ++r)
    rows.row(static_cast<Index>(r)) *= std::exp(-k * weight(points[r]));
  return rows;
}

ConditionedRows::ConditionedRows(const SectionBasis& basis, const Weight& weight, int k,
                                 std::span<const Point> reference)
    : basis_(basis), weight_(weight), k_(k) {
  const Index n = basis.size();
  if (static_cast<Index>(reference.size()) < n) throw DomainError("reference set smaller than N_k");
  const Eigen::HouseholderQR<MatrixXc> qr(weighted_rows(basis, weight, k, reference));
  r_ = qr.matrixQR().topRows(n).triangularView<Eigen::Upper>();
  for (Index j = 0; j < n; ++j) {
    const double d = std::abs(r_(j, j));
    if (!(d > 0.0)) throw NumericalError("reference set is degenerate for this degree");
    log_abs_det_r_ += std::log(d);
  }
  q_ = qr.householderQ() * MatrixXc::Identity(static_cast<Index>(reference.size()), n);
}

MatrixXc ConditionedRows::rows(std::span<const Point> points) const {
  const MatrixXc w = weighted_rows(basis_, weight_, k_, points);
  // w R^{-1} = (R^{-T} w^T)^T
  return r_.transpose().triangularView<Eigen::Lower>().solve(w.transpose()).transpose();
}

ReferencePair reference_pair(const ModelSpace& model, int k) {
  if (model.kind == ModelKind::ComplexLine) {
    auto grid = default_grid(Support::circle(1.0), k, 2);
    auto measure = DiscreteMeasure::uniform(grid);
    return {WeightedSet(Support::circle(1.0), Weight::zero(), std::move(grid)), std::move(measure)};
  }
  const int n_theta = k + 1;
  auto g = sphere_product_grid(n_theta, 2 * n_theta);
  DiscreteMeasure measure(g.points, g.weights);
  return {WeightedSet(Support::sphere(), Weight::zero(), std::move(g.points)), std::move(measure)};
}

}  // namespace fekete

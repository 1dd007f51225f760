#include "fekete/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "fekete/bergman.hpp"
#include "fekete/gram.hpp"
#include "fekete/measures.hpp"
#include "fekete/selftest.hpp"

namespace fekete::cli {

namespace {

std::string g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

double parse_double(const std::string& s, const std::string& what) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    throw UsageError("bad number in " + what + ": '" + s + "'");
  }
  if (used != s.size() || !std::isfinite(v)) throw UsageError("bad number in " + what + ": '" + s + "'");
  return v;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep)) out.push_back(cur);
  if (!s.empty() && s.back() == sep) out.emplace_back();
  return out;
}

}  // namespace

// Parsing ------------------------------------------------------------------------

std::string to_string(const Metric& m) {
  switch (m.kind) {
    case MetricKind::KS:
      return "ks";
    case MetricKind::HarmonicDiscrepancy:
      return "harmonic";
    case MetricKind::KDiameter:
      return "k-diameter";
    case MetricKind::LFunctional:
      return "l-functional";
    case MetricKind::SupRho:
      return "sup-rho";
    case MetricKind::LebesgueConstant:
      return "lebesgue";
    case MetricKind::Distortion:
      return "distortion:" + fekete::to_string(m.pair);
  }
  return {};
}

Metric parse_metric(const std::string& text) {
  if (text.rfind("distortion:", 0) == 0) {
    try {
      return {MetricKind::Distortion, parse_distortion_pair(text.substr(11))};
    } catch (const DomainError& e) {
      throw UsageError(e.what());
    }
  }
  for (auto k : {MetricKind::KS, MetricKind::HarmonicDiscrepancy, MetricKind::KDiameter, MetricKind::LFunctional,
                 MetricKind::SupRho, MetricKind::LebesgueConstant})
    if (to_string(Metric{k}) == text) return {k};
  throw UsageError("unknown metric: " + text);
}

std::string to_string(Method m) {
  switch (m) {
    case Method::Fekete:
      return "fekete";
    case Method::Leja:
      return "leja";
    case Method::GreedyExtremal:
      return "greedy-extremal";
  }
  return {};
}

Method parse_method(const std::string& text) {
  for (auto m : {Method::Fekete, Method::Leja, Method::GreedyExtremal})
    if (to_string(m) == text) return m;
  throw UsageError("unknown method: " + text);
}

Support parse_domain(const std::string& text) {
  if (text == "interval") return Support::interval();
  if (text == "sphere") return Support::sphere();
  const auto colon = text.find(':');
  const std::string head = text.substr(0, colon);
  if ((head == "circle" || head == "disk")) {
    const double r = colon == std::string::npos ? 1.0 : parse_double(text.substr(colon + 1), "--domain");
    if (!(r > 0.0)) throw UsageError("domain radius must be positive");
    return head == "circle" ? Support::circle(r) : Support::disk(r);
  }
  throw UsageError("unknown domain: " + text);
}

Weight parse_weight(const std::string& text) {
  if (text == "zero") return Weight::zero();
  if (text.rfind("quad:", 0) == 0) return Weight::quadratic(parse_double(text.substr(5), "--weight"));
  if (text.rfind("logshift:", 0) == 0) {
    const auto parts = split(text.substr(9), ',');
    if (parts.size() != 2) throw UsageError("logshift weight needs RE,IM");
    return Weight::log_abs_shift({parse_double(parts[0], "--weight"), parse_double(parts[1], "--weight")});
  }
  throw UsageError("unknown weight: " + text);
}

std::vector<int> parse_degrees(const std::string& text) {
  std::vector<int> out;
  for (const auto& part : split(text, ',')) {
    std::size_t used = 0;
    int v = 0;
    try {
      v = std::stoi(part, &used);
    } catch (const std::exception&) {
      throw UsageError("bad degree: '" + part + "'");
    }
    if (used != part.size()) throw UsageError("bad degree: '" + part + "'");
    out.push_back(v);
  }
  if (out.empty()) throw UsageError("no degrees given");
  return out;
}

// RunConfig -----------------------------------------------------------------------

void RunConfig::validate() const {
  if (degrees.empty()) throw UsageError("no degrees given");
  for (std::size_t i = 0; i < degrees.size(); ++i) {
    if (degrees[i] < 1) throw UsageError("degrees must be >= 1");
    if (i > 0 && degrees[i] <= degrees[i - 1]) throw UsageError("degrees must be strictly increasing");
  }
  if (grid_oversample != 0 && grid_oversample < 2) throw UsageError("oversample must be >= 2");
  if (harmonic_degree < 1) throw UsageError("harmonic degree must be >= 1");
  const Support s = parse_domain(domain);
  const Weight w = parse_weight(weight);
  if (s.kind == Support::Kind::Sphere && !w.is_constant()) throw UsageError("the sphere only takes the zero weight");
  if (measure != "uniform" && measure != "arcsine") throw UsageError("unknown measure: " + measure);
  if (measure == "arcsine" && s.kind != Support::Kind::Interval) throw UsageError("arcsine measure is interval-only");
  for (const auto& m : metrics) {
    if (m.kind == MetricKind::KS && s.kind == Support::Kind::Sphere) throw UsageError("ks does not apply to the sphere");
    if (m.kind == MetricKind::HarmonicDiscrepancy && s.kind != Support::Kind::Sphere)
      throw UsageError("harmonic discrepancy applies to the sphere only");
  }
}

int RunConfig::oversample_for(int k) const {
  if (grid_oversample != 0) return grid_oversample;
  return k <= 20 ? 8 : 4;
}

Json to_json(const RunConfig& c) {
  Json j;
  j["domain"] = c.domain;
  j["weight"] = c.weight;
  j["degrees"] = c.degrees;
  j["method"] = to_string(c.method);
  j["grid_oversample"] = c.grid_oversample;
  Json metrics = Json::array();
  for (const auto& m : c.metrics) metrics.push_back(to_string(m));
  j["metrics"] = metrics;
  j["output_dir"] = c.output_dir;
  j["measure"] = c.measure;
  j["pair"] = fekete::to_string(c.pair);
  j["harmonic_degree"] = c.harmonic_degree;
  return j;
}

RunConfig run_config_from_json(const Json& j) {
  if (!j.is_object()) throw UsageError("RunConfig must be a JSON object");
  RunConfig c;
  try {
    for (const auto& [key, v] : j.items()) {
      if (key == "domain") c.domain = v.get<std::string>();
      else if (key == "weight") c.weight = v.get<std::string>();
      else if (key == "degrees") c.degrees = v.get<std::vector<int>>();
      else if (key == "method") c.method = parse_method(v.get<std::string>());
      else if (key == "grid_oversample") c.grid_oversample = v.get<int>();
      else if (key == "metrics") {
        c.metrics.clear();
        for (const auto& m : v) c.metrics.push_back(parse_metric(m.get<std::string>()));
      } else if (key == "output_dir") c.output_dir = v.get<std::string>();
      else if (key == "measure") c.measure = v.get<std::string>();
      else if (key == "pair") c.pair = parse_distortion_pair(v.get<std::string>());
      else if (key == "harmonic_degree") c.harmonic_degree = v.get<int>();
      else throw UsageError("unknown RunConfig key: " + key);
    }
  } catch (const nlohmann::json::exception& e) {
    throw UsageError(std::string("malformed RunConfig: ") + e.what());
  } catch (const DomainError& e) {
    throw UsageError(e.what());
  }
  return c;
}

// Experiment setup ---------------------------------------------------------------------

namespace {

std::vector<Point> experiment_grid(const Support& s, int k, int oversample) {
  switch (s.kind) {
    case Support::Kind::Interval: {
      // extrema grid of odd size: contains -1, 0 and 1
      int m = oversample * (k + 1);
      if (m % 2 == 0) ++m;
      return chebyshev_lobatto_grid(m);
    }
    case Support::Kind::Circle:
      // multiple of N, so equispaced N-tuples are on the grid
      return circle_grid(s.radius, oversample * (k + 1));
    default:
      return default_grid(s, k, oversample);
  }
}

DiscreteMeasure experiment_measure(const Support& s, const std::string& kind, int k, int oversample,
                                   const std::vector<Point>& grid) {
  const int m = oversample * (k + 1);
  switch (s.kind) {
    case Support::Kind::Interval: {
      std::vector<Point> atoms;
      std::vector<double> masses;
      if (kind == "arcsine") {
        atoms = chebyshev_grid(m);
        masses.assign(atoms.size(), 1.0 / m);
      } else {
        const auto gl = gauss_legendre(m);
        for (int i = 0; i < m; ++i) {
          atoms.push_back(Point::real(gl.nodes[i]));
          masses.push_back(gl.weights[i] / 2.0);
        }
      }
      return {std::move(atoms), std::move(masses)};
    }
    case Support::Kind::Circle:
      return DiscreteMeasure::uniform(grid);
    case Support::Kind::Disk: {
      // area measure: trapezoid rule in the radius over the rings of the grid
      std::vector<Point> atoms;
      std::vector<double> masses;
      double total = 0.0;
      for (const auto& p : grid) {
        const double r = p.norm();
        if (r == 0.0) continue;
        const double w = std::abs(r - s.radius) < 1e-12 ? 0.5 * r : r;
        atoms.push_back(p);
        masses.push_back(w);
        total += w;
      }
      for (double& w : masses) w /= total;
      return {std::move(atoms), std::move(masses)};
    }
    case Support::Kind::Sphere: {
      const auto sg = sphere_product_grid(k + 1, 2 * k + 2);
      return {sg.points, sg.weights};
    }
    case Support::Kind::PointCloud:
      break;
  }
  return DiscreteMeasure::uniform(grid);
}

}  // namespace

DegreeSetup make_setup(const RunConfig& c, int k) {
  const Support s = parse_domain(c.domain);
  const int o = c.oversample_for(k);
  auto grid = experiment_grid(s, k, o);
  auto mu = experiment_measure(s, c.measure, k, o, grid);
  return {k, WeightedSet(s, parse_weight(c.weight), std::move(grid)), std::move(mu)};
}

FeketeResult build_configuration(const DegreeSetup& s, Method method) {
  switch (method) {
    case Method::Fekete:
      return fekete_search(s.set, s.k);
    case Method::Leja:
      return evaluate_configuration(s.set, s.k, leja_sequence(s.set, s.k), ConfigMethod::Leja);
    case Method::GreedyExtremal:
      return evaluate_configuration(s.set, s.k, recursively_extremal(s.set, s.measure, s.k).configuration(),
                                    ConfigMethod::RecursiveExtremal);
  }
  throw UsageError("unknown method");
}

// Report -------------------------------------------------------------------------------

namespace {

std::vector<Metric> effective_metrics(const RunConfig& c) {
  if (!c.metrics.empty()) return c.metrics;
  const bool sphere = parse_domain(c.domain).kind == Support::Kind::Sphere;
  return {{sphere ? MetricKind::HarmonicDiscrepancy : MetricKind::KS},
          {MetricKind::KDiameter},
          {MetricKind::LFunctional},
          {MetricKind::SupRho},
          {MetricKind::LebesgueConstant},
          {MetricKind::Distortion, c.pair}};
}

/// Equilibrium law for distance metrics; empty when none is available.
std::optional<ReferenceLaw> distance_law(const WeightedSet& set) {
  try {
    return reference_equilibrium(set);
  } catch (const DomainError&) {
    return std::nullopt;
  }
}

double least_squares_slope(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) mx += x[i] / n, my += y[i] / n;
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
  }
  return sxx > 0.0 ? sxy / sxx : 0.0;
}

}  // namespace

ConvergenceReport build_report(const RunConfig& c) {
  c.validate();
  ConvergenceReport rep;
  rep.config = c;
  const auto metrics = effective_metrics(c);
  std::optional<ReferenceLaw> law;
  bool law_ready = false;

  for (int k : c.degrees) {
    const DegreeSetup s = make_setup(c, k);
    if (!law_ready) {
      if (s.set.model().kind != ModelKind::Sphere2) law = distance_law(s.set);
      law_ready = true;
    }
    const FeketeResult fr = build_configuration(s, c.method);
    const Index n = s.set.model().dimension(k);
    DegreeRecord rec{k, n, {}};
    auto put = [&](const std::string& key, double v) {
      if (std::isfinite(v)) rec.values.emplace_back(key, v);
    };
    put("log_abs_det_weighted", fr.log_abs_det_weighted);

    const GramSystem gs_mu(s.set, s.measure, k);
    std::optional<DiscreteMeasure> beta;
    auto bergman = [&]() -> const DiscreteMeasure& {
      if (!beta) beta = bergman_measure(gs_mu);
      return *beta;
    };

    for (const auto& m : metrics) {
      switch (m.kind) {
        case MetricKind::KS:
          if (law) {
            put("ks_config", ks_distance(fr.config.as_measure(), *law));
            put("ks_beta", ks_distance(bergman(), *law));
          }
          break;
        case MetricKind::HarmonicDiscrepancy:
          put("harmonic_config", harmonic_discrepancy(fr.config.as_measure(), c.harmonic_degree));
          put("harmonic_beta", harmonic_discrepancy(bergman(), c.harmonic_degree));
          break;
        case MetricKind::KDiameter:
          put("k_diameter", k_diameter(s.set, k, fr));
          break;
        case MetricKind::LFunctional: {
          const ReferencePair ref = reference_pair(s.set.model(), k);
          const GramSystem gref(ref.set, ref.measure, k);
          put("l_functional_measure", l_functional(gs_mu, gref));
          const GramSystem gp(s.set, fr.config.as_measure(), k);
          put("l_functional_config", l_functional(gp, gref));
          break;
        }
        case MetricKind::SupRho:
          put("sup_rho", bergman_field(gs_mu, s.set.grid()).sup_rho);
          break;
        case MetricKind::LebesgueConstant:
          put("lebesgue_constant", lebesgue_constant(s.set, k, fr.config));
          break;
        case MetricKind::Distortion:
          put("distortion_" + fekete::to_string(m.pair), distortion(s.set, k, s.measure, fr.config, m.pair));
          break;
      }
    }
    rep.records.push_back(std::move(rec));
  }

  // trends over every metric present at all degrees
  if (!rep.records.empty()) {
    for (const auto& [key, first] : rep.records.front().values) {
      std::vector<double> xs, ys;
      for (const auto& r : rep.records) {
        auto it = std::find_if(r.values.begin(), r.values.end(), [&](const auto& kv) { return kv.first == key; });
        if (it == r.values.end()) break;
        xs.push_back(r.k);
        ys.push_back(it->second);
      }
      if (xs.size() != rep.records.size()) continue;
      rep.trends.push_back({key, ys.front(), ys.back(), least_squares_slope(xs, ys)});
    }
  }
  auto trend = [&](const std::string& key) -> const TrendSummary* {
    for (const auto& t : rep.trends)
      if (t.metric == key) return &t;
    return nullptr;
  };
  if (rep.records.size() >= 2) {
    for (const char* key : {"ks_config", "ks_beta", "harmonic_config", "harmonic_beta"}) {
      if (const auto* t = trend(key))
        rep.checks.push_back({std::string(key) + "_decreasing", t->final - t->first, 0.0, t->final < t->first});
    }
  }
  // L(delta_P) - D_k = log N / (2k) exactly; the gap is the distance to the equilibrium energy proxy
  if (const auto* l = trend("l_functional_config"); l && trend("k_diameter")) {
    const auto& last = rep.records.back();
    const double gap = l->final - trend("k_diameter")->final;
    const double expected = std::log(static_cast<double>(last.n)) / (2.0 * last.k);
    rep.checks.push_back({"l_functional_minus_k_diameter", gap, expected, std::abs(gap - expected) <= 1e-9});
  }
  return rep;
}

Json to_json(const ConvergenceReport& r) {
  Json j;
  j["config"] = to_json(r.config);
  Json recs = Json::array();
  for (const auto& rec : r.records) {
    Json e;
    e["k"] = rec.k;
    e["N"] = rec.n;
    Json vals = Json::object();
    for (const auto& [key, v] : rec.values) vals[key] = v;
    e["metrics"] = vals;
    recs.push_back(e);
  }
  j["records"] = recs;
  Json trends = Json::array();
  for (const auto& t : r.trends) trends.push_back({{"metric", t.metric}, {"first", t.first}, {"final", t.final}, {"slope", t.slope}});
  Json checks = Json::array();
  for (const auto& c : r.checks)
    checks.push_back({{"name", c.name}, {"value", c.value}, {"threshold", c.threshold}, {"passed", c.passed}});
  j["summary"] = {{"trends", trends}, {"checks", checks}};
  return j;
}

ConvergenceReport report_from_json(const Json& j) {
  ConvergenceReport r;
  try {
    r.config = run_config_from_json(j.at("config"));
    for (const auto& e : j.at("records")) {
      DegreeRecord rec{e.at("k").get<int>(), e.at("N").get<Index>(), {}};
      for (const auto& [key, v] : e.at("metrics").items()) rec.values.emplace_back(key, v.get<double>());
      r.records.push_back(std::move(rec));
    }
    for (const auto& t : j.at("summary").at("trends"))
      r.trends.push_back({t.at("metric").get<std::string>(), t.at("first").get<double>(), t.at("final").get<double>(),
                          t.at("slope").get<double>()});
    for (const auto& c : j.at("summary").at("checks"))
      r.checks.push_back({c.at("name").get<std::string>(), c.at("value").get<double>(),
                          c.at("threshold").get<double>(), c.at("passed").get<bool>()});
  } catch (const nlohmann::json::exception& e) {
    throw UsageError(std::string("malformed report: ") + e.what());
  }
  return r;
}

// Commands -------------------------------------------------------------------------

namespace {

std::string out_path(const RunConfig& c, const std::string& name) {
  return (std::filesystem::path(c.output_dir) / name).string();
}

std::ofstream open_out(const std::string& path) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot open " + path + " for writing");
  return f;
}

int cmd_points(const RunConfig& c, std::ostream& out) {
  std::optional<ReferenceLaw> law;
  bool law_ready = false;
  const bool sphere = parse_domain(c.domain).kind == Support::Kind::Sphere;
  auto summary = open_out(out_path(c, "points_summary.csv"));
  const std::string dist = sphere ? "harmonic" : "ks";
  summary << "k,N,log_abs_det_weighted,k_diameter," << dist << '\n';
  for (int k : c.degrees) {
    const DegreeSetup s = make_setup(c, k);
    if (!law_ready && !sphere) law = distance_law(s.set);
    law_ready = true;
    const FeketeResult fr = build_configuration(s, c.method);
    const double dk = k_diameter(s.set, k, fr);
    const std::string stem = "points_k" + std::to_string(k);
    {
      auto f = open_out(out_path(c, stem + ".csv"));
      write_configuration_csv(f, fr.config, s.set.model().kind);
    }
    write_json_file(out_path(c, stem + ".json"), fekete_sidecar(fr, dk));
    double d = std::numeric_limits<double>::quiet_NaN();
    if (sphere) d = harmonic_discrepancy(fr.config.as_measure(), c.harmonic_degree);
    else if (law) d = ks_distance(fr.config.as_measure(), *law);
    const std::string row = std::to_string(k) + ',' + std::to_string(fr.config.size()) + ',' +
                            g17(fr.log_abs_det_weighted) + ',' + g17(dk) + ',' + (std::isfinite(d) ? g17(d) : "");
    summary << row << '\n';
    out << stem << ".csv " << row << '\n';
  }
  return kOk;
}

int cmd_bergman(const RunConfig& c, std::ostream& out) {
  GrowthDiagnostic diag;
  for (int k : c.degrees) {
    const DegreeSetup s = make_setup(c, k);
    const GramSystem gs(s.set, s.measure, k);
    const BergmanField field = bergman_field(gs, s.set.grid());
    const std::string suffix = "_k" + std::to_string(k) + ".csv";
    {
      auto f = open_out(out_path(c, "bergman" + suffix));
      write_bergman_csv(f, field, s.set.model().kind);
    }
    {
      auto f = open_out(out_path(c, "beta" + suffix));
      write_measure_csv(f, bergman_measure(gs), s.set.model().kind);
    }
    diag.degrees.push_back(k);
    diag.sup_rho.push_back(field.sup_rho);
    out << "bergman" << suffix << " sup_rho=" << g17(field.sup_rho) << '\n';
  }
  Json j = growth_json(diag);
  if (diag.degrees.size() >= 3) {
    const auto fit = fit_growth(parse_domain(c.domain).model(), diag.degrees, diag.sup_rho);
    j["poly_exponent"] = fit.poly_exponent;
    j["exp_rate"] = fit.exp_rate;
    j["bm_flag"] = fit.exp_rate <= kBernsteinMarkovRate;
  } else {
    j["poly_exponent"] = nullptr;
    j["exp_rate"] = nullptr;
    j["bm_flag"] = nullptr;
  }
  write_json_file(out_path(c, "bergman_diagnostic.json"), j);
  return kOk;
}

int cmd_optimal(const RunConfig& c, std::ostream& out) {
  for (int k : c.degrees) {
    const DegreeSetup s = make_setup(c, k);
    const auto res = optimal_measure_fixed_point(s.set, k);
    const std::string stem = "optimal_k" + std::to_string(k);
    {
      auto f = open_out(out_path(c, stem + ".csv"));
      write_measure_csv(f, res.measure, s.set.model().kind);
    }
    write_json_file(out_path(c, stem + ".json"), optimal_measure_sidecar(res, k, s.set.model().dimension(k)));
    out << stem << ".csv sup_rho=" << g17(res.sup_rho) << " iterations=" << res.iterations
        << " converged=" << (res.converged ? "true" : "false") << '\n';
  }
  return kOk;
}

int cmd_lfunc(const RunConfig& c, std::ostream& out) {
  Json recs = Json::array();
  for (int k : c.degrees) {
    const DegreeSetup s = make_setup(c, k);
    const ReferencePair ref = reference_pair(s.set.model(), k);
    const GramSystem gs(s.set, s.measure, k);
    const double l = l_functional(gs, GramSystem(ref.set, ref.measure, k));
    recs.push_back({{"k", k}, {"N", gs.dimension()}, {"logdet", gs.logdet()}, {"l_functional", l}});
    out << "k=" << k << " l_functional=" << g17(l) << '\n';
  }
  write_json_file(out_path(c, "lfunc.json"), Json{{"measure", c.measure}, {"records", recs}});
  return kOk;
}

int cmd_distortion(const RunConfig& c, std::ostream& out) {
  Json j;
  j["pair"] = fekete::to_string(c.pair);
  std::vector<int> degrees;
  std::vector<double> values;
  for (int k : c.degrees) {
    const DegreeSetup s = make_setup(c, k);
    const FeketeResult fr = build_configuration(s, c.method);
    degrees.push_back(k);
    values.push_back(distortion(s.set, k, s.measure, fr.config, c.pair));
    out << "k=" << k << ' ' << fekete::to_string(c.pair) << '=' << g17(values.back()) << '\n';
  }
  j["degrees"] = degrees;
  j["values"] = values;
  if (degrees.size() >= 3) {
    const auto fit = fit_growth(parse_domain(c.domain).model(), degrees, values);
    j["poly_exponent"] = fit.poly_exponent;
    j["exp_rate"] = fit.exp_rate;
    j["subexponential"] = fit.exp_rate <= kBernsteinMarkovRate;
  } else {
    j["poly_exponent"] = nullptr;
    j["exp_rate"] = nullptr;
    j["subexponential"] = nullptr;
  }
  write_json_file(out_path(c, "distortion.json"), j);
  return kOk;
}

int cmd_report(const RunConfig& c, std::ostream& out) {
  const ConvergenceReport rep = build_report(c);
  write_json_file(out_path(c, "report.json"), to_json(rep));
  for (const auto& chk : rep.checks)
    out << chk.name << ' ' << g17(chk.value) << ' ' << (chk.passed ? "pass" : "fail") << '\n';
  return kOk;
}

int cmd_selftest(bool inject_fault, std::ostream& out) {
  const auto rows = run_selftest({inject_fault});
  bool ok = true;
  for (const auto& r : rows) {
    out << std::left << std::setw(36) << r.name << ' ' << std::setw(24) << g17(r.error) << " tol=" << std::setw(8)
        << r.tolerance << ' ' << (r.passed ? "PASS" : "FAIL") << '\n';
    ok = ok && r.passed;
  }
  out << (ok ? "all identities pass" : "identity failures") << '\n';
  return ok ? kOk : kSelftestFailed;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Weighted Fekete points, Bergman measures and optimal designs"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all");

  struct Flags {
    std::string domain, weight, degrees, method, out, config, measure, pair, metrics;
    int oversample = 0;
    int harmonic_degree = 0;
  } f;

  std::vector<CLI::App*> experiment_cmds;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--domain", f.domain, "interval | circle:R | disk:R | sphere");
    sub->add_option("--weight", f.weight, "zero | quad:C | logshift:RE,IM");
    sub->add_option("--degrees", f.degrees, "comma-separated, strictly increasing");
    sub->add_option("--method", f.method, "fekete | leja | greedy-extremal");
    sub->add_option("--oversample", f.oversample, "candidate grid oversampling (>= 2)");
    sub->add_option("--out", f.out, "output directory");
    sub->add_option("--config", f.config, "JSON RunConfig; flags override it");
    sub->add_option("--measure", f.measure, "uniform | arcsine (interval)");
    sub->add_option("--pair", f.pair, "inf-inf | inf-2 | 2-2 | inf-1");
    sub->add_option("--metrics", f.metrics, "comma-separated metric names");
    sub->add_option("--harmonic-degree", f.harmonic_degree, "max degree for harmonic discrepancy");
    experiment_cmds.push_back(sub);
  };
  add_common(app.add_subcommand("points", "configurations per degree"));
  add_common(app.add_subcommand("bergman", "distortion function and Bergman measures"));
  add_common(app.add_subcommand("optimal-measure", "optimal measures by the multiplicative update"));
  add_common(app.add_subcommand("lfunc", "L-functional of the chosen measure"));
  add_common(app.add_subcommand("distortion", "norm distortion of the configurations"));
  add_common(app.add_subcommand("report", "convergence report"));
  bool inject_fault = false;
  auto* selftest = app.add_subcommand("selftest", "brute-force identity suite");
  selftest->add_flag("--inject-fault", inject_fault, "perturb the Gram matrix of the determinant identity");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  }

  if (selftest->parsed()) return cmd_selftest(inject_fault, out);

  CLI::App* sub = nullptr;
  for (auto* s : experiment_cmds)
    if (s->parsed()) sub = s;

  try {
    RunConfig c;
    if (sub->count("--config") > 0) {
      std::ifstream in(f.config);
      if (!in) throw UsageError("cannot read " + f.config);
      Json j;
      try {
        j = Json::parse(in);
      } catch (const nlohmann::json::exception& e) {
        throw UsageError(std::string("malformed config file: ") + e.what());
      }
      c = run_config_from_json(j);
    }
    if (sub->count("--domain") > 0) c.domain = f.domain;
    if (sub->count("--weight") > 0) c.weight = f.weight;
    if (sub->count("--degrees") > 0) c.degrees = parse_degrees(f.degrees);
    if (sub->count("--method") > 0) c.method = parse_method(f.method);
    if (sub->count("--oversample") > 0) {
      if (f.oversample < 2) throw UsageError("oversample must be >= 2");
      c.grid_oversample = f.oversample;
    }
    if (sub->count("--out") > 0) c.output_dir = f.out;
    if (sub->count("--measure") > 0) c.measure = f.measure;
    if (sub->count("--pair") > 0) {
      try {
        c.pair = parse_distortion_pair(f.pair);
      } catch (const DomainError& e) {
        throw UsageError(e.what());
      }
    }
    if (sub->count("--metrics") > 0) {
      c.metrics.clear();
      for (const auto& m : split(f.metrics, ',')) c.metrics.push_back(parse_metric(m));
    }
    if (sub->count("--harmonic-degree") > 0) c.harmonic_degree = f.harmonic_degree;
    c.validate();
    std::error_code ec;
    std::filesystem::create_directories(c.output_dir, ec);
    if (ec) throw std::runtime_error("cannot create " + c.output_dir + ": " + ec.message());

    const std::string name = sub->get_name();
    if (name == "points") return cmd_points(c, out);
    if (name == "bergman") return cmd_bergman(c, out);
    if (name == "optimal-measure") return cmd_optimal(c, out);
    if (name == "lfunc") return cmd_lfunc(c, out);
    if (name == "distortion") return cmd_distortion(c, out);
    return cmd_report(c, out);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return kUsage;
  } catch (const DomainError& e) {
    err << "usage error: " << e.what() << '\n';
    return kUsage;
  } catch (const NumericalError& e) {
    err << "numerical failure: " << e.what() << '\n';
    return kNumerical;
  } catch (const std::exception& e) {
    err << "failure: " << e.what() << '\n';
    return kNumerical;
  }
}

}  // namespace fekete::cli

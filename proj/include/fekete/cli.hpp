#pragma once

#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "fekete/configurations.hpp"
#include "fekete/design_distortion.hpp"
#include "fekete/io.hpp"
#include "fekete/model_spaces.hpp"

namespace fekete::cli {

/// Invalid flags or RunConfig values (exit code 1).
class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

enum ExitCode { kOk = 0, kUsage = 1, kNumerical = 2, kSelftestFailed = 3 };

enum class Method { Fekete, Leja, GreedyExtremal };

enum class MetricKind { KS, HarmonicDiscrepancy, KDiameter, LFunctional, SupRho, LebesgueConstant, Distortion };

struct Metric {
  MetricKind kind = MetricKind::KS;
  /// Only for Distortion.
  DistortionPair pair = DistortionPair::InfInf;
  friend bool operator==(const Metric&, const Metric&) = default;
};

/// "ks", "harmonic", "k-diameter", "l-functional", "sup-rho", "lebesgue",
/// "distortion:<pair>".
std::string to_string(const Metric& m);
Metric parse_metric(const std::string& text);
std::string to_string(Method m);
Method parse_method(const std::string& text);

/// "interval", "circle:R", "disk:R" or "sphere".
Support parse_domain(const std::string& text);
/// "zero", "quad:C" or "logshift:RE,IM".
Weight parse_weight(const std::string& text);
/// "k1,k2,...".
std::vector<int> parse_degrees(const std::string& text);

struct RunConfig {
  std::string domain = "interval";
  std::string weight = "zero";
  std::vector<int> degrees{5, 10, 20};
  Method method = Method::Fekete;
  /// 0 picks 8 for k <= 20 and 4 above.
  int grid_oversample = 0;
  /// Empty means every metric that applies to the domain.
  std::vector<Metric> metrics;
  std::string output_dir = ".";
  /// "uniform" or "arcsine" (interval only).
  std::string measure = "uniform";
  DistortionPair pair = DistortionPair::InfInf;
  int harmonic_degree = 4;

  /// Throws UsageError: degrees must be positive and strictly increasing,
  /// oversample 0 or >= 2, domain/weight/measure must parse and fit together.
  void validate() const;
  int oversample_for(int k) const;
  friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

Json to_json(const RunConfig& c);
/// Missing keys keep their defaults; unknown keys are a UsageError.
RunConfig run_config_from_json(const Json& j);

/// Everything needed at one degree: candidate grid, weight and the measure.
struct DegreeSetup {
  int k;
  WeightedSet set;
  DiscreteMeasure measure;
};

DegreeSetup make_setup(const RunConfig& c, int k);
FeketeResult build_configuration(const DegreeSetup& s, Method method);

struct DegreeRecord {
  int k = 0;
  Index n = 0;
  /// Metric values in a fixed order; undefined metrics are left out.
  std::vector<std::pair<std::string, double>> values;
  friend bool operator==(const DegreeRecord&, const DegreeRecord&) = default;
};

struct TrendSummary {
  std::string metric;
  double first = 0.0;
  double final = 0.0;
  /// Least-squares slope against k.
  double slope = 0.0;
  friend bool operator==(const TrendSummary&, const TrendSummary&) = default;
};

struct SummaryCheck {
  std::string name;
  double value = 0.0;
  double threshold = 0.0;
  bool passed = false;
  friend bool operator==(const SummaryCheck&, const SummaryCheck&) = default;
};

struct ConvergenceReport {
  RunConfig config;
  std::vector<DegreeRecord> records;
  std::vector<TrendSummary> trends;
  std::vector<SummaryCheck> checks;
  friend bool operator==(const ConvergenceReport&, const ConvergenceReport&) = default;
};

ConvergenceReport build_report(const RunConfig& c);
Json to_json(const ConvergenceReport& r);
ConvergenceReport report_from_json(const Json& j);

/// Entry point shared by the executable and the tests.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace fekete::cli

#include "fekete/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>

#include "fekete/measures.hpp"

namespace fekete {

namespace {

std::string g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

Json number(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

}  // namespace

void write_configuration_csv(std::ostream& os, const Configuration& p, ModelKind kind) {
  write_measure_csv(os, p.as_measure(), kind);
}

void write_bergman_csv(std::ostream& os, const BergmanField& field, ModelKind kind) {
  os << (kind == ModelKind::Sphere2 ? "index,x,y,z,rho\n" : "index,x_re,x_im,rho\n");
  for (std::size_t i = 0; i < field.grid.size(); ++i) {
    const Point& p = field.grid[i];
    os << i << ',' << g17(p.x) << ',' << g17(p.y);
    if (kind == ModelKind::Sphere2) os << ',' << g17(p.z);
    os << ',' << g17(field.rho[i]) << '\n';
  }
}

Json fekete_sidecar(const FeketeResult& result, std::optional<double> k_diameter) {
  Json j;
  j["method"] = to_string(result.method);
  j["k"] = result.k;
  j["N"] = result.config.size();
  j["log_abs_det_weighted"] = number(result.log_abs_det_weighted);
  j["k_diameter"] = k_diameter ? number(*k_diameter) : Json(nullptr);
  j["sweeps"] = result.iterations;
  j["converged"] = result.converged;
  return j;
}

Json growth_json(const GrowthDiagnostic& diag) {
  Json j;
  j["degrees"] = diag.degrees;
  Json sup = Json::array();
  for (double v : diag.sup_rho) sup.push_back(number(v));
  j["sup_rho"] = sup;
  j["poly_exponent"] = number(diag.poly_exponent);
  j["exp_rate"] = number(diag.exp_rate);
  j["bm_flag"] = diag.bm_flag;
  return j;
}

Json optimal_measure_sidecar(const OptimalMeasureResult& result, int k, Index n) {
  Json j;
  j["k"] = k;
  j["N"] = n;
  j["sup_rho"] = number(result.sup_rho);
  j["iterations"] = result.iterations;
  j["converged"] = result.converged;
  return j;
}

void write_json(std::ostream& os, const Json& j) { os << j.dump(2) << '\n'; }

void write_json_file(const std::string& path, const Json& j) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot open " + path + " for writing");
  write_json(f, j);
}

}  // namespace fekete

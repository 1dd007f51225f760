#pragma once

#include <iosfwd>
#include <optional>
#include <string>

#include <json.hpp>

#include "fekete/bergman.hpp"
#include "fekete/configurations.hpp"
#include "fekete/design_distortion.hpp"

namespace fekete {

using Json = nlohmann::ordered_json;

/// Configuration CSV: the measure CSV of delta_P (masses 1/N).
void write_configuration_csv(std::ostream& os, const Configuration& p, ModelKind kind);

/// index,x_re,x_im,rho (complex line) or index,x,y,z,rho (sphere).
void write_bergman_csv(std::ostream& os, const BergmanField& field, ModelKind kind);

/// {method, k, N, log_abs_det_weighted, k_diameter, sweeps, converged}.
/// k_diameter is null when it is undefined (k = 0 or degenerate result).
Json fekete_sidecar(const FeketeResult& result, std::optional<double> k_diameter);

/// {degrees, sup_rho, poly_exponent, exp_rate, bm_flag}.
Json growth_json(const GrowthDiagnostic& diag);

/// {k, N, sup_rho, iterations, converged}.
Json optimal_measure_sidecar(const OptimalMeasureResult& result, int k, Index n);

/// Pretty-printed with a trailing newline. Non-finite numbers become null.
void write_json(std::ostream& os, const Json& j);
void write_json_file(const std::string& path, const Json& j);

}  // namespace fekete

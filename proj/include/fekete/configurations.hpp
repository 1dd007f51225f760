#pragma once

#include <span>
#include <string>
#include <vector>

#include "fekete/core.hpp"
#include "fekete/gram.hpp"
#include "fekete/model_spaces.hpp"

namespace fekete {

enum class ConfigMethod { GreedyOnly, GreedyPlusExchange, Leja, RecursiveExtremal };

std::string to_string(ConfigMethod m);

struct FeketeResult {
  Configuration config;
  /// Indices into the candidate grid (empty when not grid-based).
  std::vector<Index> grid_indices;
  int k = 0;
  /// log|det S_k(P)| - k sum phi(x_j), S_k the canonical (reference-orthonormal) basis.
  double log_abs_det_weighted = 0.0;
  ConfigMethod method = ConfigMethod::GreedyPlusExchange;
  /// Exchange sweeps performed.
  int iterations = 0;
  bool converged = false;
  /// log|det| after the greedy start and after every exchange sweep.
  std::vector<double> sweep_trace;
};

struct FeketeOptions {
  /// Minimum improvement of log|det| for a single-point exchange.
  double exchange_tol = 1e-12;
  int max_sweeps = 200;
  /// false stops after the greedy initialization.
  bool exchange = true;
};

/// log|det(s_i(x_j))| - k sum_j phi(x_j) in the canonical basis; -inf for
/// degenerate configurations. Throws DomainError if |P| != N_k.
double weighted_vandermonde(const WeightedSet& set, int k, const Configuration& p);
/// Same for the sections given by canonical coefficient rows.
double weighted_vandermonde(const WeightedSet& set, int k, const Configuration& p, const MatrixXc& coefficients);

/// Grid-restricted Fekete search: determinant-increment greedy start followed
/// by cyclic single-point exchanges until no swap improves log|det| by more
/// than exchange_tol. Ties go to the lowest grid index.
FeketeResult fekete_search(const WeightedSet& set, int k, FeketeOptions opts = {});

/// max over grid points y and positions j of log|det P_{j <- y}| - log|det P|.
/// Nonpositive (up to tolerance) certifies grid-local maximality.
double exchange_certificate(const WeightedSet& set, int k, const Configuration& p);

/// Discrete Leja sequence on the candidate grid: each new point maximizes the
/// weighted determinant increment with the earlier points fixed.
Configuration leja_sequence(const WeightedSet& set, int k);

/// Wraps any configuration in a FeketeResult with its weighted determinant.
FeketeResult evaluate_configuration(const WeightedSet& set, int k, Configuration p, ConfigMethod method);

/// Output of the recursively extremal construction.
struct RecursiveTrace {
  int k = 0;
  /// x_N, x_{N-1}, ..., x_1 in selection order.
  std::vector<Point> points;
  /// rho^{H_j}(x_j), same order.
  std::vector<double> rho_values;
  /// Row r: working-basis coefficients of the unit section selected at step r.
  MatrixXc sections;
  SectionBasis basis;
  Weight weight;

  Configuration configuration() const { return {points}; }
  /// log |det S(P)|^2_{k phi} in the produced orthonormal basis = sum log rho.
  double log_abs_det_sq() const;
  /// (s_r(x_c)) e^{-k phi(x_c)}: rows are sections, columns are points.
  MatrixXc evaluation_matrix() const;
  /// Section coefficients in the canonical basis.
  MatrixXc canonical_sections() const;
};

/// x_j maximizes rho^{H_j} over the candidate grid followed by the atoms of
/// mu; s_j is the normalized reproducing section of H_j at x_j and H_{j-1} its
/// orthogonal complement in H_j.
RecursiveTrace recursively_extremal(const WeightedSet& set, const DiscreteMeasure& mu, int k);

/// Upper-bound estimate -(1/(k N_k)) log_abs_det_weighted of the k-diameter.
double k_diameter(const WeightedSet& set, int k, const FeketeResult& result);

struct AsymptoticFeketeReport {
  std::vector<int> degrees;
  /// (1/(k N_k)) log|det S_k(P_k)|_{k phi} per degree.
  std::vector<double> values;
  /// Minimum over the upper half of the degrees.
  double liminf_estimate = 0.0;
};

/// Normalized log-determinants per degree. With normalizers (one Gram system
/// per result) S_k is orthonormal for that measure; otherwise the canonical
/// reference-orthonormal basis is used.
AsymptoticFeketeReport asymptotic_fekete_check(std::span<const FeketeResult> results,
                                               std::span<const GramSystem> normalizers = {});

}  // namespace fekete

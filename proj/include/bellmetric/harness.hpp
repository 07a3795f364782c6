#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "bellmetric/bell.hpp"
#include "bellmetric/serialize.hpp"
#include "bellmetric/states.hpp"

namespace bellmetric {

struct Tolerances {
  double structural = tol::structural;
  double assertion = tol::assertion;
  double optimizer = tol::optimizer;
};

/// Settings shared by the experiment commands. Zero dims mean "use the
/// command's default".
struct RunConfig {
  int d1 = 0;
  int d2 = 0;
  int d3 = 0;
  Tolerances tolerances;
  int restarts = 8;
  int max_iters = 500;
  std::uint64_t seed = 0;

  /// Throws std::invalid_argument on non-positive values.
  void validate() const;
  [[nodiscard]] SeesawOptions seesaw() const;
};

/// Tabular result of an experiment, renderable as CSV or JSON.
struct Report {
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;
  Json json;
  bool claims_met = true;
  /// Optional human-readable rendering; empty means "same as CSV".
  std::string text;

  [[nodiscard]] std::string csv() const;
  [[nodiscard]] std::string json_text() const { return dump(json); }
};

struct StateRequest {
  /// mixed, singlet, werner22, embedded-werner, pure, appendixB, random
  std::string kind;
  int d1 = 2;
  int d2 = 2;
  int d3 = 0;
  double lambda = 0.0;
  int tail = 8;
  BasisIndexPair pair_a{0, 0};
  BasisIndexPair pair_b{1, 1};
  Complex amp_a{1.0 / 1.4142135623730951, 0.0};
  Complex amp_b{1.0 / 1.4142135623730951, 0.0};
  std::uint64_t seed = 0;
};

StateFile make_state(const StateRequest& request);

struct GammaResult {
  BellBoundCertificate certificate;
  std::optional<double> oracle_gamma;
  /// Set when a multi-factor vector was reduced onto its first two factors.
  bool reduced = false;
  FactorDims dims;

  [[nodiscard]] Json json() const;
};

/// Bipartite density for any state file: vectors with two factors become
/// projectors, longer ones are reduced onto factors (1, 2).
DensityOperator as_density(const StateFile& state, bool* reduced = nullptr);

GammaResult run_gamma(const StateFile& state, const RunConfig& config);

/// One row per n. Targets default to seeded random densities; prop 6 uses
/// the target (when given) as W'.
Report run_prop(int prop_id, const std::optional<DensityOperator>& target, int n_max,
                const RunConfig& config);

Report run_path(std::span<const double> lambda_grid, int tail, bool include_endpoint,
                const RunConfig& config);

}  // namespace bellmetric

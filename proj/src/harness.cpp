#include "bellmetric/harness.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "bellmetric/constructions.hpp"
#include "bellmetric/random.hpp"

namespace bellmetric {
namespace {

std::string flag(bool b) { return b ? "1" : "0"; }

int pick(int configured, int fallback) { return configured > 0 ? configured : fallback; }

void check_n_range(int n_min, int n_max, int cap, const char* what, FactorDims dims) {
  if (n_max < n_min) {
    throw DimensionError(std::string(what) + ": n_max must be >= " + std::to_string(n_min));
  }
  if (n_max > cap) {
    std::ostringstream os;
    os << what << ": n_max = " << n_max << " needs more headroom than dims " << describe_dims(dims)
       << " allow (largest admissible n is " << cap << ")";
    throw DimensionError(os.str());
  }
}

Json config_json(const RunConfig& c, FactorDims dims) {
  Json j;
  j["dims"] = {dims.d1, dims.d2};
  j["seed"] = c.seed;
  j["restarts"] = c.restarts;
  j["max_iters"] = c.max_iters;
  j["tolerances"] = {{"structural", c.tolerances.structural},
                     {"assertion", c.tolerances.assertion},
                     {"optimizer", c.tolerances.optimizer}};
  return j;
}

Report prop1_report(const DensityOperator& target, int n_max, const RunConfig& config) {
  const FactorDims dims = target.dims();
  check_n_range(2, n_max, std::min(dims.d1, dims.d2) - 2, "prop 1", dims);
  Report report;
  report.columns = {"n_or_lambda", "distance", "value_or_gamma", "violated", "expected_value"};
  Json rows = Json::array();
  for (int n = 2; n <= n_max; ++n) {
    const SequenceStep step = prop1_step(target, n);
    const auto& cert = std::get<BellBoundCertificate>(step.witness);
    const double expected = 1.0 + (std::numbers::sqrt2 - 1.0) / n;
    const bool violated = cert.gamma_lower > 1.0 + config.tolerances.assertion;
    report.claims_met = report.claims_met && violated;
    report.rows.push_back({std::to_string(n), format_double(step.distance_to_target),
                           format_double(cert.gamma_lower), flag(violated),
                           format_double(expected)});
    Json row;
    row["n"] = n;
    row["distance"] = step.distance_to_target;
    row["value"] = cert.gamma_lower;
    row["expected_value"] = expected;
    row["violated"] = violated;
    row["certificate"] = to_json(cert);
    rows.push_back(std::move(row));
  }
  report.json["prop"] = 1;
  report.json["config"] = config_json(config, dims);
  report.json["rows"] = std::move(rows);
  report.json["claims_met"] = report.claims_met;
  return report;
}

Report prop2_report(const DensityOperator& target, int n_max, const RunConfig& config) {
  const FactorDims dims = target.dims();
  if (dims.d1 < 2) throw DimensionError("prop 2: d1 must be >= 2");
  check_n_range(2, n_max, dims.d2 - 2, "prop 2", dims);
  const double s = 1.0 / std::numbers::sqrt2;
  Report report;
  report.columns = {"n_or_lambda", "distance", "value_or_gamma", "violated", "filter_defect"};
  Json rows = Json::array();
  for (int n = 2; n <= n_max; ++n) {
    const SequenceStep step = prop2_step(target, n, config.seesaw());
    const auto& violation = std::get<FilterViolation>(step.witness);
    const DensityOperator psi =
        projector(two_level_pure(dims.d1, dims.d2, {0, n}, {1, n + 1}, s, s));
    const double defect =
        (violation.filtered_state.matrix() - psi.matrix()).cwiseAbs().maxCoeff();
    const bool violated = violation.certificate.gamma_lower > 1.0 + config.tolerances.assertion;
    report.claims_met = report.claims_met && violated && defect <= config.tolerances.structural;
    report.rows.push_back({std::to_string(n), format_double(step.distance_to_target),
                           format_double(violation.certificate.gamma_lower), flag(violated),
                           format_double(defect)});
    Json row;
    row["n"] = n;
    row["distance"] = step.distance_to_target;
    row["value"] = violation.certificate.gamma_lower;
    row["violated"] = violated;
    row["filter_defect"] = defect;
    row["filters"] = {{"Q1", operator_to_json(violation.q1.matrix(), {violation.q1.dim()})},
                      {"Q2", operator_to_json(violation.q2.matrix(), {violation.q2.dim()})}};
    row["certificate"] = to_json(violation.certificate);
    rows.push_back(std::move(row));
  }
  report.json["prop"] = 2;
  report.json["config"] = config_json(config, dims);
  report.json["rows"] = std::move(rows);
  report.json["claims_met"] = report.claims_met;
  return report;
}

Report prop6_report(const DensityOperator& wprime, int n_max, const RunConfig& config) {
  const FactorDims dims = wprime.dims();
  if (dims.d1 < 2) throw DimensionError("prop 6: d1 must be >= 2");
  check_n_range(1, n_max, n_max, "prop 6", dims);
  Rng rng = Rng::stream(config.seed, 0x6);
  const DensityOperator d2 = random_local_density(dims.d2, rng);
  const DensityOperator d(tensor(identity(dims.d1) / static_cast<double>(dims.d1), d2.matrix()),
                          dims);
  const GammaEvidence evidence{.wprime_upper = 1.0, .d_upper = prop3_bound(dims.d1)};

  Report report;
  report.columns = {"n_or_lambda", "distance",     "value_or_gamma", "violated",
                    "ceiling",     "flip_witness"};
  Json rows = Json::array();
  for (int n = 1; n <= n_max; ++n) {
    const SequenceStep step = prop6_step(wprime, d, n, evidence, config.seesaw());
    const auto& cert = std::get<BellBoundCertificate>(step.witness);
    const double ceiling = step.gamma_ceiling.value();
    const double flip = step.flip_witness.value_or(std::nan(""));
    const bool violated = cert.gamma_lower > 1.0 + config.tolerances.assertion;
    const bool consistent = ceiling < 1.0 && cert.gamma_lower <= ceiling + 1e-6;
    report.claims_met = report.claims_met && consistent;
    report.rows.push_back({std::to_string(n), format_double(step.distance_to_target),
                           format_double(cert.gamma_lower), flag(violated), format_double(ceiling),
                           format_double(flip)});
    Json row;
    row["n"] = n;
    row["distance"] = step.distance_to_target;
    row["value"] = cert.gamma_lower;
    row["violated"] = violated;
    row["ceiling"] = ceiling;
    if (step.flip_witness) row["flip_witness"] = *step.flip_witness;
    row["certificate"] = to_json(cert);
    rows.push_back(std::move(row));
  }
  report.json["prop"] = 6;
  report.json["config"] = config_json(config, dims);
  report.json["rows"] = std::move(rows);
  report.json["claims_met"] = report.claims_met;
  return report;
}

}  // namespace

void RunConfig::validate() const {
  if (d1 < 0 || d2 < 0 || d3 < 0) throw std::invalid_argument("dims must be positive");
  if (restarts < 1) throw std::invalid_argument("restarts must be >= 1");
  if (max_iters < 1) throw std::invalid_argument("max-iters must be >= 1");
  if (!(tolerances.structural > 0.0 && tolerances.assertion > 0.0 &&
        tolerances.optimizer > 0.0)) {
    throw std::invalid_argument("tolerances must be positive");
  }
}

SeesawOptions RunConfig::seesaw() const {
  return SeesawOptions{.restarts = restarts,
                       .max_iters = max_iters,
                       .tol = tolerances.optimizer,
                       .seed = seed,
                       .nontrivial = true};
}

std::string Report::csv() const {
  std::string out;
  auto line = [&out](const std::vector<std::string>& cells) {
    for (std::size_t k = 0; k < cells.size(); ++k) {
      if (k) out += ',';
      out += cells[k];
    }
    out += '\n';
  };
  line(columns);
  for (const auto& row : rows) line(row);
  return out;
}

StateFile make_state(const StateRequest& r) {
  const std::string& kind = r.kind;
  if (kind == "mixed") return maximally_mixed(r.d1, r.d2);
  if (kind == "singlet") return singlet_projector();
  if (kind == "werner22") return werner22();
  if (kind == "embedded-werner") return embedded_werner(r.d1, r.d2);
  if (kind == "pure") {
    const double norm = std::sqrt(std::norm(r.amp_a) + std::norm(r.amp_b));
    if (!(norm > 0.0)) throw std::invalid_argument("pure: amplitudes must not both vanish");
    return two_level_pure(r.d1, r.d2, r.pair_a, r.pair_b, r.amp_a / norm, r.amp_b / norm);
  }
  if (kind == "appendixB") {
    std::optional<AppendixBDims> dims;
    if (r.d3 > 0) dims = AppendixBDims{std::max(r.d1, appendix_b_dims(r.tail).d1), 2, r.d3};
    return appendix_b_vector(r.lambda, r.tail, dims);
  }
  if (kind == "random") {
    Rng rng(r.seed);
    return random_density({r.d1, r.d2}, rng);
  }
  throw std::invalid_argument(
      "unknown state kind '" + kind +
      "' (expected mixed, singlet, werner22, embedded-werner, pure, appendixB or random)");
}

DensityOperator as_density(const StateFile& state, bool* reduced_flag) {
  if (reduced_flag) *reduced_flag = false;
  if (const auto* d = std::get_if<DensityOperator>(&state)) return *d;
  const auto& x = std::get<PureVector>(state);
  if (x.factor_dims().size() == 2) return projector(x);
  if (x.factor_dims().size() == 1) {
    return DensityOperator(x.amplitudes() * x.amplitudes().adjoint(), {x.dim(), 1});
  }
  if (reduced_flag) *reduced_flag = true;
  const int keep[] = {0, 1};
  return reduced(x, keep);
}

Json GammaResult::json() const {
  Json j = to_json(certificate);
  j["dims"] = {dims.d1, dims.d2};
  j["reduced"] = reduced;
  if (oracle_gamma) j["oracle_gamma"] = *oracle_gamma;
  return j;
}

GammaResult run_gamma(const StateFile& state, const RunConfig& config) {
  config.validate();
  bool was_reduced = false;
  const DensityOperator d = as_density(state, &was_reduced);
  GammaResult result{.certificate = seesaw_gamma(d, config.seesaw()),
                     .oracle_gamma = std::nullopt,
                     .reduced = was_reduced,
                     .dims = d.dims()};
  if (d.dims() == FactorDims{2, 2}) result.oracle_gamma = horodecki_gamma_2x2(d);
  return result;
}

Report run_prop(int prop_id, const std::optional<DensityOperator>& target, int n_max,
                const RunConfig& config) {
  config.validate();
  auto resolve = [&](FactorDims fallback) {
    if (target) return *target;
    const FactorDims dims{pick(config.d1, fallback.d1), pick(config.d2, fallback.d2)};
    Rng rng(config.seed);
    return random_density(dims, rng);
  };
  switch (prop_id) {
    case 1: {
      const DensityOperator t = resolve({12, 12});
      const int cap = std::min(t.dims().d1, t.dims().d2) - 2;
      return prop1_report(t, n_max > 0 ? n_max : cap, config);
    }
    case 2: {
      const DensityOperator t = resolve({3, 16});
      return prop2_report(t, n_max > 0 ? n_max : t.dims().d2 - 2, config);
    }
    case 6: {
      const DensityOperator w =
          target ? *target : embedded_werner(pick(config.d1, 2), pick(config.d2, 4));
      return prop6_report(w, n_max > 0 ? n_max : 10, config);
    }
    default:
      throw std::invalid_argument("prop id must be 1, 2 or 6, got " + std::to_string(prop_id));
  }
}

Report run_path(std::span<const double> lambda_grid, int tail, bool include_endpoint,
                const RunConfig& config) {
  config.validate();
  std::vector<double> grid(lambda_grid.begin(), lambda_grid.end());
  if (grid.empty()) grid.assign(std::begin(kDefaultLambdaGrid), std::end(kDefaultLambdaGrid));
  if (include_endpoint && std::find(grid.begin(), grid.end(), 0.0) == grid.end()) {
    grid.push_back(0.0);
  }
  const std::vector<PathPoint> points = appendix_b_path(grid, tail, config.seesaw());
  // The endpoint is (P/2) (x) (I/2); with the two-dimensional factor in the
  // role of the finite one its coefficient is prop3_bound(2) = 0.
  const double radius = safe_radius(prop3_bound(2));

  Report report;
  report.columns = {"n_or_lambda",    "distance",       "value_or_gamma", "violated",
                    "negativity",     "certified_quiet", "vector_distance"};
  Json rows = Json::array();
  for (const PathPoint& p : points) {
    const bool violated = p.gamma_lower > 1.0 + config.tolerances.assertion;
    const bool quiet = p.distance < radius;
    const bool continuity = p.distance <= 2.0 * p.vector_distance + config.tolerances.assertion;
    report.claims_met = report.claims_met && !(quiet && violated) && continuity;
    report.rows.push_back({format_double(p.lambda), format_double(p.distance),
                           format_double(p.gamma_lower), flag(violated),
                           format_double(p.negativity), flag(quiet),
                           format_double(p.vector_distance)});
    Json row;
    row["lambda"] = p.lambda;
    row["distance"] = p.distance;
    row["gamma_lower"] = p.gamma_lower;
    row["violated"] = violated;
    row["negativity"] = p.negativity;
    row["nonseparable"] = p.negativity > config.tolerances.structural ? "detected" : "inconclusive";
    row["certified_quiet"] = quiet;
    row["vector_distance"] = p.vector_distance;
    row["certificate"] = to_json(p.certificate);
    rows.push_back(std::move(row));
  }
  const AppendixBDims dims = appendix_b_dims(tail);
  report.json["path"] = "appendixB";
  report.json["tail"] = tail;
  report.json["truncation"] = {dims.d1, dims.d2, dims.d3};
  report.json["safe_radius"] = radius;
  report.json["config"] = config_json(config, {dims.d1, dims.d2});
  report.json["rows"] = std::move(rows);
  report.json["claims_met"] = report.claims_met;
  return report;
}

}  // namespace bellmetric

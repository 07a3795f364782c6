#include "bellmetric/bellmetric.h"

#include <cstdlib>
#include <cstring>
#include <fstream>
#include <new>
#include <sstream>
#include <string>

#include "bellmetric/acceptance.hpp"
#include "bellmetric/harness.hpp"

struct bm_state {
  bellmetric::StateFile state;
};

struct bm_certificate {
  bellmetric::GammaResult result;
};

struct bm_report {
  bellmetric::Report report;
};

namespace {

thread_local std::string g_last_error;

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

bm_status fail(bm_status status, const std::string& message) {
  g_last_error = message;
  return status;
}

template <typename F>
bm_status guarded(F&& body) {
  try {
    body();
    g_last_error.clear();
    return BM_OK;
  } catch (const bellmetric::NullConditioning& e) {
    return fail(BM_ERR_NULL_CONDITIONING, e.what());
  } catch (const bellmetric::ParseError& e) {
    return fail(BM_ERR_PARSE, e.what());
  } catch (const nlohmann::json::exception& e) {
    return fail(BM_ERR_PARSE, e.what());
  } catch (const IoError& e) {
    return fail(BM_ERR_IO, e.what());
  } catch (const bellmetric::DimensionError& e) {
    return fail(BM_ERR_DIMENSION, e.what());
  } catch (const bellmetric::InvariantError& e) {
    return fail(BM_ERR_INVARIANT, e.what());
  } catch (const std::invalid_argument& e) {
    return fail(BM_ERR_INVALID_ARGUMENT, e.what());
  } catch (const std::bad_alloc&) {
    return fail(BM_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(BM_ERR_INTERNAL, e.what());
  }
}

char* copy_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

void require(const void* p, const char* name) {
  if (!p) throw std::invalid_argument(std::string(name) + " must not be NULL");
}

bellmetric::RunConfig to_config(const bm_run_config* c) {
  bellmetric::RunConfig config;
  if (!c) return config;
  config.d1 = c->d1;
  config.d2 = c->d2;
  config.d3 = c->d3;
  config.tolerances = {c->tol_structural, c->tol_assertion, c->tol_optimizer};
  config.restarts = c->restarts;
  config.max_iters = c->max_iters;
  config.seed = c->seed;
  config.validate();
  return config;
}

std::string read_file(const char* path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError(std::string("cannot open ") + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

extern "C" {

const char* bm_version(void) { return "1.0.0"; }

const char* bm_last_error(void) { return g_last_error.c_str(); }

const char* bm_status_name(bm_status status) {
  switch (status) {
    case BM_OK: return "ok";
    case BM_ERR_INVALID_ARGUMENT: return "invalid argument";
    case BM_ERR_DIMENSION: return "dimension error";
    case BM_ERR_INVARIANT: return "invariant violation";
    case BM_ERR_NULL_CONDITIONING: return "null conditioning";
    case BM_ERR_PARSE: return "parse error";
    case BM_ERR_IO: return "i/o error";
    case BM_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

void bm_string_free(char* s) { std::free(s); }

void bm_run_config_default(bm_run_config* config) {
  if (!config) return;
  const bellmetric::RunConfig d;
  *config = bm_run_config{d.d1,
                          d.d2,
                          d.d3,
                          d.tolerances.structural,
                          d.tolerances.assertion,
                          d.tolerances.optimizer,
                          d.restarts,
                          d.max_iters,
                          d.seed};
}

void bm_state_params_default(bm_state_params* params) {
  if (!params) return;
  const bellmetric::StateRequest r;
  *params = bm_state_params{r.d1,
                            r.d2,
                            r.d3,
                            r.lambda,
                            r.tail,
                            {r.pair_a.i, r.pair_a.j},
                            {r.pair_b.i, r.pair_b.j},
                            r.amp_a.real(),
                            r.amp_a.imag(),
                            r.amp_b.real(),
                            r.amp_b.imag(),
                            r.seed};
}

bm_status bm_state_make(const char* kind, const bm_state_params* params, bm_state** out) {
  return guarded([&] {
    require(kind, "kind");
    require(out, "out");
    bm_state_params p;
    bm_state_params_default(&p);
    if (params) p = *params;
    bellmetric::StateRequest r;
    r.kind = kind;
    r.d1 = p.d1;
    r.d2 = p.d2;
    r.d3 = p.d3;
    r.lambda = p.lambda;
    r.tail = p.tail;
    r.pair_a = {p.pair_a[0], p.pair_a[1]};
    r.pair_b = {p.pair_b[0], p.pair_b[1]};
    r.amp_a = {p.amp_a_re, p.amp_a_im};
    r.amp_b = {p.amp_b_re, p.amp_b_im};
    r.seed = p.seed;
    *out = new bm_state{bellmetric::make_state(r)};
  });
}

bm_status bm_state_parse(const char* json, bm_state** out) {
  return guarded([&] {
    require(json, "json");
    require(out, "out");
    *out = new bm_state{bellmetric::parse_state(json)};
  });
}

bm_status bm_state_load(const char* path, bm_state** out) {
  return guarded([&] {
    require(path, "path");
    require(out, "out");
    const std::string text = read_file(path);
    try {
      *out = new bm_state{bellmetric::parse_state(text)};
    } catch (const bellmetric::ParseError& e) {
      throw bellmetric::ParseError(std::string(path) + ": " + e.what());
    }
  });
}

bm_status bm_state_to_json(const bm_state* state, char** out) {
  return guarded([&] {
    require(state, "state");
    require(out, "out");
    *out = copy_string(bellmetric::dump_state(state->state));
  });
}

bm_status bm_state_save(const bm_state* state, const char* path) {
  return guarded([&] {
    require(state, "state");
    require(path, "path");
    std::ofstream file(path, std::ios::binary | std::ios::trunc);
    if (!file) throw IoError(std::string("cannot write ") + path);
    file << bellmetric::dump_state(state->state);
    if (!file) throw IoError(std::string("write failed for ") + path);
  });
}

int bm_state_is_pure(const bm_state* state) {
  return state && std::holds_alternative<bellmetric::PureVector>(state->state) ? 1 : 0;
}

int bm_state_dim(const bm_state* state) {
  if (!state) return 0;
  return std::visit([](const auto& s) { return s.dim(); }, state->state);
}

bm_status bm_state_factor_dims(const bm_state* state, int* dims, size_t capacity,
                               size_t* count) {
  return guarded([&] {
    require(state, "state");
    std::vector<int> fd;
    if (const auto* d = std::get_if<bellmetric::DensityOperator>(&state->state)) {
      fd = {d->dims().d1, d->dims().d2};
    } else {
      fd = std::get<bellmetric::PureVector>(state->state).factor_dims();
    }
    if (count) *count = fd.size();
    for (size_t k = 0; k < fd.size() && k < capacity && dims; ++k) dims[k] = fd[k];
  });
}

void bm_state_free(bm_state* state) { delete state; }

bm_status bm_gamma(const bm_state* state, const bm_run_config* config, bm_certificate** out) {
  return guarded([&] {
    require(state, "state");
    require(out, "out");
    *out = new bm_certificate{bellmetric::run_gamma(state->state, to_config(config))};
  });
}

double bm_certificate_gamma_lower(const bm_certificate* cert) {
  return cert ? cert->result.certificate.gamma_lower : 0.0;
}

double bm_certificate_beta(const bm_certificate* cert) {
  return cert ? cert->result.certificate.beta() : 0.0;
}

int bm_certificate_converged(const bm_certificate* cert) {
  return cert && cert->result.certificate.converged ? 1 : 0;
}

int bm_certificate_iterations(const bm_certificate* cert) {
  return cert ? cert->result.certificate.iterations : 0;
}

int bm_certificate_oracle_gamma(const bm_certificate* cert, double* value) {
  if (!cert || !cert->result.oracle_gamma) return 0;
  if (value) *value = *cert->result.oracle_gamma;
  return 1;
}

bm_status bm_certificate_to_json(const bm_certificate* cert, char** out) {
  return guarded([&] {
    require(cert, "cert");
    require(out, "out");
    *out = copy_string(bellmetric::dump(cert->result.json()));
  });
}

void bm_certificate_free(bm_certificate* cert) { delete cert; }

bm_status bm_prop_run(int prop_id, const bm_state* target, int n_max,
                      const bm_run_config* config, bm_report** out) {
  return guarded([&] {
    require(out, "out");
    std::optional<bellmetric::DensityOperator> t;
    if (target) t = bellmetric::as_density(target->state);
    *out = new bm_report{bellmetric::run_prop(prop_id, t, n_max, to_config(config))};
  });
}

bm_status bm_path_run(const double* grid, size_t grid_len, int tail, int include_endpoint,
                      const bm_run_config* config, bm_report** out) {
  return guarded([&] {
    require(out, "out");
    if (grid_len > 0) require(grid, "grid");
    const std::span<const double> g(grid, grid_len);
    *out = new bm_report{bellmetric::run_path(g, tail, include_endpoint != 0, to_config(config))};
  });
}

bm_status bm_selftest_run(bm_report** out) {
  return guarded([&] {
    require(out, "out");
    namespace acc = bellmetric::acceptance;
    bellmetric::Report report;
    report.columns = {"criterion", "title", "passed", "seconds", "budget_seconds", "detail"};
    bellmetric::Json rows = bellmetric::Json::array();
    for (const acc::CriterionResult& r : acc::run_all()) {
      report.claims_met = report.claims_met && r.passed;
      std::string detail = r.detail;
      for (char& c : detail) {
        if (c == ',') c = ';';
      }
      report.rows.push_back({std::to_string(r.id), r.title, r.passed ? "1" : "0",
                             bellmetric::format_double(r.seconds),
                             bellmetric::format_double(r.budget_seconds), detail});
      report.text += acc::format_line(r) + "\n";
      bellmetric::Json row;
      row["criterion"] = r.id;
      row["title"] = r.title;
      row["passed"] = r.passed;
      row["seconds"] = r.seconds;
      row["budget_seconds"] = r.budget_seconds;
      row["detail"] = r.detail;
      rows.push_back(std::move(row));
    }
    report.json["criteria"] = std::move(rows);
    report.json["all_passed"] = report.claims_met;
    *out = new bm_report{std::move(report)};
  });
}

int bm_report_claims_met(const bm_report* report) {
  return report && report->report.claims_met ? 1 : 0;
}

size_t bm_report_row_count(const bm_report* report) {
  return report ? report->report.rows.size() : 0;
}

bm_status bm_report_render(const bm_report* report, bm_format format, char** out) {
  return guarded([&] {
    require(report, "report");
    require(out, "out");
    const bellmetric::Report& r = report->report;
    switch (format) {
      case BM_FORMAT_JSON: *out = copy_string(r.json_text()); return;
      case BM_FORMAT_CSV: *out = copy_string(r.csv()); return;
      case BM_FORMAT_TEXT: *out = copy_string(r.text.empty() ? r.csv() : r.text); return;
    }
    throw std::invalid_argument("unknown report format");
  });
}

void bm_report_free(bm_report* report) { delete report; }

}  // extern "C"

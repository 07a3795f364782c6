// bellmetric command-line front end. Links only the C interface.
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "bellmetric/bellmetric.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitClaimsUnmet = 1;
constexpr int kExitUsage = 2;

struct Options {
  int d1 = 0;
  int d2 = 0;
  int d3 = 0;
  int n_max = 0;
  std::vector<double> lambda;
  int tail = 8;
  int restarts = 8;
  int max_iters = 500;
  double tol = 1e-8;
  double tol_structural = 1e-10;
  double tol_assertion = 1e-9;
  std::optional<std::uint64_t> seed;
  std::string out;
  std::string format;
  std::vector<int> pair_a{0, 0};
  std::vector<int> pair_b{1, 1};

  std::string state_kind;
  std::string state_file;
  int prop_id = 0;
  std::string prop_target;
  bool prop_random = false;
  bool no_endpoint = false;
};

struct Failure {
  bm_status status;
  std::string message;
};

void check(bm_status status) {
  if (status != BM_OK) throw Failure{status, bm_last_error()};
}

struct StringDeleter {
  void operator()(char* s) const { bm_string_free(s); }
};
using OwnedString = std::unique_ptr<char, StringDeleter>;

template <typename T, void (*Free)(T*)>
struct HandleDeleter {
  void operator()(T* p) const { Free(p); }
};
using State = std::unique_ptr<bm_state, HandleDeleter<bm_state, bm_state_free>>;
using Certificate = std::unique_ptr<bm_certificate, HandleDeleter<bm_certificate, bm_certificate_free>>;
using Report = std::unique_ptr<bm_report, HandleDeleter<bm_report, bm_report_free>>;

bm_run_config run_config(const Options& o) {
  bm_run_config c;
  bm_run_config_default(&c);
  c.d1 = o.d1;
  c.d2 = o.d2;
  c.d3 = o.d3;
  c.tol_structural = o.tol_structural;
  c.tol_assertion = o.tol_assertion;
  c.tol_optimizer = o.tol;
  c.restarts = o.restarts;
  c.max_iters = o.max_iters;
  c.seed = o.seed.value_or(0);
  return c;
}

void emit(const Options& o, const std::string& text) {
  if (o.out.empty()) {
    std::cout << text;
    std::cout.flush();
    return;
  }
  std::ofstream file(o.out, std::ios::binary | std::ios::trunc);
  if (!file || !(file << text)) throw Failure{BM_ERR_IO, "cannot write " + o.out};
}

bm_format parse_format(const std::string& name, bm_format fallback) {
  if (name.empty()) return fallback;
  if (name == "json") return BM_FORMAT_JSON;
  if (name == "csv") return BM_FORMAT_CSV;
  if (name == "text") return BM_FORMAT_TEXT;
  throw CLI::ValidationError("--format", "expected json, csv or text");
}

std::string render(const bm_report* report, bm_format format) {
  char* raw = nullptr;
  check(bm_report_render(report, format, &raw));
  return OwnedString(raw).get();
}

int cmd_state_make(const Options& o) {
  bm_state_params p;
  bm_state_params_default(&p);
  if (o.d1 > 0) p.d1 = o.d1;
  if (o.d2 > 0) p.d2 = o.d2;
  p.d3 = o.d3;
  if (o.lambda.size() > 1) throw CLI::ValidationError("--lambda", "state make takes a single value");
  if (!o.lambda.empty()) p.lambda = o.lambda.front();
  p.tail = o.tail;
  p.pair_a[0] = o.pair_a[0];
  p.pair_a[1] = o.pair_a[1];
  p.pair_b[0] = o.pair_b[0];
  p.pair_b[1] = o.pair_b[1];
  p.seed = o.seed.value_or(0);
  bm_state* raw = nullptr;
  check(bm_state_make(o.state_kind.c_str(), &p, &raw));
  State state(raw);
  char* json = nullptr;
  check(bm_state_to_json(state.get(), &json));
  emit(o, OwnedString(json).get());
  return kExitOk;
}

int cmd_gamma(const Options& o) {
  if (!o.format.empty() && o.format != "json") {
    throw CLI::ValidationError("--format", "gamma emits json only");
  }
  bm_state* raw = nullptr;
  check(bm_state_load(o.state_file.c_str(), &raw));
  State state(raw);
  const bm_run_config c = run_config(o);
  bm_certificate* cert_raw = nullptr;
  check(bm_gamma(state.get(), &c, &cert_raw));
  Certificate cert(cert_raw);
  char* json = nullptr;
  check(bm_certificate_to_json(cert.get(), &json));
  emit(o, OwnedString(json).get());
  return kExitOk;
}

int cmd_prop(const Options& o) {
  if (o.prop_random && !o.prop_target.empty()) {
    throw CLI::ValidationError("prop", "give a target file or --random, not both");
  }
  const bm_format format = parse_format(o.format, BM_FORMAT_CSV);
  State target;
  if (!o.prop_target.empty()) {
    bm_state* raw = nullptr;
    check(bm_state_load(o.prop_target.c_str(), &raw));
    target.reset(raw);
  }
  const bm_run_config c = run_config(o);
  bm_report* raw = nullptr;
  check(bm_prop_run(o.prop_id, target.get(), o.n_max, &c, &raw));
  Report report(raw);
  emit(o, render(report.get(), format));
  return bm_report_claims_met(report.get()) ? kExitOk : kExitClaimsUnmet;
}

int cmd_path(const Options& o) {
  const bm_format format = parse_format(o.format, BM_FORMAT_CSV);
  const bm_run_config c = run_config(o);
  bm_report* raw = nullptr;
  check(bm_path_run(o.lambda.empty() ? nullptr : o.lambda.data(), o.lambda.size(), o.tail,
                    o.no_endpoint ? 0 : 1, &c, &raw));
  Report report(raw);
  emit(o, render(report.get(), format));
  return bm_report_claims_met(report.get()) ? kExitOk : kExitClaimsUnmet;
}

int cmd_selftest(const Options& o) {
  const bm_format format = parse_format(o.format, BM_FORMAT_TEXT);
  bm_report* raw = nullptr;
  check(bm_selftest_run(&raw));
  Report report(raw);
  emit(o, render(report.get(), format));
  return bm_report_claims_met(report.get()) ? kExitOk : kExitClaimsUnmet;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Certified CHSH Bell-coefficient bounds and dense state constructions"};
  app.set_version_flag("--version", std::string(bm_version()));
  app.set_config("--config", "", "TOML/INI file with option defaults; flags win");
  app.require_subcommand(1);
  app.fallthrough();

  Options o;
  app.add_option("--d1", o.d1, "left factor dimension")->check(CLI::NonNegativeNumber);
  app.add_option("--d2", o.d2, "right factor dimension")->check(CLI::NonNegativeNumber);
  app.add_option("--d3", o.d3, "third factor dimension (appendixB)")->check(CLI::NonNegativeNumber);
  app.add_option("--n-max", o.n_max, "largest sequence index (0: largest admissible)")
      ->check(CLI::NonNegativeNumber);
  app.add_option("--lambda", o.lambda, "lambda value, or comma-separated grid for path")
      ->delimiter(',');
  app.add_option("--tail", o.tail, "tail length N of the appendixB vector")
      ->check(CLI::PositiveNumber);
  app.add_option("--restarts", o.restarts, "see-saw restarts")->check(CLI::PositiveNumber);
  app.add_option("--max-iters", o.max_iters, "see-saw sweeps per restart")
      ->check(CLI::PositiveNumber);
  app.add_option("--tol", o.tol, "see-saw convergence tolerance")->check(CLI::PositiveNumber);
  app.add_option("--tol-structural", o.tol_structural, "structural check tolerance")
      ->check(CLI::PositiveNumber);
  app.add_option("--tol-assertion", o.tol_assertion, "claim assertion tolerance")
      ->check(CLI::PositiveNumber);
  app.add_option("--seed", o.seed, "RNG seed")->envname("BELLMETRIC_SEED");
  app.add_option("--out", o.out, "output path (default stdout)");
  app.add_option("--format", o.format, "json, csv or text")
      ->check(CLI::IsMember({"json", "csv", "text"}));
  app.add_option("--pair-a", o.pair_a, "first basis pair i,j of a pure state")
      ->delimiter(',')
      ->expected(2);
  app.add_option("--pair-b", o.pair_b, "second basis pair i,j of a pure state")
      ->delimiter(',')
      ->expected(2);

  auto* state = app.add_subcommand("state", "state files");
  state->require_subcommand(1);
  auto* make = state->add_subcommand("make", "write a named state as JSON");
  make->add_option("kind", o.state_kind,
                   "mixed, singlet, werner22, embedded-werner, pure, appendixB, random")
      ->required();

  auto* gamma = app.add_subcommand("gamma", "certified lower bound on the Bell coefficient");
  gamma->add_option("file", o.state_file, "state JSON file")->required();

  auto* prop = app.add_subcommand("prop", "dense sequence construction report");
  prop->add_option("id", o.prop_id, "1, 2 or 6")->required()->check(CLI::IsMember({1, 2, 6}));
  prop->add_option("target", o.prop_target, "target state file (prop 6: W')");
  prop->add_flag("--random", o.prop_random, "use a seeded random target");

  auto* path = app.add_subcommand("path", "appendix path of CHSH-quiet states");
  path->add_flag("--no-endpoint", o.no_endpoint, "omit the lambda = 0 row");

  auto* selftest = app.add_subcommand("selftest", "run the acceptance criteria");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (make->parsed()) return cmd_state_make(o);
    if (gamma->parsed()) return cmd_gamma(o);
    if (prop->parsed()) return cmd_prop(o);
    if (path->parsed()) return cmd_path(o);
    if (selftest->parsed()) return cmd_selftest(o);
  } catch (const CLI::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const Failure& f) {
    std::cerr << "error: " << bm_status_name(f.status) << ": " << f.message << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}

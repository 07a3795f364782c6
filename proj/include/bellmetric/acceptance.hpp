#pragma once

#include <string>
#include <vector>

namespace bellmetric::acceptance {

struct CriterionResult {
  int id = 0;
  std::string title;
  bool passed = false;
  std::string detail;
  double seconds = 0.0;
  double budget_seconds = 0.0;
};

CriterionResult werner_witnesses();
CriterionResult oracle_agreement();
CriterionResult landau_suite();
CriterionResult prop1_density();
CriterionResult prop2_hidden_nonlocality();
CriterionResult prop3_neighborhoods();
CriterionResult lipschitz_convexity();
CriterionResult compression();
CriterionResult appendix_b_path_check();

/// Runs every criterion in order.
std::vector<CriterionResult> run_all();

/// "PASS [3] Landau suite (0.41 s / 60 s): detail"
std::string format_line(const CriterionResult& r);

}  // namespace bellmetric::acceptance

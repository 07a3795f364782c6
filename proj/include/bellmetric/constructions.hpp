#pragma once

#include <optional>
#include <span>
#include <variant>
#include <vector>

#include "bellmetric/bell.hpp"
#include "bellmetric/operator.hpp"

namespace bellmetric {

/// A CHSH violation seen after local selective measurements Q1 (x) Q2.
struct FilterViolation {
  Projection q1;
  Projection q2;
  DensityOperator filtered_state;
  BellBoundCertificate certificate;
};

struct NoViolationFound {
  DensityOperator filtered_state;
  BellBoundCertificate best;
};

using HiddenNonlocalityResult = std::variant<FilterViolation, NoViolationFound>;

struct SequenceStep {
  int n = 0;
  DensityOperator state;
  std::variant<BellBoundCertificate, FilterViolation> witness;
  double distance_to_target = 0.0;
  /// Convexity ceiling on gamma(state), when one is known.
  std::optional<double> gamma_ceiling;
  /// Tr(U' state) for the swap on the leading 2x2 block, when computed.
  std::optional<double> flip_witness;
};

/// Headroom needed by prop1_step at index n.
bool prop1_fits(FactorDims dims, int n);
bool prop2_fits(FactorDims dims, int n);

/// D_n = (1 - 1/n) D^{P_n} + (1/n) P_{psi_n}, with a Bell certificate built
/// from qubit settings on the two tail vectors of each factor and the identity
/// on their complement.
SequenceStep prop1_step(const DensityOperator& target, int n);

/// D_n = (1 - 1/n) D^{P'_n} + (1/n) P_{psi'_n}, witnessed by the filters onto
/// span{e_1, e_2} and span{f_{n+1}, f_{n+2}}.
SequenceStep prop2_step(const DensityOperator& target, int n, const SeesawOptions& options = {});

struct GammaEvidence {
  /// Upper bound on gamma(W'); W' is assumed not CHSH violating.
  double wprime_upper = 1.0;
  /// Upper bound on gamma(D), e.g. prop3_bound for (I/d1) (x) D2.
  double d_upper = 0.0;
};

/// W_n = (1 - 1/n) W' + (1/n) D with the convexity ceiling on gamma(W_n) and a
/// see-saw lower bound as witness.
SequenceStep prop6_step(const DensityOperator& wprime, const DensityOperator& d, int n,
                        GammaEvidence evidence, const SeesawOptions& options = {});

/// Conditions on Q1 (x) Q2 and searches for a CHSH violation of the filtered
/// state. The 2x2 oracle is also consulted when both filters have rank two.
HiddenNonlocalityResult hidden_nonlocality_check(const DensityOperator& d, const Projection& q1,
                                                 const Projection& q2,
                                                 const SeesawOptions& options = {});

/// Sum of magnitudes of the negative eigenvalues of the partial transpose.
/// Zero is inconclusive, not a separability certificate.
double negativity(const DensityOperator& d);

struct PathPoint {
  double lambda = 0.0;
  /// ||Phi(v_lambda) - Phi(v_0)||_1
  double distance = 0.0;
  /// ||v_lambda - v_0||
  double vector_distance = 0.0;
  double gamma_lower = 0.0;
  double negativity = 0.0;
  BellBoundCertificate certificate;
};

inline constexpr double kDefaultLambdaGrid[] = {0.5, 0.25, 0.1, 0.05, 0.01};

/// Reduced states of the appendix-B family on the (factor 1, factor 2) cut.
std::vector<PathPoint> appendix_b_path(std::span<const double> lambda_grid, int tail_terms,
                                       const SeesawOptions& options = {});

}  // namespace bellmetric

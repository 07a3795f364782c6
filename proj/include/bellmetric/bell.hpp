#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "bellmetric/operator.hpp"

namespace bellmetric {

/// The quadruple (A1, A2, B1, B2); A acts on the left factor, B on the right.
struct CorrelationSettings {
  DichotomicObservable a1;
  DichotomicObservable a2;
  DichotomicObservable b1;
  DichotomicObservable b2;

  [[nodiscard]] FactorDims dims() const { return {a1.dim(), b1.dim()}; }
  [[nodiscard]] bool all_nontrivial() const {
    return a1.nontrivial() && a2.nontrivial() && b1.nontrivial() && b2.nontrivial();
  }
};

/// R = (1/2)[A1 (x) (B1 + B2) + A2 (x) (B1 - B2)], cached.
class BellOperator {
 public:
  explicit BellOperator(CorrelationSettings settings);

  [[nodiscard]] const CorrelationSettings& settings() const { return settings_; }
  [[nodiscard]] const Matrix& matrix() const { return matrix_; }

 private:
  CorrelationSettings settings_;
  Matrix matrix_;
};

BellOperator bell_operator(const CorrelationSettings& settings);

/// Operator norm of R^2 - (I - (1/4)[A1,A2] (x) [B1,B2]).
double landau_residual(const CorrelationSettings& settings);

/// Tr(D R).
double chsh_value(const DensityOperator& d, const CorrelationSettings& settings);
double chsh_value(const DensityOperator& d, const BellOperator& r);

/// Left-factor operator E with Tr(D (A (x) B)) = Tr(E A) for every A:
/// E_ik = sum_jl D_(i,j),(k,l) B_lj.
Matrix effective_left(const DensityOperator& d, const Matrix& b);
/// Right-factor counterpart: F_jl = sum_ik D_(i,j),(k,l) A_ki.
Matrix effective_right(const DensityOperator& d, const Matrix& a);

/// Exact maximizer of Tr(H A) over dichotomic A. With `nontrivial` set (and
/// dim >= 2), the maximizer is taken over observables other than +-I.
DichotomicObservable best_dichotomic(const Matrix& h, bool nontrivial);

struct SeesawOptions {
  int restarts = 8;
  int max_iters = 500;
  double tol = tol::optimizer;
  std::uint64_t seed = 0;
  /// Restrict every update to observables other than +-I, so the result
  /// bounds gamma rather than beta.
  bool nontrivial = true;
};

struct BellBoundCertificate {
  double gamma_lower = 0.0;
  CorrelationSettings settings;
  int iterations = 0;
  int restarts_used = 0;
  bool converged = false;
  /// Objective after every coordinate update of the winning run.
  std::vector<double> monotone_trace;
  std::uint64_t seed = 0;
  /// "seesaw", "oracle" or "explicit".
  std::string method;

  [[nodiscard]] double beta() const { return gamma_lower > 1.0 ? gamma_lower : 1.0; }
};

/// Wraps fixed settings into a certificate valued at |Tr(D R)|.
BellBoundCertificate certify_settings(const DensityOperator& d, CorrelationSettings settings,
                                      std::string method);

/// Alternating maximization of |Tr(D R)| over dichotomic settings.
///
/// Each sweep updates A1, A2, B1, B2 in that order; every update is the exact
/// maximizer over extreme points of the self-adjoint contractions, so the
/// objective never decreases. Both signs of Tr(D R) are pursued from every
/// restart. The returned value is a lower bound on the Bell coefficient,
/// clamped to [0, sqrt 2].
BellBoundCertificate seesaw_gamma(const DensityOperator& d, const SeesawOptions& options = {});

/// Closed form for 2 x 2: sqrt(s1^2 + s2^2) over the two largest singular
/// values of T_ij = Tr(D sigma_i (x) sigma_j).
double horodecki_gamma_2x2(const DensityOperator& d);

struct OracleSolution {
  double gamma = 0.0;
  CorrelationSettings settings;
};

/// Qubit settings attaining horodecki_gamma_2x2.
OracleSolution horodecki_optimal_settings(const DensityOperator& d);

/// 1 - 2/d1: ceiling on gamma((I/d1) (x) D2).
double prop3_bound(int d1);

/// Trace-norm radius around a state with coefficient `gamma` that contains no
/// CHSH-violating state: max(0, (1 - gamma)/sqrt 2).
double safe_radius(double gamma);

/// (P (x) Q) R (P (x) Q).
Matrix compress_bell(const BellOperator& r, const Projection& p, const Projection& q);

}  // namespace bellmetric

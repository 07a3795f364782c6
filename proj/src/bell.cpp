#include "bellmetric/bell.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>
#include <sstream>

#include "bellmetric/random.hpp"
#include "bellmetric/states.hpp"

namespace bellmetric {
namespace {

constexpr double kTsirelson = std::numbers::sqrt2;

Matrix build_bell_matrix(const CorrelationSettings& s) {
  if (s.a1.dim() != s.a2.dim() || s.b1.dim() != s.b2.dim()) {
    throw DimensionError("bell_operator: observables on the same factor differ in dim");
  }
  const Matrix& b1 = s.b1.matrix();
  const Matrix& b2 = s.b2.matrix();
  return 0.5 * (tensor(s.a1.matrix(), b1 + b2) + tensor(s.a2.matrix(), b1 - b2));
}

void require_settings_fit(const DensityOperator& d, const CorrelationSettings& s) {
  if (!(s.dims() == d.dims())) {
    throw DimensionError("settings act on " + describe_dims(s.dims()) + " but state has dims " +
                         describe_dims(d.dims()));
  }
}

/// Tr(D R) through the left effective operators; avoids forming R.
double objective(const DensityOperator& d, const CorrelationSettings& s) {
  const Matrix& b1 = s.b1.matrix();
  const Matrix& b2 = s.b2.matrix();
  const Complex plus = trace_product(effective_left(d, b1 + b2), s.a1.matrix());
  const Complex minus = trace_product(effective_left(d, b1 - b2), s.a2.matrix());
  return 0.5 * (plus + minus).real();
}

Matrix qubit_observable(const Eigen::Vector3d& n) {
  return n(0) * pauli::x() + n(1) * pauli::y() + n(2) * pauli::z();
}

struct RunResult {
  CorrelationSettings settings;
  double value;
  int sweeps;
  bool converged;
  std::vector<double> trace;
};

RunResult run_seesaw(const DensityOperator& d, double sign, CorrelationSettings s,
                     const SeesawOptions& options) {
  const bool nontrivial = options.nontrivial;
  double value = sign * objective(d, s);
  std::vector<double> trace{value};
  int sweeps = 0;
  bool converged = false;
  while (sweeps < options.max_iters) {
    ++sweeps;
    const double before = value;
    const Matrix& b1 = s.b1.matrix();
    const Matrix& b2 = s.b2.matrix();
    s.a1 = best_dichotomic(0.5 * sign * effective_left(d, b1 + b2), nontrivial);
    trace.push_back(sign * objective(d, s));
    s.a2 = best_dichotomic(0.5 * sign * effective_left(d, b1 - b2), nontrivial);
    trace.push_back(sign * objective(d, s));
    const Matrix& a1 = s.a1.matrix();
    const Matrix& a2 = s.a2.matrix();
    s.b1 = best_dichotomic(0.5 * sign * effective_right(d, a1 + a2), nontrivial);
    trace.push_back(sign * objective(d, s));
    s.b2 = best_dichotomic(0.5 * sign * effective_right(d, s.a1.matrix() - s.a2.matrix()),
                           nontrivial);
    value = sign * objective(d, s);
    trace.push_back(value);
    if (value - before < options.tol) {
      converged = true;
      break;
    }
  }
  return {std::move(s), value, sweeps, converged, std::move(trace)};
}

DichotomicObservable random_start(int dim, bool nontrivial, Rng& rng) {
  if (nontrivial && dim >= 2) return random_nontrivial_dichotomic(dim, rng);
  return random_dichotomic(dim, rng);
}

}  // namespace

BellOperator::BellOperator(CorrelationSettings settings)
    : settings_(std::move(settings)), matrix_(build_bell_matrix(settings_)) {}

BellOperator bell_operator(const CorrelationSettings& settings) { return BellOperator(settings); }

double landau_residual(const CorrelationSettings& s) {
  const Matrix r = build_bell_matrix(s);
  const Matrix& a1 = s.a1.matrix();
  const Matrix& a2 = s.a2.matrix();
  const Matrix& b1 = s.b1.matrix();
  const Matrix& b2 = s.b2.matrix();
  const Matrix ca = a1 * a2 - a2 * a1;
  const Matrix cb = b1 * b2 - b2 * b1;
  const Matrix predicted = identity(static_cast<int>(r.rows())) - 0.25 * tensor(ca, cb);
  return operator_norm(r * r - predicted);
}

double chsh_value(const DensityOperator& d, const CorrelationSettings& settings) {
  require_settings_fit(d, settings);
  return expectation(d, build_bell_matrix(settings));
}

double chsh_value(const DensityOperator& d, const BellOperator& r) {
  require_settings_fit(d, r.settings());
  return expectation(d, r.matrix());
}

Matrix effective_left(const DensityOperator& d, const Matrix& b) {
  const auto [d1, d2] = d.dims();
  if (b.rows() != d2 || b.cols() != d2) throw DimensionError("effective_left: B has wrong dim");
  const Matrix& m = d.matrix();
  Matrix e = Matrix::Zero(d1, d1);
  for (int i = 0; i < d1; ++i)
    for (int k = 0; k < d1; ++k) {
      // sum_jl D(i d2 + j, k d2 + l) B(l, j) = Tr(block(i,k) B)
      e(i, k) = trace_product(m.block(i * d2, k * d2, d2, d2), b);
    }
  return 0.5 * (e + e.adjoint());
}

Matrix effective_right(const DensityOperator& d, const Matrix& a) {
  const auto [d1, d2] = d.dims();
  if (a.rows() != d1 || a.cols() != d1) throw DimensionError("effective_right: A has wrong dim");
  const Matrix& m = d.matrix();
  Matrix f = Matrix::Zero(d2, d2);
  for (int i = 0; i < d1; ++i)
    for (int k = 0; k < d1; ++k) {
      if (a(k, i) == Complex(0.0)) continue;
      f += a(k, i) * m.block(i * d2, k * d2, d2, d2);
    }
  return 0.5 * (f + f.adjoint());
}

DichotomicObservable best_dichotomic(const Matrix& h, bool nontrivial) {
  const Spectrum s = eigh(h);
  const Eigen::Index n = s.values.size();
  RealVector signs(n);
  for (Eigen::Index k = 0; k < n; ++k) {
    signs(k) = (std::abs(s.values(k)) < tol::structural || s.values(k) > 0.0) ? 1.0 : -1.0;
  }
  if (nontrivial && n >= 2) {
    // Values ascend, so flipping an end entry costs the least.
    if (signs.minCoeff() > 0.0) signs(0) = -1.0;
    if (signs.maxCoeff() < 0.0) signs(n - 1) = 1.0;
  }
  Matrix a = s.vectors * signs.cast<Complex>().asDiagonal() * s.vectors.adjoint();
  return DichotomicObservable(0.5 * (a + a.adjoint()));
}

BellBoundCertificate certify_settings(const DensityOperator& d, CorrelationSettings settings,
                                      std::string method) {
  const double value = std::abs(chsh_value(d, settings));
  BellBoundCertificate cert{.gamma_lower = std::clamp(value, 0.0, kTsirelson),
                            .settings = std::move(settings),
                            .iterations = 0,
                            .restarts_used = 0,
                            .converged = true,
                            .monotone_trace = {value},
                            .seed = 0,
                            .method = std::move(method)};
  return cert;
}

BellBoundCertificate seesaw_gamma(const DensityOperator& d, const SeesawOptions& options) {
  if (options.restarts < 1) throw std::invalid_argument("seesaw_gamma: restarts must be >= 1");
  if (options.max_iters < 0) throw std::invalid_argument("seesaw_gamma: max_iters must be >= 0");
  const auto [d1, d2] = d.dims();

  std::optional<RunResult> best;
  for (int r = 0; r < options.restarts; ++r) {
    for (int side = 0; side < 2; ++side) {
      const double sign = side == 0 ? 1.0 : -1.0;
      Rng rng = Rng::stream(options.seed, static_cast<std::uint64_t>(2 * r + side));
      CorrelationSettings start{random_start(d1, options.nontrivial, rng),
                                random_start(d1, options.nontrivial, rng),
                                random_start(d2, options.nontrivial, rng),
                                random_start(d2, options.nontrivial, rng)};
      RunResult run = run_seesaw(d, sign, std::move(start), options);
      if (!best || run.value > best->value) best = std::move(run);
    }
  }

  BellBoundCertificate cert = certify_settings(d, std::move(best->settings), "seesaw");
  cert.iterations = best->sweeps;
  cert.restarts_used = options.restarts;
  cert.converged = best->converged;
  cert.monotone_trace = std::move(best->trace);
  cert.seed = options.seed;
  return cert;
}

double horodecki_gamma_2x2(const DensityOperator& d) { return horodecki_optimal_settings(d).gamma; }

OracleSolution horodecki_optimal_settings(const DensityOperator& d) {
  if (!(d.dims() == FactorDims{2, 2})) {
    throw DimensionError("horodecki oracle needs dims (2,2), got " + describe_dims(d.dims()));
  }
  const Matrix sigma[3] = {pauli::x(), pauli::y(), pauli::z()};
  Eigen::Matrix3d t;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) t(i, j) = expectation(d, tensor(sigma[i], sigma[j]));

  Eigen::JacobiSVD<Eigen::Matrix3d> svd(t, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const Eigen::Vector3d s = svd.singularValues();
  const Eigen::Matrix3d& u = svd.matrixU();
  const Eigen::Matrix3d& v = svd.matrixV();
  const double gamma = std::hypot(s(0), s(1));
  const double theta = gamma > 0.0 ? std::atan2(s(1), s(0)) : std::numbers::pi / 4.0;

  const Eigen::Vector3d b1 = std::cos(theta) * v.col(0) + std::sin(theta) * v.col(1);
  const Eigen::Vector3d b2 = std::cos(theta) * v.col(0) - std::sin(theta) * v.col(1);
  CorrelationSettings settings{DichotomicObservable(qubit_observable(u.col(0))),
                               DichotomicObservable(qubit_observable(u.col(1))),
                               DichotomicObservable(qubit_observable(b1)),
                               DichotomicObservable(qubit_observable(b2))};
  return {gamma, std::move(settings)};
}

double prop3_bound(int d1) {
  if (d1 < 2) throw std::invalid_argument("prop3_bound: d1 must be >= 2");
  return 1.0 - 2.0 / d1;
}

double safe_radius(double gamma) {
  if (!(gamma >= 0.0 && gamma <= kTsirelson + tol::assertion)) {
    throw std::invalid_argument("safe_radius: gamma must lie in [0, sqrt 2]");
  }
  return std::max(0.0, (1.0 - gamma) / kTsirelson);
}

Matrix compress_bell(const BellOperator& r, const Projection& p, const Projection& q) {
  const FactorDims dims = r.settings().dims();
  if (p.dim() != dims.d1 || q.dim() != dims.d2) {
    throw DimensionError("compress_bell: projections do not match Bell operator dims " +
                         describe_dims(dims));
  }
  const Matrix pq = tensor(p.matrix(), q.matrix());
  return pq * r.matrix() * pq;
}

}  // namespace bellmetric

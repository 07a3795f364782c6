#include "bellmetric/constructions.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "bellmetric/states.hpp"

namespace bellmetric {
namespace {

void require_n(int n, const char* what) {
  if (n < 1) throw DimensionError(std::string(what) + ": n must be >= 1");
}

/// V a V* + (I - V V*): a qubit observable on ran V, identity elsewhere.
DichotomicObservable embed_qubit(const DichotomicObservable& a, const Matrix& isometry) {
  const int d = static_cast<int>(isometry.rows());
  Matrix m = isometry * a.matrix() * isometry.adjoint() +
             (identity(d) - isometry * isometry.adjoint());
  return DichotomicObservable(0.5 * (m + m.adjoint()));
}

CorrelationSettings embed_settings(const CorrelationSettings& qubit, const Matrix& left,
                                   const Matrix& right) {
  return {embed_qubit(qubit.a1, left), embed_qubit(qubit.a2, left),
          embed_qubit(qubit.b1, right), embed_qubit(qubit.b2, right)};
}

Matrix basis_isometry(int dim, int first, int second) {
  Matrix v = Matrix::Zero(dim, 2);
  v(first, 0) = 1.0;
  v(second, 1) = 1.0;
  return v;
}

/// Orthonormal basis of ran(Q) as columns, for a rank-two projection.
Matrix range_isometry(const Projection& q) {
  const Spectrum s = eigh(q.matrix());
  return s.vectors.rightCols(2);
}

DensityOperator mix(double weight, const DensityOperator& a, const DensityOperator& b) {
  Matrix m = (1.0 - weight) * a.matrix() + weight * b.matrix();
  m = 0.5 * (m + m.adjoint()).eval();
  return DensityOperator(std::move(m), a.dims());
}

BellBoundCertificate certify_filtered(const DensityOperator& filtered, const Projection& q1,
                                      const Projection& q2, const SeesawOptions& options) {
  BellBoundCertificate best = seesaw_gamma(filtered, options);
  if (q1.rank() == 2 && q2.rank() == 2) {
    const Matrix v1 = range_isometry(q1);
    const Matrix v2 = range_isometry(q2);
    const Matrix v = tensor(v1, v2);
    Matrix block = v.adjoint() * filtered.matrix() * v;
    block /= block.trace().real();
    block = 0.5 * (block + block.adjoint()).eval();
    const OracleSolution oracle = horodecki_optimal_settings(DensityOperator(block, {2, 2}));
    BellBoundCertificate embedded =
        certify_settings(filtered, embed_settings(oracle.settings, v1, v2), "oracle");
    if (embedded.gamma_lower > best.gamma_lower) {
      embedded.restarts_used = best.restarts_used;
      embedded.seed = best.seed;
      best = std::move(embedded);
    }
  }
  return best;
}

}  // namespace

bool prop1_fits(FactorDims dims, int n) { return n >= 1 && dims.d1 >= n + 2 && dims.d2 >= n + 2; }

bool prop2_fits(FactorDims dims, int n) { return n >= 1 && dims.d1 >= 2 && dims.d2 >= n + 2; }

SequenceStep prop1_step(const DensityOperator& target, int n) {
  require_n(n, "prop1_step");
  const FactorDims dims = target.dims();
  if (!prop1_fits(dims, n)) {
    std::ostringstream os;
    os << "prop1_step: dims " << describe_dims(dims) << " leave no room for two tail vectors at n = "
       << n << " (need both dims >= " << n + 2 << ")";
    throw DimensionError(os.str());
  }
  const double s = 1.0 / std::numbers::sqrt2;
  // psi_n on e_{n+1} f_{n+1}, e_{n+2} f_{n+2} (one-based).
  const DensityOperator tail = projector(two_level_pure(dims.d1, dims.d2, {n, n}, {n + 1, n + 1}, s, s));
  const DensityOperator truncated = truncate(target, n);
  DensityOperator state = mix(1.0 / n, truncated, tail);

  const DensityOperator phi_plus = projector(two_level_pure(2, 2, {0, 0}, {1, 1}, s, s));
  const OracleSolution qubit = horodecki_optimal_settings(phi_plus);
  CorrelationSettings settings = embed_settings(qubit.settings, basis_isometry(dims.d1, n, n + 1),
                                                basis_isometry(dims.d2, n, n + 1));
  BellBoundCertificate cert = certify_settings(state, std::move(settings), "explicit");

  const double distance = trace_norm(state.matrix() - target.matrix());
  return SequenceStep{.n = n,
                      .state = std::move(state),
                      .witness = std::move(cert),
                      .distance_to_target = distance,
                      .gamma_ceiling = std::nullopt,
                      .flip_witness = std::nullopt};
}

SequenceStep prop2_step(const DensityOperator& target, int n, const SeesawOptions& options) {
  require_n(n, "prop2_step");
  const FactorDims dims = target.dims();
  if (!prop2_fits(dims, n)) {
    std::ostringstream os;
    os << "prop2_step: dims " << describe_dims(dims) << " too small at n = " << n
       << " (need d1 >= 2 and d2 >= " << n + 2 << ")";
    throw DimensionError(os.str());
  }
  const double s = 1.0 / std::numbers::sqrt2;
  // psi'_n on e_1 f_{n+1}, e_2 f_{n+2} (one-based).
  const DensityOperator tail = projector(two_level_pure(dims.d1, dims.d2, {0, n}, {1, n + 1}, s, s));
  const DensityOperator truncated = truncate(target, dims.d1, n);
  DensityOperator state = mix(1.0 / n, truncated, tail);

  const int left[] = {0, 1};
  const int right[] = {n, n + 1};
  Projection q1 = basis_projection(dims.d1, left);
  Projection q2 = basis_projection(dims.d2, right);
  DensityOperator filtered = condition(state, tensor(q1.matrix(), q2.matrix()));
  BellBoundCertificate cert = certify_filtered(filtered, q1, q2, options);

  const double distance = trace_norm(state.matrix() - target.matrix());
  FilterViolation violation{std::move(q1), std::move(q2), std::move(filtered), std::move(cert)};
  return SequenceStep{.n = n,
                      .state = std::move(state),
                      .witness = std::move(violation),
                      .distance_to_target = distance,
                      .gamma_ceiling = std::nullopt,
                      .flip_witness = std::nullopt};
}

SequenceStep prop6_step(const DensityOperator& wprime, const DensityOperator& d, int n,
                        GammaEvidence evidence, const SeesawOptions& options) {
  require_n(n, "prop6_step");
  if (!(wprime.dims() == d.dims())) {
    throw DimensionError("prop6_step: W' has dims " + describe_dims(wprime.dims()) +
                         " but D has dims " + describe_dims(d.dims()));
  }
  DensityOperator state = mix(1.0 / n, wprime, d);
  const double w = 1.0 / n;
  const double ceiling = (1.0 - w) * evidence.wprime_upper + w * evidence.d_upper;

  std::optional<double> flip;
  const FactorDims dims = state.dims();
  if (dims.d1 >= 2 && dims.d2 >= 2) flip = expectation(state, flip_operator(dims.d1, dims.d2));

  BellBoundCertificate cert = seesaw_gamma(state, options);
  const double distance = trace_norm(state.matrix() - wprime.matrix());
  return SequenceStep{.n = n,
                      .state = std::move(state),
                      .witness = std::move(cert),
                      .distance_to_target = distance,
                      .gamma_ceiling = ceiling,
                      .flip_witness = flip};
}

HiddenNonlocalityResult hidden_nonlocality_check(const DensityOperator& d, const Projection& q1,
                                                 const Projection& q2,
                                                 const SeesawOptions& options) {
  const FactorDims dims = d.dims();
  if (q1.dim() != dims.d1 || q2.dim() != dims.d2) {
    throw DimensionError("hidden_nonlocality_check: filters do not match dims " +
                         describe_dims(dims));
  }
  DensityOperator filtered = condition(d, tensor(q1.matrix(), q2.matrix()));
  BellBoundCertificate cert = certify_filtered(filtered, q1, q2, options);
  if (cert.gamma_lower > 1.0 + tol::assertion) {
    return FilterViolation{q1, q2, std::move(filtered), std::move(cert)};
  }
  return NoViolationFound{std::move(filtered), std::move(cert)};
}

double negativity(const DensityOperator& d) {
  const Matrix pt = partial_transpose(d.matrix(), d.dims(), Factor::right);
  const RealVector values = eigh(0.5 * (pt + pt.adjoint())).values;
  double sum = 0.0;
  for (Eigen::Index k = 0; k < values.size(); ++k) {
    if (values(k) < 0.0) sum -= values(k);
  }
  return sum;
}

std::vector<PathPoint> appendix_b_path(std::span<const double> lambda_grid, int tail_terms,
                                       const SeesawOptions& options) {
  const AppendixBDims dims = appendix_b_dims(tail_terms);
  for (double lambda : lambda_grid) {
    if (!(lambda >= 0.0 && lambda <= 1.0)) {
      throw std::invalid_argument("appendix_b_path: grid values must lie in [0, 1]");
    }
  }
  const int keep[] = {0, 1};
  const PureVector v0 = appendix_b_vector(0.0, tail_terms, dims);
  const DensityOperator endpoint = reduced(v0, keep);

  std::vector<PathPoint> points;
  points.reserve(lambda_grid.size());
  for (double lambda : lambda_grid) {
    const PureVector v = appendix_b_vector(lambda, tail_terms, dims);
    const DensityOperator rho = reduced(v, keep);
    BellBoundCertificate cert = seesaw_gamma(rho, options);
    PathPoint point{.lambda = lambda,
                    .distance = trace_norm(rho.matrix() - endpoint.matrix()),
                    .vector_distance = (v.amplitudes() - v0.amplitudes()).norm(),
                    .gamma_lower = cert.gamma_lower,
                    .negativity = negativity(rho),
                    .certificate = std::move(cert)};
    points.push_back(std::move(point));
  }
  return points;
}

}  // namespace bellmetric

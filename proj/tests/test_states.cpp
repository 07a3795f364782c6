#include <array>
#include <cmath>

#include "bellmetric/operator.hpp"
#include "bellmetric/random.hpp"
#include "bellmetric/states.hpp"
#include "doctest.h"
#include "support.hpp"

using namespace bellmetric;
using testing_support::gap;

namespace {

bool is_product(const DensityOperator& d, double tol) {
  const Matrix a = partial_trace(d.matrix(), d.dims(), Factor::left);
  const Matrix b = partial_trace(d.matrix(), d.dims(), Factor::right);
  return gap(tensor(a, b), d.matrix()) <= tol;
}

void check_density(const DensityOperator& d) {
  CHECK(std::abs(d.matrix().trace().real() - 1.0) <= 1e-10);
  CHECK(hermiticity_defect(d.matrix()) <= 1e-12);
  CHECK(eigh(d.matrix()).values(0) >= -1e-10);
}

}  // namespace

TEST_CASE("maximally mixed") {
  const DensityOperator m = maximally_mixed(2, 2);
  CHECK(gap(m.matrix(), identity(4) / 4.0) == 0.0);
  check_density(maximally_mixed(3, 5));
  CHECK(maximally_mixed(3, 5).dim() == 15);
  CHECK(gap(partial_trace(maximally_mixed(3, 5).matrix(), {3, 5}, Factor::left),
            identity(3) / 3.0) <= 1e-15);
  CHECK_THROWS_AS(maximally_mixed(0, 2), DimensionError);
}

TEST_CASE("two-level pure vectors") {
  const double s = 1.0 / std::sqrt(2.0);
  const int n = 3;
  const PureVector psi = two_level_pure(6, 6, {n, n}, {n + 1, n + 1}, s, s);
  CHECK(psi.amplitudes()(n * 6 + n) == Complex(s, 0.0));
  CHECK(psi.amplitudes()((n + 1) * 6 + n + 1) == Complex(s, 0.0));
  CHECK(std::abs(psi.amplitudes().norm() - 1.0) <= 1e-15);

  const PureVector basis = two_level_pure(3, 4, {1, 2}, {0, 0}, 1.0, 0.0);
  CHECK(basis.amplitudes()(1 * 4 + 2) == Complex(1.0, 0.0));
  const DensityOperator pb = projector(basis);
  CHECK(is_product(pb, 1e-15));

  const PureVector psi_prime = two_level_pure(3, 16, {0, n}, {1, n + 1}, s, s);
  CHECK(psi_prime.amplitudes()(0 * 16 + n) == Complex(s, 0.0));
  CHECK(psi_prime.amplitudes()(1 * 16 + n + 1) == Complex(s, 0.0));

  CHECK_THROWS_AS(two_level_pure(2, 2, {0, 0}, {0, 0}, s, s), DimensionError);
  CHECK_THROWS_AS(two_level_pure(2, 2, {0, 2}, {1, 1}, s, s), DimensionError);
  CHECK_THROWS_AS(two_level_pure(2, 2, {0, 0}, {1, 1}, 1.0, 1.0), InvariantError);
}

TEST_CASE("singlet projector") {
  const DensityOperator p = singlet_projector();
  check_density(p);
  const Eigen::FullPivLU<Matrix> lu(p.matrix());
  CHECK(lu.rank() == 1);
  CHECK(gap(partial_trace(p.matrix(), {2, 2}, Factor::left), identity(2) / 2.0) <= 1e-15);
  CHECK(gap(partial_trace(p.matrix(), {2, 2}, Factor::right), identity(2) / 2.0) <= 1e-15);
  const std::array<Matrix, 3> sigma{pauli::x(), pauli::y(), pauli::z()};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      const double expected = i == j ? -1.0 : 0.0;
      CHECK(std::abs(expectation(p, tensor(sigma[i], sigma[j])) - expected) <= 1e-12);
    }
}

TEST_CASE("werner22") {
  const DensityOperator w = werner22();
  check_density(w);
  const Matrix u = flip_operator(2, 2);
  CHECK(std::abs(expectation(w, u) + 0.25) <= 1e-12);
  const Matrix other_form = identity(4) / 8.0 + singlet_projector().matrix() / 2.0;
  CHECK(gap(w.matrix(), other_form) <= 1e-12);
  const Spectrum s = eigh(w.matrix());
  CHECK(std::abs(s.values(0) - 0.125) <= 1e-12);
  CHECK(std::abs(s.values(1) - 0.125) <= 1e-12);
  CHECK(std::abs(s.values(2) - 0.125) <= 1e-12);
  CHECK(std::abs(s.values(3) - 0.625) <= 1e-12);
}

TEST_CASE("werner22 filtered by rank-one projections is a product state") {
  Rng rng(21);
  for (int trial = 0; trial < 20; ++trial) {
    const Vector a = random_unit_vector(2, rng);
    const Vector b = random_unit_vector(2, rng);
    const Matrix q = tensor(a * a.adjoint(), b * b.adjoint());
    CHECK(is_product(condition(werner22(), q), 1e-10));
  }
}

TEST_CASE("flip operator") {
  const Matrix u = flip_operator(2, 2);
  CHECK(gap(u * u, identity(4)) == 0.0);
  CHECK(std::abs(u.trace() - Complex(2.0, 0.0)) == 0.0);
  CHECK(hermiticity_defect(u) == 0.0);
  // U (e_i (x) f_j) = e_j (x) f_i
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) CHECK(u(j * 2 + i, i * 2 + j) == Complex(1.0, 0.0));

  const Matrix up = flip_operator(3, 4);
  CHECK(up.rows() == 12);
  CHECK(std::abs(up.trace() - Complex(2.0, 0.0)) == 0.0);
  CHECK(up.cwiseAbs().sum() == 4.0);

  const Matrix moved = flip_operator(4, 4, FlipBlock{{2, 3}, {1, 3}});
  CHECK(moved(3 * 4 + 1, 2 * 4 + 3) == Complex(1.0, 0.0));
  CHECK_THROWS_AS(flip_operator(2, 2, FlipBlock{{0, 0}, {0, 1}}), DimensionError);
  CHECK_THROWS_AS(flip_operator(2, 2, FlipBlock{{0, 2}, {0, 1}}), DimensionError);
}

TEST_CASE("separable states have nonnegative flip expectation") {
  Rng rng(22);
  const Matrix u = flip_operator(2, 2);
  for (int k = 0; k < 50; ++k) {
    const DensityOperator d = random_separable({2, 2}, 1 + k % 10, rng);
    CHECK(expectation(d, u) >= -1e-9);
  }
}

TEST_CASE("embedded werner") {
  CHECK(gap(embedded_werner(2, 2).matrix(), werner22().matrix()) <= 1e-15);
  const DensityOperator w = embedded_werner(3, 4);
  check_density(w);
  CHECK(std::abs(expectation(w, flip_operator(3, 4)) + 0.25) <= 1e-12);
  const Matrix pq =
      tensor(leading_projection(3, 2).matrix(), leading_projection(4, 2).matrix());
  CHECK(gap(pq * w.matrix() * pq, w.matrix()) == 0.0);
  CHECK_THROWS_AS(embedded_werner(1, 4), DimensionError);
}

TEST_CASE("conditioning") {
  Rng rng(23);
  const DensityOperator d = random_density({3, 2}, rng);
  CHECK(gap(condition(d, identity(6)).matrix(), d.matrix()) <= 1e-14);

  const DensityOperator d1 = random_local_density(3, rng);
  const DensityOperator d2 = random_local_density(2, rng);
  const DensityOperator prod(tensor(d1.matrix(), d2.matrix()), {3, 2});
  const Matrix a = random_ginibre(3, 3, rng);
  const Matrix b = random_ginibre(2, 2, rng);
  const Matrix d1a = a * d1.matrix() * a.adjoint();
  const Matrix d2b = b * d2.matrix() * b.adjoint();
  const Matrix expected = tensor(d1a / d1a.trace(), d2b / d2b.trace());
  CHECK(gap(condition(prod, tensor(a, b)).matrix(), expected) <= 1e-12);

  const DensityOperator pure = projector(two_level_pure(2, 2, {0, 0}, {1, 1}, 1.0, 0.0));
  const Matrix orth = tensor(leading_projection(2, 1).matrix(), Matrix(pauli::z() - identity(2)));
  CHECK_THROWS_AS(condition(pure, orth), NullConditioning);
  CHECK_THROWS_AS(condition(d, identity(4)), DimensionError);
}

TEST_CASE("conditioning a mixture reweights its components") {
  Rng rng(24);
  const FactorDims dims{2, 3};
  std::vector<DensityOperator> parts;
  std::vector<double> weights{0.2, 0.5, 0.3};
  for (int k = 0; k < 3; ++k) parts.push_back(random_density(dims, rng));
  Matrix mix = Matrix::Zero(6, 6);
  for (int k = 0; k < 3; ++k) mix += weights[k] * parts[k].matrix();
  const DensityOperator d(mix, dims);
  const Matrix a = random_ginibre(6, 6, rng);

  double norm = 0.0;
  std::vector<double> traces;
  for (int k = 0; k < 3; ++k) {
    traces.push_back((a * parts[k].matrix() * a.adjoint()).trace().real());
    norm += weights[k] * traces[k];
  }
  Matrix recombined = Matrix::Zero(6, 6);
  double total = 0.0;
  for (int k = 0; k < 3; ++k) {
    const double w = weights[k] * traces[k] / norm;
    total += w;
    recombined += w * condition(parts[k], a).matrix();
  }
  CHECK(std::abs(total - 1.0) <= 1e-10);
  CHECK(gap(condition(d, a).matrix(), recombined) <= 1e-10);
}

TEST_CASE("conditioning is trace-norm continuous") {
  Rng rng(25);
  const DensityOperator d = random_density({2, 3}, rng);
  const Matrix a = random_ginibre(6, 6, rng);
  const DensityOperator noise = random_density({2, 3}, rng);
  double previous = 1e300;
  for (double delta : {1e-1, 1e-2, 1e-3, 1e-4, 1e-5}) {
    const DensityOperator e((1.0 - delta) * d.matrix() + delta * noise.matrix(), d.dims());
    const double moved = trace_norm(condition(d, a).matrix() - condition(e, a).matrix());
    CHECK(moved < previous);
    previous = moved;
  }
  CHECK(previous < 1e-3);
}

TEST_CASE("truncation") {
  Rng rng(26);
  const DensityOperator small = random_density({2, 2}, rng);
  Matrix embedded = Matrix::Zero(16, 16);
  const std::array<int, 4> idx{0, 1, 4, 5};
  for (int r = 0; r < 4; ++r)
    for (int c = 0; c < 4; ++c) embedded(idx[r], idx[c]) = small.matrix()(r, c);
  const DensityOperator d(embedded, {4, 4});
  CHECK(gap(truncate(d, 2).matrix(), d.matrix()) <= 1e-14);

  const DensityOperator full = random_density({16, 16}, rng);
  double previous = 1e300;
  for (int n : {2, 4, 8, 12, 15, 16}) {
    const double dist = trace_norm(truncate(full, n).matrix() - full.matrix());
    CHECK(dist < previous);
    previous = dist;
  }
  CHECK(previous <= 1e-10);

  const DensityOperator far = projector(two_level_pure(4, 4, {3, 3}, {2, 3}, 1.0, 0.0));
  CHECK_THROWS_AS(truncate(far, 2), NullConditioning);
  CHECK_THROWS_AS(truncate(full, 17), DimensionError);
  CHECK_THROWS_AS(truncate(full, 0), DimensionError);
  CHECK(truncate(full, 3, 5).dims() == FactorDims{16, 16});
}

TEST_CASE("reduced states") {
  Rng rng(27);
  const Vector a = random_unit_vector(2, rng);
  const Vector b = random_unit_vector(3, rng);
  const Vector c = random_unit_vector(2, rng);
  Vector prod(12);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 2; ++k) prod((i * 3 + j) * 2 + k) = a(i) * b(j) * c(k);
  const PureVector x({2, 3, 2}, prod);
  const std::array<int, 2> keep01{0, 1};
  const DensityOperator r = reduced(x, keep01);
  CHECK(Eigen::FullPivLU<Matrix>(r.matrix()).setThreshold(1e-10).rank() == 1);
  CHECK(gap(r.matrix(), tensor(a * a.adjoint(), b * b.adjoint())) <= 1e-12);

  const std::array<int, 1> keep2{2};
  CHECK(gap(reduced(x, keep2).matrix(), c * c.adjoint()) <= 1e-12);

  const int n = 3;
  const double s = 1.0 / std::sqrt(2.0);
  const PureVector psi = two_level_pure(6, 6, {n, n}, {n + 1, n + 1}, s, s);
  const std::array<int, 1> keep0{0};
  Matrix expected = Matrix::Zero(6, 6);
  expected(n, n) = 0.5;
  expected(n + 1, n + 1) = 0.5;
  CHECK(gap(reduced(psi, keep0).matrix(), expected) <= 1e-15);

  const std::array<int, 2> unsorted{1, 0};
  CHECK_THROWS_AS(reduced(x, unsorted), DimensionError);
  const std::array<int, 1> outside{3};
  CHECK_THROWS_AS(reduced(x, outside), DimensionError);
}

TEST_CASE("reduced state of a filtered vector is the conditioned state") {
  Rng rng(28);
  const Vector v = random_unit_vector(3 * 2 * 4, rng);
  const PureVector x({3, 2, 4}, v);
  const std::array<int, 2> keep{0, 1};
  const DensityOperator d = reduced(x, keep);
  const std::array<int, 2> span{0, 2};
  const Matrix p = tensor(basis_projection(3, span).matrix(), identity(2));
  const Vector lifted = tensor(p, identity(4)) * v;
  const PureVector y({3, 2, 4}, lifted / lifted.norm());
  CHECK(gap(reduced(y, keep).matrix(), condition(d, p).matrix()) <= 1e-10);
}

TEST_CASE("appendix B vectors") {
  const AppendixBDims dims = appendix_b_dims(8);
  CHECK(dims.d1 == 18);
  CHECK(dims.d2 == 2);
  CHECK(dims.d3 == 8);
  CHECK(appendix_b_dims(2).d3 == 4);

  const PureVector v0 = appendix_b_v0(dims);
  const PureVector u = appendix_b_u(8, dims);
  CHECK(std::abs(v0.amplitudes().dot(u.amplitudes())) == 0.0);
  CHECK(gap(appendix_b_vector(0.0, 8).amplitudes(), v0.amplitudes()) == 0.0);
  for (double lambda : {0.1, 0.5, 1.0}) {
    CHECK(std::abs(appendix_b_vector(lambda, 8).amplitudes().norm() - 1.0) <= 1e-10);
  }
  CHECK(gap(appendix_b_vector(1.0, 8).amplitudes(), u.amplitudes()) <= 1e-15);

  // (1/4) P (x) I with P onto span{e_0, e_1}
  const std::array<int, 2> keep{0, 1};
  const DensityOperator phi0 = reduced(v0, keep);
  Matrix expected = Matrix::Zero(36, 36);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) expected(i * 2 + j, i * 2 + j) = 0.25;
  CHECK(gap(phi0.matrix(), expected) <= 1e-10);

  // unnormalized tail weights: term n carries 2 * 2^{-(n+1)} = 2^{-n}
  const double raw_norm = std::sqrt(1.0 - std::pow(2.0, -8));
  const double first = std::pow(2.0, -1.0) / raw_norm;
  CHECK(std::abs(u.amplitudes()((2 * 2 + 0) * 8 + 0).real() - first) <= 1e-15);

  CHECK_THROWS_AS(appendix_b_vector(1.5, 8), std::invalid_argument);
  CHECK_THROWS_AS(appendix_b_vector(0.1, 8, AppendixBDims{10, 2, 8}), DimensionError);
  CHECK_THROWS_AS(appendix_b_dims(0), DimensionError);
}

#include <array>
#include <cmath>

#include "bellmetric/operator.hpp"
#include "bellmetric/random.hpp"
#include "bellmetric/states.hpp"
#include "doctest.h"
#include "support.hpp"

using namespace bellmetric;
using testing_support::diag;
using testing_support::gap;

TEST_CASE("tensor products") {
  CHECK(gap(tensor(identity(2), identity(2)), identity(4)) == 0.0);
  CHECK(gap(tensor(diag({1, -1}), identity(2)), diag({1, 1, -1, -1})) == 0.0);

  Rng rng(11);
  const Matrix a = random_ginibre(3, 3, rng);
  const Matrix b = random_ginibre(3, 3, rng);
  CHECK(std::abs(tensor(a, b).trace() - a.trace() * b.trace()) < 1e-10);

  // entry (i*3+j, k*3+l) is a_ik b_jl
  const Matrix t = tensor(a, b);
  CHECK(std::abs(t(1 * 3 + 2, 0 * 3 + 1) - a(1, 0) * b(2, 1)) < 1e-15);

  const Matrix rect = random_ginibre(2, 3, rng);
  const Matrix tr = tensor(rect, identity(2));
  CHECK(tr.rows() == 4);
  CHECK(tr.cols() == 6);
}

TEST_CASE("partial trace") {
  Rng rng(12);
  const DensityOperator d1 = random_local_density(3, rng);
  const DensityOperator d2 = random_local_density(4, rng);
  const Matrix prod = tensor(d1.matrix(), d2.matrix());
  CHECK(gap(partial_trace(prod, {3, 4}, Factor::left), d1.matrix()) <= 1e-10);
  CHECK(gap(partial_trace(prod, {3, 4}, Factor::right), d2.matrix()) <= 1e-10);

  const DensityOperator reduced = partial_trace(singlet_projector(), Factor::left);
  CHECK(gap(reduced.matrix(), identity(2) / 2.0) <= 1e-12);
  CHECK(reduced.dims() == FactorDims{2, 1});

  // hand-rolled contraction as oracle on a non-product state
  const DensityOperator d = random_density({2, 3}, rng);
  Matrix left = Matrix::Zero(2, 2);
  for (int i = 0; i < 2; ++i)
    for (int k = 0; k < 2; ++k)
      for (int j = 0; j < 3; ++j) left(i, k) += d.matrix()(i * 3 + j, k * 3 + j);
  CHECK(gap(partial_trace(d.matrix(), {2, 3}, Factor::left), left) <= 1e-14);

  CHECK_THROWS_AS(partial_trace(identity(5), {2, 3}, Factor::left), DimensionError);
}

TEST_CASE("partial transpose") {
  const Matrix pt = partial_transpose(singlet_projector().matrix(), {2, 2}, Factor::right);
  const Spectrum s = eigh(pt);
  CHECK(s.values(0) == doctest::Approx(-0.5).epsilon(1e-12));
  CHECK(s.values(3) == doctest::Approx(0.5).epsilon(1e-12));

  Rng rng(13);
  const Matrix m = random_ginibre(6, 6, rng);
  const Matrix twice =
      partial_transpose(partial_transpose(m, {2, 3}, Factor::left), {2, 3}, Factor::left);
  CHECK(gap(twice, m) == 0.0);
  const Matrix both =
      partial_transpose(partial_transpose(m, {2, 3}, Factor::left), {2, 3}, Factor::right);
  CHECK(gap(both, m.transpose()) == 0.0);
}

TEST_CASE("trace norm") {
  CHECK(trace_norm(identity(2)) == doctest::Approx(2.0));
  const DensityOperator w = werner22();
  CHECK(trace_norm(w.matrix() - w.matrix()) == 0.0);
  // eigenvalues {3/4, -1/4, -1/4, -1/4}
  CHECK(trace_norm(singlet_projector().matrix() - identity(4) / 4.0) ==
        doctest::Approx(1.5).epsilon(1e-12));

  Rng rng(14);
  const Matrix g = random_ginibre(4, 4, rng);
  const Matrix h = g + g.adjoint();
  Eigen::JacobiSVD<Matrix> svd(h);
  CHECK(trace_norm(h) == doctest::Approx(svd.singularValues().sum()).epsilon(1e-12));
  CHECK(trace_norm(g) == doctest::Approx(Eigen::JacobiSVD<Matrix>(g).singularValues().sum()));
  CHECK(operator_norm(diag({0.5, -3.0, 1.0})) == doctest::Approx(3.0));
}

TEST_CASE("expectation") {
  Rng rng(15);
  const DensityOperator d = random_density({2, 3}, rng);
  CHECK(expectation(d, identity(6)) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(expectation(werner22(), flip_operator(2, 2)) == doctest::Approx(-0.25).epsilon(1e-12));
  CHECK(std::abs(expectation(maximally_mixed(2, 2), tensor(pauli::z(), pauli::z()))) < 1e-15);
  CHECK_THROWS_AS(expectation(d, identity(4)), DimensionError);
}

TEST_CASE("spectral sign") {
  CHECK(gap(spectral_sign(pauli::z()).matrix(), pauli::z()) <= 1e-12);
  const DichotomicObservable zero = spectral_sign(Matrix::Zero(3, 3));
  CHECK(gap(zero.matrix(), identity(3)) <= 1e-12);
  CHECK_FALSE(zero.nontrivial());
  CHECK(gap(spectral_sign(diag({2, -3})).matrix(), diag({1, -1})) <= 1e-12);
  CHECK(spectral_sign(diag({2, -3})).nontrivial());
  Rng rng(1);
  CHECK_THROWS_AS(spectral_sign(random_ginibre(3, 3, rng)), InvariantError);
}

TEST_CASE("spectral sign squares to identity on random Hermitians") {
  Rng rng(16);
  for (int trial = 0; trial < 50; ++trial) {
    const int dim = 2 + trial % 6;
    const Matrix a = spectral_sign(random_hermitian(dim, rng)).matrix();
    CHECK(gap(a * a, identity(dim)) <= 1e-9);
    CHECK(hermiticity_defect(a) <= 1e-12);
  }
}

TEST_CASE("eigh contract") {
  Rng rng(17);
  for (int dim : {2, 5, 16}) {
    const Matrix h = random_hermitian(dim, rng);
    const Spectrum s = eigh(h);
    for (int k = 1; k < dim; ++k) CHECK(s.values(k - 1) <= s.values(k));
    CHECK(gap(s.vectors.adjoint() * s.vectors, identity(dim)) <= 1e-12);
    const double scale = operator_norm(h);
    for (int k = 0; k < dim; ++k) {
      const Vector residual = h * s.vectors.col(k) - s.values(k) * s.vectors.col(k);
      CHECK(residual.norm() <= 1e-9 * scale);
    }
  }
}

TEST_CASE("trace-norm duality bound") {
  Rng rng(18);
  for (int pair = 0; pair < 5; ++pair) {
    const DensityOperator d = random_density({2, 3}, rng);
    const DensityOperator e = random_density({2, 3}, rng);
    const double dist = trace_norm(d.matrix() - e.matrix());
    for (int k = 0; k < 100; ++k) {
      const Matrix a = random_contraction(6, rng);
      CHECK(std::abs(expectation(d, a) - expectation(e, a)) <=
            dist * operator_norm(a) + 1e-12);
    }
  }
}

TEST_CASE("density operator validation") {
  CHECK_NOTHROW(DensityOperator(identity(4) / 4.0, {2, 2}));
  CHECK_THROWS_AS(DensityOperator(identity(4) / 4.0, {2, 3}), DimensionError);
  CHECK_THROWS_AS(DensityOperator(identity(4) / 2.0, {2, 2}), InvariantError);
  CHECK_THROWS_AS(DensityOperator(diag({1.5, -0.5}), {2, 1}), InvariantError);
  Matrix skew = identity(2) / 2.0;
  skew(0, 1) = Complex(0.0, 0.1);
  CHECK_THROWS_AS(DensityOperator(skew, {2, 1}), InvariantError);
  Matrix nan = identity(2) / 2.0;
  nan(0, 0) = std::nan("");
  CHECK_THROWS(DensityOperator(nan, {2, 1}));
  CHECK_THROWS_AS(DensityOperator(Matrix::Zero(2, 3), {2, 1}), DimensionError);
}

TEST_CASE("dichotomic observable validation") {
  CHECK(DichotomicObservable(pauli::x()).nontrivial());
  CHECK_FALSE(DichotomicObservable(identity(2)).nontrivial());
  CHECK_FALSE(DichotomicObservable(-identity(3)).nontrivial());
  CHECK_THROWS_AS(DichotomicObservable(diag({1.0, 0.5})), InvariantError);
  CHECK_THROWS_AS(DichotomicObservable(Matrix::Zero(2, 3)), DimensionError);
}

TEST_CASE("projections") {
  const std::array<int, 2> idx{1, 3};
  const Projection p = basis_projection(4, idx);
  CHECK(p.rank() == 2);
  CHECK(idempotence_defect(p.matrix()) == 0.0);
  CHECK(leading_projection(5, 3).rank() == 3);
  CHECK(leading_projection(5, 0).rank() == 0);
  const std::array<int, 1> bad{4};
  CHECK_THROWS_AS(basis_projection(4, bad), DimensionError);
  CHECK_THROWS_AS(Projection(diag({1.0, 0.5})), InvariantError);
}

TEST_CASE("pure vectors and projectors") {
  Vector v = Vector::Zero(4);
  v(1) = 1.0 / std::sqrt(2.0);
  v(2) = -1.0 / std::sqrt(2.0);
  const PureVector x({2, 2}, v);
  const DensityOperator p = projector(x);
  CHECK(gap(p.matrix(), singlet_projector().matrix()) <= 1e-15);
  CHECK(std::abs(p.matrix().trace() - 1.0) <= 1e-15);
  CHECK_THROWS_AS(PureVector({2, 2}, 2.0 * v), InvariantError);
  CHECK_THROWS_AS(PureVector({2, 3}, v), DimensionError);
  CHECK_THROWS_AS(projector(PureVector({2, 1, 2}, v)), DimensionError);
}

TEST_CASE("defect helpers") {
  CHECK(hermiticity_defect(pauli::y()) == 0.0);
  CHECK(involution_defect(pauli::y()) <= 1e-15);
  CHECK(all_finite(identity(3)));
  Matrix inf = identity(2);
  inf(1, 0) = std::numeric_limits<double>::infinity();
  CHECK_FALSE(all_finite(inf));
  CHECK(describe_dims({3, 5}) == "(3,5)");
}

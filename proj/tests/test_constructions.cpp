#include <array>
#include <cmath>

#include "bellmetric/constructions.hpp"
#include "bellmetric/random.hpp"
#include "bellmetric/states.hpp"
#include "doctest.h"
#include "support.hpp"

using namespace bellmetric;
using testing_support::gap;
using testing_support::kSqrt2;

namespace {

void check_step_state(const SequenceStep& step, const DensityOperator& target) {
  CHECK(std::abs(step.state.matrix().trace().real() - 1.0) <= 1e-10);
  CHECK(eigh(step.state.matrix()).values(0) >= -1e-10);
  CHECK(step.distance_to_target ==
        doctest::Approx(trace_norm(step.state.matrix() - target.matrix())).epsilon(1e-12));
}

}  // namespace

TEST_CASE("prop 1 step values") {
  Rng rng(51);
  const DensityOperator target = random_density({8, 8}, rng);
  for (int n = 1; n <= 6; ++n) {
    const SequenceStep step = prop1_step(target, n);
    check_step_state(step, target);
    const auto& cert = std::get<BellBoundCertificate>(step.witness);
    const double expected = 1.0 + (kSqrt2 - 1.0) / n;
    CHECK(std::abs(cert.gamma_lower - expected) <= 1e-12);
    CHECK(cert.settings.all_nontrivial());
    CHECK(std::abs(chsh_value(step.state, cert.settings)) ==
          doctest::Approx(cert.gamma_lower).epsilon(1e-12));
    if (n >= 2) CHECK(cert.gamma_lower > 1.0);
  }
}

TEST_CASE("prop 1 linearity chain") {
  Rng rng(52);
  const DensityOperator target = random_density({7, 6}, rng);
  const int n = 3;
  const SequenceStep step = prop1_step(target, n);
  const BellOperator r = bell_operator(std::get<BellBoundCertificate>(step.witness).settings);
  const DensityOperator truncated = truncate(target, n);
  const double s = 1.0 / kSqrt2;
  const DensityOperator tail = projector(two_level_pure(7, 6, {n, n}, {n + 1, n + 1}, s, s));
  const double lhs = chsh_value(step.state, r);
  const double on_block = chsh_value(truncated, r);
  const double on_tail = chsh_value(tail, r);
  CHECK(on_block == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(on_tail == doctest::Approx(kSqrt2).epsilon(1e-12));
  CHECK(std::abs(lhs - ((1.0 - 1.0 / n) * on_block + on_tail / n)) <= 1e-12);
}

TEST_CASE("prop 1 distance from a basis target") {
  const DensityOperator target = projector(two_level_pure(8, 8, {0, 0}, {1, 1}, 1.0, 0.0));
  for (int n = 1; n <= 6; ++n) {
    CHECK(prop1_step(target, n).distance_to_target == doctest::Approx(2.0 / n).epsilon(1e-12));
  }
}

TEST_CASE("prop 1 distances shrink toward the cap") {
  Rng rng(53);
  const DensityOperator target = random_density({12, 12}, rng);
  const double d2 = prop1_step(target, 2).distance_to_target;
  const double d10 = prop1_step(target, 10).distance_to_target;
  CHECK(d10 < d2);
}

TEST_CASE("prop 1 headroom") {
  Rng rng(54);
  const DensityOperator target = random_density({5, 6}, rng);
  CHECK(prop1_fits(target.dims(), 3));
  CHECK_FALSE(prop1_fits(target.dims(), 4));
  CHECK_THROWS_AS(prop1_step(target, 4), DimensionError);
  CHECK_THROWS_AS(prop1_step(target, 0), DimensionError);
}

TEST_CASE("prop 2 filter identity and certificate") {
  Rng rng(55);
  const DensityOperator target = random_density({3, 16}, rng);
  const double s = 1.0 / kSqrt2;
  for (int n : {2, 5, 10, 14}) {
    const SequenceStep step = prop2_step(target, n, {.restarts = 4, .seed = 2});
    check_step_state(step, target);
    const auto& v = std::get<FilterViolation>(step.witness);
    const DensityOperator psi = projector(two_level_pure(3, 16, {0, n}, {1, n + 1}, s, s));
    const Matrix filtered =
        condition(step.state, tensor(v.q1.matrix(), v.q2.matrix())).matrix();
    CHECK(gap(filtered, psi.matrix()) <= 1e-10);
    CHECK(gap(v.filtered_state.matrix(), psi.matrix()) <= 1e-10);
    CHECK(std::abs(v.certificate.gamma_lower - kSqrt2) <= 1e-6);
    CHECK(std::abs(chsh_value(v.filtered_state, v.certificate.settings)) ==
          doctest::Approx(v.certificate.gamma_lower).epsilon(1e-12));
    CHECK(v.q1.rank() == 2);
    CHECK(v.q2.rank() == 2);
  }
  CHECK_THROWS_AS(prop2_step(target, 15), DimensionError);
  CHECK(prop2_fits({2, 4}, 2));
  CHECK_FALSE(prop2_fits({1, 4}, 2));
}

TEST_CASE("hidden nonlocality check") {
  Rng rng(56);
  const DensityOperator target = random_density({3, 10}, rng);
  const SequenceStep step = prop2_step(target, 4);
  const auto& v = std::get<FilterViolation>(step.witness);
  const HiddenNonlocalityResult found = hidden_nonlocality_check(step.state, v.q1, v.q2);
  REQUIRE(std::holds_alternative<FilterViolation>(found));
  CHECK(std::get<FilterViolation>(found).certificate.gamma_lower > 1.0);

  for (int trial = 0; trial < 10; ++trial) {
    const Vector a = random_unit_vector(2, rng);
    const Vector b = random_unit_vector(2, rng);
    const HiddenNonlocalityResult r = hidden_nonlocality_check(
        werner22(), Projection(a * a.adjoint()), Projection(b * b.adjoint()));
    CHECK(std::holds_alternative<NoViolationFound>(r));
  }

  for (int trial = 0; trial < 10; ++trial) {
    const DensityOperator sep = random_separable({2, 2}, 5, rng);
    const HiddenNonlocalityResult r = hidden_nonlocality_check(
        sep, leading_projection(2, 2), leading_projection(2, 2), {.restarts = 2, .seed = 1});
    REQUIRE(std::holds_alternative<NoViolationFound>(r));
    CHECK(std::get<NoViolationFound>(r).best.gamma_lower <= horodecki_gamma_2x2(sep) + 1e-6);
  }
  CHECK_THROWS_AS(
      hidden_nonlocality_check(werner22(), leading_projection(3, 1), leading_projection(2, 1)),
      DimensionError);
}

TEST_CASE("prop 6 ceilings and witnesses") {
  const DensityOperator wprime = embedded_werner(2, 4);
  Rng rng(57);
  const DensityOperator d2 = random_local_density(4, rng);
  const DensityOperator d(tensor(identity(2) / 2.0, d2.matrix()), {2, 4});
  const GammaEvidence evidence{.wprime_upper = 1.0 / kSqrt2, .d_upper = prop3_bound(2)};
  for (int n = 1; n <= 6; ++n) {
    const SequenceStep step = prop6_step(wprime, d, n, evidence, {.restarts = 4, .seed = 4});
    check_step_state(step, wprime);
    const double ceiling = (1.0 - 1.0 / n) / kSqrt2;
    REQUIRE(step.gamma_ceiling.has_value());
    CHECK(*step.gamma_ceiling == doctest::Approx(ceiling).epsilon(1e-15));
    CHECK(std::get<BellBoundCertificate>(step.witness).gamma_lower <= ceiling + 1e-6);
    REQUIRE(step.flip_witness.has_value());
    const double flip = (1.0 - 1.0 / n) * (-0.25) + expectation(d, flip_operator(2, 4)) / n;
    CHECK(*step.flip_witness == doctest::Approx(flip).epsilon(1e-12));
  }
  const SequenceStep first = prop6_step(wprime, d, 1, {});
  CHECK(gap(first.state.matrix(), d.matrix()) <= 1e-15);
  CHECK(*first.gamma_ceiling == 0.0);

  const SequenceStep late = prop6_step(wprime, d, 50, {});
  CHECK(*late.flip_witness < 0.0);
  CHECK(*late.gamma_ceiling == doctest::Approx(1.0 - 1.0 / 50));
  CHECK_THROWS_AS(prop6_step(werner22(), d, 2, {}), DimensionError);
}

TEST_CASE("negativity") {
  CHECK(negativity(singlet_projector()) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(negativity(werner22()) == doctest::Approx(0.125).epsilon(1e-12));
  CHECK(negativity(maximally_mixed(3, 3)) == 0.0);
  Rng rng(58);
  for (int trial = 0; trial < 10; ++trial) {
    CHECK(negativity(random_separable({2, 3}, 4, rng)) <= 1e-12);
  }
}

TEST_CASE("appendix B path") {
  const std::array<double, 3> grid{0.25, 0.05, 0.0};
  const std::vector<PathPoint> path = appendix_b_path(grid, 4, {.restarts = 4, .seed = 6});
  REQUIRE(path.size() == 3);
  CHECK(path[0].distance > path[1].distance);
  CHECK(path[2].distance == 0.0);
  CHECK(path[2].vector_distance == 0.0);
  CHECK(path[2].gamma_lower <= 1e-6);
  for (const PathPoint& p : path) {
    CHECK(p.distance <= 2.0 * p.vector_distance + 1e-12);
    CHECK(std::abs(chsh_value(reduced(appendix_b_vector(p.lambda, 4), std::array<int, 2>{0, 1}),
                              p.certificate.settings)) ==
          doctest::Approx(p.gamma_lower).epsilon(1e-10));
  }
  const std::array<double, 1> bad{1.5};
  CHECK_THROWS_AS(appendix_b_path(bad, 4), std::invalid_argument);
  CHECK(std::size(kDefaultLambdaGrid) == 5);
}

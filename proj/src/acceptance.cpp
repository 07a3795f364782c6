#include "bellmetric/acceptance.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <numbers>
#include <sstream>

#include "bellmetric/bell.hpp"
#include "bellmetric/constructions.hpp"
#include "bellmetric/random.hpp"
#include "bellmetric/serialize.hpp"
#include "bellmetric/states.hpp"

namespace bellmetric::acceptance {
namespace {

constexpr double kSqrt2 = std::numbers::sqrt2;

struct Outcome {
  bool passed = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      if (!passed) detail << "; ";
      passed = false;
      detail << what;
    }
  }
};

CriterionResult timed(int id, std::string title, double budget,
                      const std::function<void(Outcome&)>& body) {
  Outcome out;
  const auto start = std::chrono::steady_clock::now();
  try {
    body(out);
  } catch (const std::exception& e) {
    out.require(false, std::string("exception: ") + e.what());
  }
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  std::string detail = out.detail.str();
  bool passed = out.passed;
  if (seconds >= budget) {
    passed = false;
    detail += (detail.empty() ? "" : "; ") + std::string("runtime budget exceeded");
  }
  if (detail.empty()) detail = "ok";
  return {id, std::move(title), passed, std::move(detail), seconds, budget};
}

std::string num(double x) {
  std::ostringstream os;
  os.precision(6);
  os << x;
  return os.str();
}

}  // namespace

CriterionResult werner_witnesses() {
  return timed(1, "Werner witnesses", 1e-3, [](Outcome& out) {
    const DensityOperator w = werner22();
    const double flip = expectation(w, flip_operator(2, 2));
    out.require(std::abs(flip + 0.25) <= 1e-12, "Tr(U W22) = " + num(flip));
    const RealVector ev = eigh(w.matrix()).values;
    const double expected[] = {0.125, 0.125, 0.125, 0.625};
    for (int k = 0; k < 4; ++k) {
      out.require(std::abs(ev(k) - expected[k]) <= 1e-12, "eigenvalue " + num(ev(k)));
    }
    if (out.passed) out.detail << "Tr(U W22) = -1/4, spectrum {1/8,1/8,1/8,5/8}";
  });
}

CriterionResult oracle_agreement() {
  return timed(2, "Oracle agreement on 2x2", 30.0, [](Outcome& out) {
    SeesawOptions options;
    options.restarts = 20;
    options.seed = 2002;
    Rng rng(20020);
    double worst = 0.0;
    for (int k = 0; k < 200; ++k) {
      const DensityOperator d = random_density({2, 2}, rng);
      options.seed = 2002 + static_cast<std::uint64_t>(k);
      const double gap = std::abs(seesaw_gamma(d, options).gamma_lower - horodecki_gamma_2x2(d));
      worst = std::max(worst, gap);
    }
    out.require(worst <= 1e-4, "max |seesaw - oracle| = " + num(worst));
    const double singlet = seesaw_gamma(singlet_projector(), options).gamma_lower;
    out.require(std::abs(singlet - kSqrt2) <= 1e-6, "singlet gamma = " + num(singlet));
    const double werner = seesaw_gamma(werner22(), options).gamma_lower;
    out.require(std::abs(werner - 1.0 / kSqrt2) <= 1e-6, "werner gamma = " + num(werner));
    out.require(werner <= 1.0 / kSqrt2 + 1e-6, "werner exceeds 2^{-1/2}");
    if (out.passed) out.detail << "max gap " << num(worst) << " over 200 states";
  });
}

CriterionResult landau_suite() {
  return timed(3, "Landau identity and norm bound", 60.0, [](Outcome& out) {
    const FactorDims dims[] = {{2, 2}, {3, 4}, {4, 4}};
    Rng rng(3003);
    double worst_residual = 0.0;
    double worst_norm = 0.0;
    for (int k = 0; k < 500; ++k) {
      const FactorDims fd = dims[k % 3];
      const CorrelationSettings s{random_dichotomic(fd.d1, rng), random_dichotomic(fd.d1, rng),
                                  random_dichotomic(fd.d2, rng), random_dichotomic(fd.d2, rng)};
      worst_residual = std::max(worst_residual, landau_residual(s));
      worst_norm = std::max(worst_norm, operator_norm(bell_operator(s).matrix()));
    }
    out.require(worst_residual <= 1e-9, "landau residual " + num(worst_residual));
    out.require(worst_norm <= kSqrt2 + 1e-9, "||R|| = " + num(worst_norm));
    if (out.passed) {
      out.detail << "max residual " << num(worst_residual) << ", max ||R|| " << num(worst_norm);
    }
  });
}

CriterionResult prop1_density() {
  return timed(4, "Dense CHSH-violating sequence on 12x12", 120.0, [](Outcome& out) {
    Rng rng(4004);
    double worst = 0.0;
    for (int t = 0; t < 10; ++t) {
      const DensityOperator target = random_density({12, 12}, rng);
      std::vector<double> distances;
      for (int n = 2; n <= 10; ++n) {
        const SequenceStep step = prop1_step(target, n);
        const double value = std::get<BellBoundCertificate>(step.witness).gamma_lower;
        const double expected = 1.0 + (kSqrt2 - 1.0) / n;
        worst = std::max(worst, std::abs(value - expected));
        out.require(value > 1.0, "value not above 1 at n = " + std::to_string(n));
        distances.push_back(step.distance_to_target);
      }
      out.require(distances.back() < distances.front(),
                  "target " + std::to_string(t) + ": distance(10) >= distance(2)");
      for (std::size_t k = 1; k < distances.size(); ++k) {
        out.require(distances[k] <= distances[k - 1] + 1e-12,
                    "target " + std::to_string(t) + ": distance rises at n = " +
                        std::to_string(k + 2));
      }
    }
    out.require(worst <= 1e-6, "max |value - (1 + (sqrt2 - 1)/n)| = " + num(worst));
    if (out.passed) out.detail << "max value error " << num(worst);
  });
}

CriterionResult prop2_hidden_nonlocality() {
  return timed(5, "Filtered violation on 3x16", 120.0, [](Outcome& out) {
    Rng rng(5005);
    SeesawOptions options;
    options.seed = 5005;
    const double s = 1.0 / kSqrt2;
    double worst_defect = 0.0;
    double worst_gap = 0.0;
    for (int t = 0; t < 10; ++t) {
      const DensityOperator target = random_density({3, 16}, rng);
      for (int n = 2; n <= 10; ++n) {
        const SequenceStep step = prop2_step(target, n, options);
        const auto& v = std::get<FilterViolation>(step.witness);
        const DensityOperator psi = projector(two_level_pure(3, 16, {0, n}, {1, n + 1}, s, s));
        const DensityOperator filtered =
            condition(step.state, tensor(v.q1.matrix(), v.q2.matrix()));
        worst_defect = std::max(worst_defect,
                                (filtered.matrix() - psi.matrix()).cwiseAbs().maxCoeff());
        worst_gap = std::max(worst_gap, std::abs(v.certificate.gamma_lower - kSqrt2));
      }
    }
    out.require(worst_defect <= 1e-10, "filter identity defect " + num(worst_defect));
    out.require(worst_gap <= 1e-6, "filtered certificate off sqrt2 by " + num(worst_gap));
    if (out.passed) {
      out.detail << "defect " << num(worst_defect) << ", certificate gap " << num(worst_gap);
    }
  });
}

CriterionResult prop3_neighborhoods() {
  return timed(6, "Maximally mixed factor bound", 180.0, [](Outcome& out) {
    Rng rng(6006);
    SeesawOptions options;
    options.seed = 6006;
    for (int d1 : {2, 3, 4}) {
      double worst = 0.0;
      for (int k = 0; k < 5; ++k) {
        const DensityOperator d2 = random_local_density(6, rng);
        const DensityOperator d(tensor(identity(d1) / static_cast<double>(d1), d2.matrix()),
                                {d1, 6});
        worst = std::max(worst, seesaw_gamma(d, options).gamma_lower);
      }
      out.require(worst <= prop3_bound(d1) + 1e-4,
                  "d1 = " + std::to_string(d1) + ": gamma " + num(worst) + " above bound");
      if (d1 == 2) out.require(worst <= 1e-4, "d1 = 2: gamma " + num(worst));
      out.detail << (d1 == 2 ? "" : ", ") << "d1=" << d1 << " max " << num(worst);
    }
  });
}

CriterionResult lipschitz_convexity() {
  return timed(7, "Lipschitz and convexity of gamma on 2x2", 60.0, [](Outcome& out) {
    Rng rng(7007);
    double worst_lip = -1e300;
    double worst_convex = -1e300;
    for (int k = 0; k < 500; ++k) {
      const DensityOperator a = random_density({2, 2}, rng);
      // Alternate far pairs with close perturbations so both regimes are hit.
      DensityOperator b = random_density({2, 2}, rng);
      if (k % 2 == 1) {
        const double eps = std::pow(10.0, -1.0 - 4.0 * rng.uniform());
        b = DensityOperator((1.0 - eps) * a.matrix() + eps * b.matrix(), {2, 2});
      }
      const double lhs = std::abs(horodecki_gamma_2x2(a) - horodecki_gamma_2x2(b));
      const double rhs = kSqrt2 * trace_norm(a.matrix() - b.matrix());
      worst_lip = std::max(worst_lip, lhs - rhs);
    }
    for (int k = 0; k < 500; ++k) {
      const DensityOperator w = random_density({2, 2}, rng);
      const DensityOperator v = k % 2 ? random_separable({2, 2}, 3, rng) : random_density({2, 2}, rng);
      const double lambda = rng.uniform();
      const DensityOperator m(lambda * w.matrix() + (1.0 - lambda) * v.matrix(), {2, 2});
      const double excess = horodecki_gamma_2x2(m) - (lambda * horodecki_gamma_2x2(w) +
                                                      (1.0 - lambda) * horodecki_gamma_2x2(v));
      worst_convex = std::max(worst_convex, excess);
    }
    out.require(worst_lip <= 1e-8, "Lipschitz excess " + num(worst_lip));
    out.require(worst_convex <= 1e-8, "convexity excess " + num(worst_convex));
    if (out.passed) {
      out.detail << "max Lipschitz excess " << num(worst_lip) << ", max convexity excess "
                 << num(worst_convex);
    }
  });
}

CriterionResult compression() {
  return timed(8, "Block compression of Bell operators on 3x4", 10.0, [](Outcome& out) {
    const DensityOperator w = embedded_werner(3, 4);
    const Projection p = leading_projection(3, 2);
    const Projection q = leading_projection(4, 2);
    Rng rng(8008);
    double worst = 0.0;
    for (int k = 0; k < 100; ++k) {
      const BellOperator r = bell_operator({random_dichotomic(3, rng), random_dichotomic(3, rng),
                                            random_dichotomic(4, rng), random_dichotomic(4, rng)});
      const Matrix compressed = compress_bell(r, p, q);
      const double full = std::abs(expectation(w, r.matrix()));
      const double block = std::abs(trace_product(w.matrix(), compressed).real());
      worst = std::max(worst, std::abs(full - block));
    }
    out.require(worst <= 1e-10, "compression mismatch " + num(worst));
    const double flip = expectation(w, flip_operator(3, 4));
    out.require(std::abs(flip + 0.25) <= 1e-12, "Tr(U' W22') = " + num(flip));
    if (out.passed) out.detail << "max mismatch " << num(worst) << ", Tr(U' W22') = -1/4";
  });
}

CriterionResult appendix_b_path_check() {
  return timed(9, "Path of CHSH-quiet states", 60.0, [](Outcome& out) {
    constexpr int tail = 8;
    const AppendixBDims dims = appendix_b_dims(tail);
    const int keep[] = {0, 1};
    const DensityOperator endpoint = reduced(appendix_b_vector(0.0, tail), keep);
    const Matrix expected = tensor(leading_projection(dims.d1, 2).matrix() / 2.0,
                                   identity(2) / 2.0);
    const double defect = (endpoint.matrix() - expected).cwiseAbs().maxCoeff();
    out.require(defect <= 1e-10, "Phi(v0) defect " + num(defect));

    SeesawOptions options;
    options.seed = 9009;
    const auto points = appendix_b_path(kDefaultLambdaGrid, tail, options);
    for (std::size_t k = 1; k < points.size(); ++k) {
      out.require(points[k].distance < points[k - 1].distance,
                  "distance not strictly decreasing at lambda = " + num(points[k].lambda));
    }
    const double radius = safe_radius(0.0);
    out.require(points.back().distance < radius,
                "distance(0.01) = " + num(points.back().distance) + " not below 1/sqrt2");
    const double lambda0[] = {0.0};
    const double gamma0 = appendix_b_path(lambda0, tail, options).front().gamma_lower;
    out.require(gamma0 <= 1e-6, "gamma at lambda = 0 is " + num(gamma0));
    if (out.passed) {
      out.detail << "distance(0.01) = " << num(points.back().distance) << ", gamma(0) = "
                 << num(gamma0);
    }
  });
}

std::vector<CriterionResult> run_all() {
  return {werner_witnesses(),       oracle_agreement(),    landau_suite(),
          prop1_density(),          prop2_hidden_nonlocality(), prop3_neighborhoods(),
          lipschitz_convexity(),    compression(),         appendix_b_path_check()};
}

std::string format_line(const CriterionResult& r) {
  std::ostringstream os;
  os << (r.passed ? "PASS" : "FAIL") << " [" << r.id << "] " << r.title << " (" << num(r.seconds)
     << " s / " << num(r.budget_seconds) << " s): " << r.detail;
  return os.str();
}

}  // namespace bellmetric::acceptance

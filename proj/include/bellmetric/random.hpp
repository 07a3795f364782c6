#pragma once

#include <cstdint>
#include <random>

#include "bellmetric/operator.hpp"

namespace bellmetric {

/// Seeded source for every random draw in the library. Two instances built
/// from the same seed produce identical streams.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Independent stream derived from (seed, stream index).
  static Rng stream(std::uint64_t seed, std::uint64_t index);

  double normal() { return normal_(engine_); }
  double uniform() { return uniform_(engine_); }
  Complex complex_normal() { return {normal(), normal()}; }

 private:
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
  std::uniform_real_distribution<double> uniform_{0.0, 1.0};
};

Matrix random_ginibre(int rows, int cols, Rng& rng);
/// Hermitian with standard complex Gaussian entries.
Matrix random_hermitian(int dim, Rng& rng);
DichotomicObservable random_dichotomic(int dim, Rng& rng);
/// Dichotomic observable with at least one eigenvalue of each sign (dim >= 2).
DichotomicObservable random_nontrivial_dichotomic(int dim, Rng& rng);
Vector random_unit_vector(int dim, Rng& rng);
/// G G* / Tr(G G*) with square Ginibre G: full rank almost surely.
DensityOperator random_density(FactorDims dims, Rng& rng);
DensityOperator random_local_density(int dim, Rng& rng);
DensityOperator random_product_state(FactorDims dims, Rng& rng);
/// Convex mixture of `terms` random product states with Dirichlet-like weights.
DensityOperator random_separable(FactorDims dims, int terms, Rng& rng);
/// Self-adjoint contraction: U diag(t) U* with t uniform in [-1, 1].
Matrix random_contraction(int dim, Rng& rng);

}  // namespace bellmetric

#include "bellmetric/random.hpp"

#include <cmath>

namespace bellmetric {

Rng Rng::stream(std::uint64_t seed, std::uint64_t index) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32)};
  std::uint64_t derived = 0;
  std::uint32_t words[2];
  seq.generate(words, words + 2);
  derived = (static_cast<std::uint64_t>(words[0]) << 32) | words[1];
  return Rng(derived);
}

Matrix random_ginibre(int rows, int cols, Rng& rng) {
  Matrix g(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) g(i, j) = rng.complex_normal();
  return g;
}

Matrix random_hermitian(int dim, Rng& rng) {
  const Matrix g = random_ginibre(dim, dim, rng);
  return 0.5 * (g + g.adjoint());
}

DichotomicObservable random_dichotomic(int dim, Rng& rng) {
  return spectral_sign(random_hermitian(dim, rng));
}

DichotomicObservable random_nontrivial_dichotomic(int dim, Rng& rng) {
  if (dim < 2) throw DimensionError("random_nontrivial_dichotomic: dim must be >= 2");
  for (;;) {
    DichotomicObservable a = random_dichotomic(dim, rng);
    if (a.nontrivial()) return a;
  }
}

Vector random_unit_vector(int dim, Rng& rng) {
  Vector v(dim);
  for (int k = 0; k < dim; ++k) v(k) = rng.complex_normal();
  return v / v.norm();
}

DensityOperator random_density(FactorDims dims, Rng& rng) {
  const int n = dims.total();
  const Matrix g = random_ginibre(n, n, rng);
  Matrix w = g * g.adjoint();
  w /= w.trace().real();
  w = 0.5 * (w + w.adjoint()).eval();
  return DensityOperator(std::move(w), dims);
}

DensityOperator random_local_density(int dim, Rng& rng) {
  return random_density(FactorDims{dim, 1}, rng);
}

DensityOperator random_product_state(FactorDims dims, Rng& rng) {
  const Vector a = random_unit_vector(dims.d1, rng);
  const Vector b = random_unit_vector(dims.d2, rng);
  Matrix p = tensor(a * a.adjoint(), b * b.adjoint());
  p /= p.trace().real();
  return DensityOperator(std::move(p), dims);
}

DensityOperator random_separable(FactorDims dims, int terms, Rng& rng) {
  Matrix mix = Matrix::Zero(dims.total(), dims.total());
  double total = 0.0;
  for (int k = 0; k < terms; ++k) {
    // -log(u) weights give a flat Dirichlet after normalization.
    const double w = -std::log(1.0 - rng.uniform());
    mix += w * random_product_state(dims, rng).matrix();
    total += w;
  }
  mix /= total;
  mix /= mix.trace().real();
  return DensityOperator(std::move(mix), dims);
}

Matrix random_contraction(int dim, Rng& rng) {
  const Spectrum s = eigh(random_hermitian(dim, rng));
  RealVector t(dim);
  for (int k = 0; k < dim; ++k) t(k) = 2.0 * rng.uniform() - 1.0;
  Matrix c = s.vectors * t.cast<Complex>().asDiagonal() * s.vectors.adjoint();
  return 0.5 * (c + c.adjoint());
}

}  // namespace bellmetric

#pragma once

#include <complex>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace bellmetric {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

// Every numerical threshold in the library lives here.
namespace tol {
inline constexpr double structural = 1e-10;
inline constexpr double assertion = 1e-9;
inline constexpr double optimizer = 1e-8;
inline constexpr double condition = 1e-12;
}  // namespace tol

class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class InvariantError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Raised when A D A* vanishes, so the conditioned state is undefined.
class NullConditioning : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Factor { left, right };

struct FactorDims {
  int d1 = 1;
  int d2 = 1;

  [[nodiscard]] int total() const { return d1 * d2; }
  friend bool operator==(const FactorDims&, const FactorDims&) = default;
};

/// Ascending eigenvalues with orthonormal eigenvectors as columns.
struct Spectrum {
  RealVector values;
  Matrix vectors;
};

/// Positive, trace-one operator on a declared bipartite space.
class DensityOperator {
 public:
  DensityOperator(Matrix matrix, FactorDims dims);

  [[nodiscard]] const Matrix& matrix() const { return matrix_; }
  [[nodiscard]] FactorDims dims() const { return dims_; }
  [[nodiscard]] int dim() const { return static_cast<int>(matrix_.rows()); }

 private:
  Matrix matrix_;
  FactorDims dims_;
};

/// Self-adjoint unitary: a generalized spin component with spectrum in {-1, +1}.
class DichotomicObservable {
 public:
  explicit DichotomicObservable(Matrix matrix);

  [[nodiscard]] const Matrix& matrix() const { return matrix_; }
  [[nodiscard]] int dim() const { return static_cast<int>(matrix_.rows()); }
  /// True unless the observable is +I or -I.
  [[nodiscard]] bool nontrivial() const { return nontrivial_; }

 private:
  Matrix matrix_;
  bool nontrivial_;
};

class Projection {
 public:
  explicit Projection(Matrix matrix);

  [[nodiscard]] const Matrix& matrix() const { return matrix_; }
  [[nodiscard]] int dim() const { return static_cast<int>(matrix_.rows()); }
  [[nodiscard]] int rank() const;

 private:
  Matrix matrix_;
};

/// Unit vector on a tensor product of factors; factor 0 is the most
/// significant index of the amplitude array.
class PureVector {
 public:
  PureVector(std::vector<int> factor_dims, Vector amplitudes);

  [[nodiscard]] const std::vector<int>& factor_dims() const { return factor_dims_; }
  [[nodiscard]] const Vector& amplitudes() const { return amplitudes_; }
  [[nodiscard]] int dim() const { return static_cast<int>(amplitudes_.size()); }

 private:
  std::vector<int> factor_dims_;
  Vector amplitudes_;
};

// Structural checks, all returning max-entry deviations.
double hermiticity_defect(const Matrix& m);
double involution_defect(const Matrix& m);
double idempotence_defect(const Matrix& m);
bool all_finite(const Matrix& m);

Matrix identity(int dim);

/// Kronecker product; `a` indexes the left factor.
Matrix tensor(const Matrix& a, const Matrix& b);

Matrix partial_trace(const Matrix& m, FactorDims dims, Factor keep);
DensityOperator partial_trace(const DensityOperator& d, Factor keep);

/// Transpose on one factor only; used for the negativity witness.
Matrix partial_transpose(const Matrix& m, FactorDims dims, Factor which);

Spectrum eigh(const Matrix& hermitian);

/// Sum of singular values (sum of |eigenvalues| for Hermitian input).
double trace_norm(const Matrix& m);
double operator_norm(const Matrix& m);

/// Re Tr(D A); throws InvariantError when the imaginary part exceeds the
/// assertion tolerance, DimensionError on mismatched sizes.
double expectation(const DensityOperator& d, const Matrix& a);
Complex trace_product(const Matrix& a, const Matrix& b);

/// Same eigenvectors as `h`, eigenvalues replaced by their sign. Eigenvalues
/// with magnitude below `sign_tol` map to +1.
DichotomicObservable spectral_sign(const Matrix& h, double sign_tol = tol::structural);

/// Projection onto span{e_k : k in indices}.
Projection basis_projection(int dim, std::span<const int> indices);
/// Projection onto the first `n` basis vectors.
Projection leading_projection(int dim, int n);

/// Rank-one projector onto a bipartite pure vector.
DensityOperator projector(const PureVector& x);

std::string describe_dims(FactorDims dims);

}  // namespace bellmetric

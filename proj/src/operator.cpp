#include "bellmetric/operator.hpp"

#include <cmath>
#include <numeric>
#include <sstream>

namespace bellmetric {
namespace {

void require_square(const Matrix& m, const char* what) {
  if (m.rows() != m.cols() || m.rows() == 0) {
    std::ostringstream os;
    os << what << ": expected a non-empty square matrix, got " << m.rows() << "x" << m.cols();
    throw DimensionError(os.str());
  }
}

void require_hermitian(const Matrix& m, const char* what) {
  require_square(m, what);
  if (!all_finite(m)) throw InvariantError(std::string(what) + ": non-finite entry");
  const double defect = hermiticity_defect(m);
  if (defect > tol::structural) {
    std::ostringstream os;
    os << what << ": not Hermitian (max deviation " << defect << ")";
    throw InvariantError(os.str());
  }
}

}  // namespace

DensityOperator::DensityOperator(Matrix matrix, FactorDims dims)
    : matrix_(std::move(matrix)), dims_(dims) {
  require_hermitian(matrix_, "density operator");
  if (dims_.d1 < 1 || dims_.d2 < 1 || dims_.total() != matrix_.rows()) {
    throw DimensionError("density operator: factor dims " + describe_dims(dims_) +
                         " do not match matrix size " + std::to_string(matrix_.rows()));
  }
  const double tr = matrix_.trace().real();
  if (std::abs(tr - 1.0) > tol::structural) {
    std::ostringstream os;
    os.precision(17);
    os << "density operator: trace " << tr << " differs from 1";
    throw InvariantError(os.str());
  }
  const double min_eig = eigh(matrix_).values(0);
  if (min_eig < -tol::structural) {
    std::ostringstream os;
    os << "density operator: negative eigenvalue " << min_eig;
    throw InvariantError(os.str());
  }
}

DichotomicObservable::DichotomicObservable(Matrix matrix) : matrix_(std::move(matrix)) {
  require_hermitian(matrix_, "dichotomic observable");
  const double defect = involution_defect(matrix_);
  if (defect > tol::structural) {
    std::ostringstream os;
    os << "dichotomic observable: A^2 deviates from I by " << defect;
    throw InvariantError(os.str());
  }
  // Tr A = (#plus) - (#minus); trivial iff one of the counts is zero.
  nontrivial_ = std::abs(matrix_.trace().real()) < static_cast<double>(dim()) - 0.5;
}

Projection::Projection(Matrix matrix) : matrix_(std::move(matrix)) {
  require_hermitian(matrix_, "projection");
  const double defect = idempotence_defect(matrix_);
  if (defect > tol::structural) {
    std::ostringstream os;
    os << "projection: P^2 deviates from P by " << defect;
    throw InvariantError(os.str());
  }
}

int Projection::rank() const { return static_cast<int>(std::lround(matrix_.trace().real())); }

PureVector::PureVector(std::vector<int> factor_dims, Vector amplitudes)
    : factor_dims_(std::move(factor_dims)), amplitudes_(std::move(amplitudes)) {
  if (factor_dims_.empty()) throw DimensionError("pure vector: no factor dims");
  long long product = 1;
  for (int d : factor_dims_) {
    if (d < 1) throw DimensionError("pure vector: factor dims must be positive");
    product *= d;
  }
  if (product != amplitudes_.size()) {
    throw DimensionError("pure vector: amplitude count " + std::to_string(amplitudes_.size()) +
                         " does not match product of factor dims " + std::to_string(product));
  }
  if (!amplitudes_.allFinite()) throw InvariantError("pure vector: non-finite amplitude");
  const double norm = amplitudes_.norm();
  if (std::abs(norm - 1.0) > tol::structural) {
    std::ostringstream os;
    os.precision(17);
    os << "pure vector: norm " << norm << " differs from 1";
    throw InvariantError(os.str());
  }
}

double hermiticity_defect(const Matrix& m) {
  return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

double involution_defect(const Matrix& m) {
  return (m * m - identity(static_cast<int>(m.rows()))).cwiseAbs().maxCoeff();
}

double idempotence_defect(const Matrix& m) { return (m * m - m).cwiseAbs().maxCoeff(); }

bool all_finite(const Matrix& m) { return m.allFinite(); }

Matrix identity(int dim) { return Matrix::Identity(dim, dim); }

Matrix tensor(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index k = 0; k < a.cols(); ++k) {
      out.block(i * b.rows(), k * b.cols(), b.rows(), b.cols()) = a(i, k) * b;
    }
  }
  return out;
}

Matrix partial_trace(const Matrix& m, FactorDims dims, Factor keep) {
  if (m.rows() != dims.total() || m.cols() != dims.total()) {
    throw DimensionError("partial_trace: matrix size does not match " + describe_dims(dims));
  }
  const int d1 = dims.d1;
  const int d2 = dims.d2;
  if (keep == Factor::left) {
    Matrix out = Matrix::Zero(d1, d1);
    for (int i = 0; i < d1; ++i)
      for (int k = 0; k < d1; ++k)
        for (int j = 0; j < d2; ++j) out(i, k) += m(i * d2 + j, k * d2 + j);
    return out;
  }
  Matrix out = Matrix::Zero(d2, d2);
  for (int j = 0; j < d2; ++j)
    for (int l = 0; l < d2; ++l)
      for (int i = 0; i < d1; ++i) out(j, l) += m(i * d2 + j, i * d2 + l);
  return out;
}

DensityOperator partial_trace(const DensityOperator& d, Factor keep) {
  Matrix reduced = partial_trace(d.matrix(), d.dims(), keep);
  const int n = static_cast<int>(reduced.rows());
  return DensityOperator(std::move(reduced), FactorDims{n, 1});
}

Matrix partial_transpose(const Matrix& m, FactorDims dims, Factor which) {
  if (m.rows() != dims.total() || m.cols() != dims.total()) {
    throw DimensionError("partial_transpose: matrix size does not match " + describe_dims(dims));
  }
  const int d1 = dims.d1;
  const int d2 = dims.d2;
  Matrix out(m.rows(), m.cols());
  for (int i = 0; i < d1; ++i)
    for (int j = 0; j < d2; ++j)
      for (int k = 0; k < d1; ++k)
        for (int l = 0; l < d2; ++l) {
          out(i * d2 + j, k * d2 + l) = which == Factor::right ? m(i * d2 + l, k * d2 + j)
                                                               : m(k * d2 + j, i * d2 + l);
        }
  return out;
}

Spectrum eigh(const Matrix& hermitian) {
  require_square(hermitian, "eigh");
  Eigen::SelfAdjointEigenSolver<Matrix> solver(hermitian);
  if (solver.info() != Eigen::Success) throw std::runtime_error("eigh: decomposition failed");
  return {solver.eigenvalues(), solver.eigenvectors()};
}

double trace_norm(const Matrix& m) {
  if (m.rows() == m.cols() && hermiticity_defect(m) <= tol::structural) {
    return eigh(m).values.cwiseAbs().sum();
  }
  Eigen::JacobiSVD<Matrix> svd(m);
  return svd.singularValues().sum();
}

double operator_norm(const Matrix& m) {
  if (m.rows() == m.cols() && hermiticity_defect(m) <= tol::structural) {
    return eigh(m).values.cwiseAbs().maxCoeff();
  }
  Eigen::JacobiSVD<Matrix> svd(m);
  return svd.singularValues()(0);
}

Complex trace_product(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.cols() || a.cols() != b.rows()) {
    throw DimensionError("trace_product: incompatible shapes");
  }
  // Tr(AB) = sum_ij A_ij B_ji
  return a.cwiseProduct(b.transpose()).sum();
}

double expectation(const DensityOperator& d, const Matrix& a) {
  if (a.rows() != d.dim() || a.cols() != d.dim()) {
    throw DimensionError("expectation: operator is " + std::to_string(a.rows()) + "x" +
                         std::to_string(a.cols()) + ", state has dim " + std::to_string(d.dim()));
  }
  const Complex value = trace_product(d.matrix(), a);
  if (std::abs(value.imag()) > tol::assertion) {
    std::ostringstream os;
    os << "expectation: imaginary part " << value.imag() << " exceeds tolerance";
    throw InvariantError(os.str());
  }
  return value.real();
}

DichotomicObservable spectral_sign(const Matrix& h, double sign_tol) {
  require_hermitian(h, "spectral_sign");
  const Spectrum s = eigh(h);
  RealVector signs(s.values.size());
  for (Eigen::Index k = 0; k < signs.size(); ++k) {
    signs(k) = (std::abs(s.values(k)) < sign_tol || s.values(k) > 0.0) ? 1.0 : -1.0;
  }
  Matrix out = s.vectors * signs.cast<Complex>().asDiagonal() * s.vectors.adjoint();
  out = 0.5 * (out + out.adjoint()).eval();
  return DichotomicObservable(std::move(out));
}

Projection basis_projection(int dim, std::span<const int> indices) {
  Matrix p = Matrix::Zero(dim, dim);
  for (int k : indices) {
    if (k < 0 || k >= dim) {
      throw DimensionError("basis_projection: index " + std::to_string(k) + " outside dim " +
                           std::to_string(dim));
    }
    p(k, k) = 1.0;
  }
  return Projection(std::move(p));
}

Projection leading_projection(int dim, int n) {
  if (n < 0 || n > dim) throw DimensionError("leading_projection: n outside [0, dim]");
  std::vector<int> idx(static_cast<std::size_t>(n));
  std::iota(idx.begin(), idx.end(), 0);
  return basis_projection(dim, idx);
}

DensityOperator projector(const PureVector& x) {
  if (x.factor_dims().size() != 2) {
    throw DimensionError("projector: expected a bipartite vector, got " +
                         std::to_string(x.factor_dims().size()) + " factors");
  }
  Matrix p = x.amplitudes() * x.amplitudes().adjoint() / x.amplitudes().squaredNorm();
  return DensityOperator(std::move(p), FactorDims{x.factor_dims()[0], x.factor_dims()[1]});
}

std::string describe_dims(FactorDims dims) {
  return "(" + std::to_string(dims.d1) + "," + std::to_string(dims.d2) + ")";
}

}  // namespace bellmetric

#include "bellmetric/states.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace bellmetric {
namespace {

int flat(int i, int j, int d2) { return i * d2 + j; }

void require_index(int k, int dim, const char* what) {
  if (k < 0 || k >= dim) {
    std::ostringstream os;
    os << what << ": index " << k << " outside [0, " << dim << ")";
    throw DimensionError(os.str());
  }
}

Matrix hermitize(const Matrix& m) { return 0.5 * (m + m.adjoint()); }

}  // namespace

namespace pauli {
Matrix x() {
  Matrix m(2, 2);
  m << 0.0, 1.0, 1.0, 0.0;
  return m;
}
Matrix y() {
  Matrix m(2, 2);
  m << 0.0, Complex(0.0, -1.0), Complex(0.0, 1.0), 0.0;
  return m;
}
Matrix z() {
  Matrix m(2, 2);
  m << 1.0, 0.0, 0.0, -1.0;
  return m;
}
}  // namespace pauli

DensityOperator maximally_mixed(int d1, int d2) {
  if (d1 < 1 || d2 < 1) throw DimensionError("maximally_mixed: dims must be >= 1");
  const int n = d1 * d2;
  return DensityOperator(identity(n) / static_cast<double>(n), FactorDims{d1, d2});
}

PureVector two_level_pure(int d1, int d2, BasisIndexPair a, BasisIndexPair b, Complex ca,
                          Complex cb) {
  if (d1 < 1 || d2 < 1) throw DimensionError("two_level_pure: dims must be >= 1");
  require_index(a.i, d1, "two_level_pure");
  require_index(b.i, d1, "two_level_pure");
  require_index(a.j, d2, "two_level_pure");
  require_index(b.j, d2, "two_level_pure");
  if (a == b) throw DimensionError("two_level_pure: the two basis pairs must differ");
  Vector v = Vector::Zero(d1 * d2);
  v(flat(a.i, a.j, d2)) = ca;
  v(flat(b.i, b.j, d2)) = cb;
  return PureVector({d1, d2}, std::move(v));
}

DensityOperator singlet_projector() {
  const double s = 1.0 / std::sqrt(2.0);
  return projector(two_level_pure(2, 2, {0, 1}, {1, 0}, s, -s));
}

Matrix flip_operator(int d1, int d2, FlipBlock block) {
  for (int k : block.left) require_index(k, d1, "flip_operator");
  for (int k : block.right) require_index(k, d2, "flip_operator");
  if (block.left[0] == block.left[1] || block.right[0] == block.right[1]) {
    throw DimensionError("flip_operator: block must span two distinct vectors per factor");
  }
  // U' (e_{left[a]} (x) f_{right[b]}) = e_{left[b]} (x) f_{right[a]}
  Matrix u = Matrix::Zero(d1 * d2, d1 * d2);
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b) {
      const int from = flat(block.left[a], block.right[b], d2);
      const int to = flat(block.left[b], block.right[a], d2);
      u(to, from) = 1.0;
    }
  return u;
}

DensityOperator werner22() {
  const Matrix i4 = identity(4);
  const Matrix u = flip_operator(2, 2);
  return DensityOperator(i4 / 8.0 + (i4 - u) / 4.0, FactorDims{2, 2});
}

DensityOperator embedded_werner(int d1, int d2) {
  if (d1 < 2 || d2 < 2) throw DimensionError("embedded_werner: dims must be >= 2");
  const Matrix pq = tensor(leading_projection(d1, 2).matrix(), leading_projection(d2, 2).matrix());
  const Matrix u = flip_operator(d1, d2);
  return DensityOperator(pq / 8.0 + (pq - u) / 4.0, FactorDims{d1, d2});
}

DensityOperator condition(const DensityOperator& d, const Matrix& a, double condition_tol) {
  if (a.rows() != d.dim() || a.cols() != d.dim()) {
    throw DimensionError("condition: operator size does not match state dim " +
                         std::to_string(d.dim()));
  }
  Matrix ada = a * d.matrix() * a.adjoint();
  const double weight = ada.trace().real();
  if (!(weight > condition_tol)) {
    std::ostringstream os;
    os << "condition: Tr(A D A*) = " << weight << " is below " << condition_tol;
    throw NullConditioning(os.str());
  }
  return DensityOperator(hermitize(ada / weight), d.dims());
}

DensityOperator truncate(const DensityOperator& d, int n1, int n2) {
  const FactorDims dims = d.dims();
  if (n1 < 1 || n2 < 1 || n1 > dims.d1 || n2 > dims.d2) {
    throw DimensionError("truncate: window (" + std::to_string(n1) + "," + std::to_string(n2) +
                         ") outside " + describe_dims(dims));
  }
  const Matrix p =
      tensor(leading_projection(dims.d1, n1).matrix(), leading_projection(dims.d2, n2).matrix());
  return condition(d, p);
}

DensityOperator truncate(const DensityOperator& d, int n) { return truncate(d, n, n); }

DensityOperator reduced(const PureVector& x, std::span<const int> keep) {
  const auto& fd = x.factor_dims();
  const int nf = static_cast<int>(fd.size());
  if (keep.empty() || keep.size() > 2) {
    throw DimensionError("reduced: keep one or two factors");
  }
  if (!std::is_sorted(keep.begin(), keep.end()) ||
      std::adjacent_find(keep.begin(), keep.end()) != keep.end()) {
    throw DimensionError("reduced: kept factors must be strictly ascending");
  }
  for (int k : keep) require_index(k, nf, "reduced");

  std::vector<bool> kept(static_cast<std::size_t>(nf), false);
  for (int k : keep) kept[static_cast<std::size_t>(k)] = true;
  int kept_dim = 1;
  int traced_dim = 1;
  for (int f = 0; f < nf; ++f) (kept[static_cast<std::size_t>(f)] ? kept_dim : traced_dim) *= fd[f];

  // Reshape amplitudes into M(kept, traced); the reduced state is M M*.
  Matrix m = Matrix::Zero(kept_dim, traced_dim);
  std::vector<int> digits(static_cast<std::size_t>(nf));
  for (int idx = 0; idx < x.dim(); ++idx) {
    int rest = idx;
    for (int f = nf - 1; f >= 0; --f) {
      digits[static_cast<std::size_t>(f)] = rest % fd[f];
      rest /= fd[f];
    }
    int ki = 0;
    int ti = 0;
    for (int f = 0; f < nf; ++f) {
      const int digit = digits[static_cast<std::size_t>(f)];
      if (kept[static_cast<std::size_t>(f)]) {
        ki = ki * fd[f] + digit;
      } else {
        ti = ti * fd[f] + digit;
      }
    }
    m(ki, ti) = x.amplitudes()(idx);
  }
  Matrix rho = m * m.adjoint();
  rho /= rho.trace().real();
  const FactorDims dims = keep.size() == 2 ? FactorDims{fd[keep[0]], fd[keep[1]]}
                                           : FactorDims{fd[keep[0]], 1};
  return DensityOperator(hermitize(rho), dims);
}

AppendixBDims appendix_b_dims(int tail_terms) {
  if (tail_terms < 1) throw DimensionError("appendix_b_dims: tail_terms must be >= 1");
  return {2 * tail_terms + 2, 2, std::max(4, tail_terms)};
}

namespace {

void check_appendix_b_dims(int tail_terms, AppendixBDims dims) {
  const AppendixBDims need = appendix_b_dims(tail_terms);
  if (dims.d1 < need.d1 || dims.d2 != 2 || dims.d3 < need.d3) {
    std::ostringstream os;
    os << "appendix B: dims (" << dims.d1 << "," << dims.d2 << "," << dims.d3 << ") too small for "
       << tail_terms << " tail terms; need d1 >= " << need.d1 << ", d2 = 2, d3 >= " << need.d3;
    throw DimensionError(os.str());
  }
}

int flat3(int i, int j, int k, AppendixBDims d) { return (i * d.d2 + j) * d.d3 + k; }

}  // namespace

PureVector appendix_b_v0(AppendixBDims dims) {
  check_appendix_b_dims(1, dims);
  Vector v = Vector::Zero(dims.d1 * dims.d2 * dims.d3);
  // e1 f1 g1 + e2 f2 g2 + e2 f1 g3 + e1 f2 g4, zero-based
  v(flat3(0, 0, 0, dims)) = 0.5;
  v(flat3(1, 1, 1, dims)) = 0.5;
  v(flat3(1, 0, 2, dims)) = 0.5;
  v(flat3(0, 1, 3, dims)) = 0.5;
  return PureVector({dims.d1, dims.d2, dims.d3}, std::move(v));
}

PureVector appendix_b_u(int tail_terms, AppendixBDims dims) {
  check_appendix_b_dims(tail_terms, dims);
  Vector u = Vector::Zero(dims.d1 * dims.d2 * dims.d3);
  // Term n (one-based) carries 2^{-(n+1)/2} on e_{2n+1} f1 g_n and e_{2n+2} f2 g_n.
  for (int n = 1; n <= tail_terms; ++n) {
    const double c = std::pow(2.0, -(n + 1) / 2.0);
    u(flat3(2 * n, 0, n - 1, dims)) = c;
    u(flat3(2 * n + 1, 1, n - 1, dims)) = c;
  }
  u /= u.norm();
  return PureVector({dims.d1, dims.d2, dims.d3}, std::move(u));
}

PureVector appendix_b_vector(double lambda, int tail_terms, std::optional<AppendixBDims> dims) {
  if (!(lambda >= 0.0 && lambda <= 1.0)) {
    throw std::invalid_argument("appendix_b_vector: lambda must lie in [0, 1]");
  }
  const AppendixBDims d = dims.value_or(appendix_b_dims(tail_terms));
  check_appendix_b_dims(tail_terms, d);
  const Vector v0 = appendix_b_v0(d).amplitudes();
  const Vector u = appendix_b_u(tail_terms, d).amplitudes();
  Vector v = (1.0 - lambda) * v0 + std::sqrt(lambda * (2.0 - lambda)) * u;
  v /= v.norm();
  return PureVector({d.d1, d.d2, d.d3}, std::move(v));
}

}  // namespace bellmetric

#pragma once

#include <array>
#include <optional>
#include <span>

#include "bellmetric/operator.hpp"

namespace bellmetric {

/// Label of the product basis vector e_i (x) f_j, zero-based.
struct BasisIndexPair {
  int i = 0;
  int j = 0;
  friend bool operator==(const BasisIndexPair&, const BasisIndexPair&) = default;
};

/// A 2x2 product block span{e_a (x) f_b : a in left, b in right}.
struct FlipBlock {
  std::array<int, 2> left{0, 1};
  std::array<int, 2> right{0, 1};
};

namespace pauli {
Matrix x();
Matrix y();
Matrix z();
}  // namespace pauli

DensityOperator maximally_mixed(int d1, int d2);

/// c_a |e_{a.i} f_{a.j}> + c_b |e_{b.i} f_{b.j}> on d1 x d2.
PureVector two_level_pure(int d1, int d2, BasisIndexPair a, BasisIndexPair b, Complex ca,
                          Complex cb);

/// Projection onto (|01> - |10>)/sqrt(2) on 2 x 2.
DensityOperator singlet_projector();

/// (1/8) I + (1/4)(I - U) with U the swap on C^2 (x) C^2.
DensityOperator werner22();

/// Swap on the designated 2x2 block, zero on its complement. For d1 = d2 = 2
/// with the default block this is the full swap operator.
Matrix flip_operator(int d1, int d2, FlipBlock block = {});

/// Werner state placed on the block spanned by the first two basis vectors of
/// each factor.
DensityOperator embedded_werner(int d1, int d2);

/// A D A* / Tr(A D A*).
DensityOperator condition(const DensityOperator& d, const Matrix& a,
                          double condition_tol = tol::condition);

/// Conditioning on the projection onto span{e_i (x) f_j : i < n1, j < n2}.
DensityOperator truncate(const DensityOperator& d, int n1, int n2);
/// Square truncation, n1 = n2 = n.
DensityOperator truncate(const DensityOperator& d, int n);

/// Reduced density operator of `x` on the factors listed in `keep` (ascending,
/// zero-based, one or two entries). A single kept factor yields dims (d, 1).
DensityOperator reduced(const PureVector& x, std::span<const int> keep);

struct AppendixBDims {
  int d1 = 0;
  int d2 = 2;
  int d3 = 0;
};

/// Smallest truncation that holds `tail_terms` terms of the geometric tail.
AppendixBDims appendix_b_dims(int tail_terms);

/// Four-term endpoint vector on H1 (x) H2 (x) H3 whose reduction is P/2 (x) I/2.
PureVector appendix_b_v0(AppendixBDims dims);
/// Geometric tail vector, truncated to `tail_terms` terms and renormalized.
PureVector appendix_b_u(int tail_terms, AppendixBDims dims);
/// (1 - lambda) v0 + sqrt(lambda (2 - lambda)) u.
PureVector appendix_b_vector(double lambda, int tail_terms,
                             std::optional<AppendixBDims> dims = std::nullopt);

}  // namespace bellmetric

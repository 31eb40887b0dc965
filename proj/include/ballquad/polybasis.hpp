#pragma once

#include <Eigen/Core>
#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "ballquad/geometry.hpp"

namespace ballquad {

// dim P_n(R^3) = (n+1)(n+2)(n+3)/6.
std::int64_t dim_poly(int n);

// Exponent triples of total degree <= n in graded lexicographic order:
// by total degree, then lexicographically ascending on (a1, a2, a3).
struct MultiIndexSet {
  int degree = 0;
  std::vector<std::array<int, 3>> indices;

  std::size_t size() const { return indices.size(); }
};

MultiIndexSet graded_lex(int n);

// Product Chebyshev basis of total degree <= n on a box.  An optional column
// mask (strictly increasing positions into the full graded-lex list) restricts
// the basis to a subset of columns; no mask means all columns.
struct ChebBasis {
  Box3 box{};
  MultiIndexSet index_set;
  std::optional<std::vector<int>> column_mask;

  std::size_t columns() const {
    return column_mask ? column_mask->size() : index_set.size();
  }
};

// Vandermonde matrix V with V(i, j) = prod_k T_{a_k(j)}(sigma_k(P_i)) where
// sigma_k maps box edge k onto [-1, 1].  Coordinates may stick out of the box
// by at most 1e-12 of the edge width (then they are clamped); anything further
// out raises PointOutsideBox.  Rows depend only on their own point, so the
// matrix of a point-list prefix is the row prefix of the full matrix.
Eigen::MatrixXd cheb_vandermonde(const ChebBasis& basis,
                                 std::span<const Eigen::Vector3d> points);

}  // namespace ballquad

#include "ballquad/polybasis.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "ballquad/errors.hpp"

namespace ballquad {

std::int64_t dim_poly(int n) {
  if (n < 0) throw std::invalid_argument("dim_poly: degree must be >= 0");
  const std::int64_t m = n;
  return (m + 1) * (m + 2) * (m + 3) / 6;
}

MultiIndexSet graded_lex(int n) {
  MultiIndexSet set;
  set.degree = n;
  set.indices.reserve(static_cast<std::size_t>(dim_poly(n)));
  for (int g = 0; g <= n; ++g) {
    for (int a1 = 0; a1 <= g; ++a1) {
      for (int a2 = 0; a2 + a1 <= g; ++a2) {
        set.indices.push_back({a1, a2, g - a1 - a2});
      }
    }
  }
  return set;
}

namespace {

// Allow points to poke out of the box by 1e-12 of the edge width; in sigma
// coordinates that is 2e-12 past +/-1.
constexpr double kSigmaSlack = 2e-12;

}  // namespace

Eigen::MatrixXd cheb_vandermonde(const ChebBasis& basis,
                                 std::span<const Eigen::Vector3d> points) {
  const int n = basis.index_set.degree;
  const auto& all = basis.index_set.indices;
  const std::size_t cols = basis.columns();
  if (basis.column_mask) {
    int prev = -1;
    for (int c : *basis.column_mask) {
      if (c <= prev || c >= static_cast<int>(all.size())) {
        throw std::invalid_argument(
            "cheb_vandermonde: column mask must be strictly increasing and in range");
      }
      prev = c;
    }
  }
  for (int k = 0; k < 3; ++k) {
    if (!(basis.box.lo[k] < basis.box.hi[k])) {
      throw std::invalid_argument("cheb_vandermonde: degenerate box");
    }
  }

  Eigen::MatrixXd v(static_cast<Eigen::Index>(points.size()),
                    static_cast<Eigen::Index>(cols));
  // Chebyshev values per axis, T[k*(n+1) + d] = T_d(sigma_k).
  std::vector<double> t(static_cast<std::size_t>(3 * (n + 1)));

  for (std::size_t i = 0; i < points.size(); ++i) {
    for (int k = 0; k < 3; ++k) {
      const double lo = basis.box.lo[k], hi = basis.box.hi[k];
      double sigma = (2.0 * points[i][k] - hi - lo) / (hi - lo);
      if (sigma < -1.0 - kSigmaSlack || sigma > 1.0 + kSigmaSlack) {
        throw PointOutsideBox("cheb_vandermonde: point " + std::to_string(i) +
                              ", axis " + std::to_string(k) +
                              " maps to sigma = " + std::to_string(sigma));
      }
      sigma = std::clamp(sigma, -1.0, 1.0);
      double* tk = &t[static_cast<std::size_t>(k * (n + 1))];
      tk[0] = 1.0;
      if (n >= 1) tk[1] = sigma;
      for (int d = 2; d <= n; ++d) {
        tk[d] = 2.0 * sigma * tk[d - 1] - tk[d - 2];
      }
    }
    const double* t0 = &t[0];
    const double* t1 = &t[static_cast<std::size_t>(n + 1)];
    const double* t2 = &t[static_cast<std::size_t>(2 * (n + 1))];
    for (std::size_t c = 0; c < cols; ++c) {
      const auto& a =
          all[basis.column_mask
                  ? static_cast<std::size_t>((*basis.column_mask)[c])
                  : c];
      v(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(c)) =
          t0[a[0]] * t1[a[1]] * t2[a[2]];
    }
  }
  return v;
}

}  // namespace ballquad

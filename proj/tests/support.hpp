// Shared test-only helpers: independent oracles and input generators.
#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <limits>
#include <random>
#include <vector>

#include "ballquad/geometry.hpp"

namespace testsupport {

// Exhaustive NNLS reference for small problems: try every support subset,
// solve the unconstrained LS on it, keep the best strictly-feasible solution.
// 2^k subsets, so k <= ~16.
struct BruteForceNnls {
  Eigen::VectorXd u;
  double objective = std::numeric_limits<double>::infinity();
};

inline BruteForceNnls brute_force_nnls(const Eigen::MatrixXd& a,
                                       const Eigen::VectorXd& b) {
  const int k = static_cast<int>(a.cols());
  BruteForceNnls best;
  best.u = Eigen::VectorXd::Zero(k);
  best.objective = b.norm();  // empty support
  for (std::uint32_t mask = 1; mask < (1u << k); ++mask) {
    std::vector<int> cols;
    for (int j = 0; j < k; ++j) {
      if (mask & (1u << j)) cols.push_back(j);
    }
    Eigen::MatrixXd sub(a.rows(), static_cast<Eigen::Index>(cols.size()));
    for (std::size_t j = 0; j < cols.size(); ++j) {
      sub.col(static_cast<Eigen::Index>(j)) = a.col(cols[j]);
    }
    const Eigen::VectorXd z = sub.colPivHouseholderQr().solve(b);
    bool feasible = z.allFinite();
    for (Eigen::Index j = 0; feasible && j < z.size(); ++j) {
      if (!(z[j] > 0.0)) feasible = false;
    }
    if (!feasible) continue;
    Eigen::VectorXd u = Eigen::VectorXd::Zero(k);
    for (std::size_t j = 0; j < cols.size(); ++j) {
      u[cols[j]] = z[static_cast<Eigen::Index>(j)];
    }
    const double obj = (a * u - b).norm();
    if (obj < best.objective) {
      best.objective = obj;
      best.u = u;
    }
  }
  return best;
}

// Central-difference surface Jacobian of the sphere parametrization:
// |dP/dt x dP/dphi| evaluated numerically.  Exact value is r^2.
inline double fd_sphere_jacobian(const ballquad::Ball& b, double t, double phi,
                                 double h = 1e-5) {
  const auto p = [&](double tt, double pp) {
    return ballquad::sphere_map(b, tt, pp);
  };
  const Eigen::Vector3d dt = (p(t + h, phi) - p(t - h, phi)) / (2.0 * h);
  const Eigen::Vector3d dphi = (p(t, phi + h) - p(t, phi - h)) / (2.0 * h);
  return dt.cross(dphi).norm();
}

// Deterministic uniform double in [lo, hi) from a 64-bit engine.
inline double uniform(std::mt19937_64& rng, double lo, double hi) {
  const double unit = static_cast<double>(rng() >> 11) * 0x1.0p-53;
  return lo + (hi - lo) * unit;
}

inline Eigen::MatrixXd random_matrix(std::mt19937_64& rng, Eigen::Index m,
                                     Eigen::Index k, double lo = -1.0,
                                     double hi = 1.0) {
  Eigen::MatrixXd a(m, k);
  for (Eigen::Index i = 0; i < m; ++i) {
    for (Eigen::Index j = 0; j < k; ++j) {
      a(i, j) = uniform(rng, lo, hi);
    }
  }
  return a;
}

}  // namespace testsupport

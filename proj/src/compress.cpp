#include "ballquad/compress.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "ballquad/summation.hpp"

namespace ballquad {

double CompressedRule::weight_sum() const {
  KahanSum acc;
  for (double w : weights) acc.add(w);
  return acc.value();
}

Eigen::VectorXd qmc_moments(const WeightedPointSet& pts,
                            const ChebBasis& basis) {
  const std::size_t m = pts.size();
  const Eigen::Index cols = static_cast<Eigen::Index>(basis.columns());
  Eigen::VectorXd sum = Eigen::VectorXd::Zero(cols);
  Eigen::VectorXd comp = Eigen::VectorXd::Zero(cols);

  // Blocked V^T w with componentwise compensated accumulation across blocks.
  constexpr std::size_t kBlock = 8192;
  for (std::size_t off = 0; off < m; off += kBlock) {
    const std::size_t len = std::min(kBlock, m - off);
    const Eigen::MatrixXd v = cheb_vandermonde(
        basis, std::span<const Eigen::Vector3d>(pts.points).subspan(off, len));
    const Eigen::Map<const Eigen::VectorXd> w(pts.weights.data() + off,
                                              static_cast<Eigen::Index>(len));
    const Eigen::VectorXd partial = v.transpose() * w;
    for (Eigen::Index j = 0; j < cols; ++j) {
      const double x = partial[j];
      const double t = sum[j] + x;
      if (std::abs(sum[j]) >= std::abs(x)) {
        comp[j] += (sum[j] - t) + x;
      } else {
        comp[j] += (x - t) + sum[j];
      }
      sum[j] = t;
    }
  }
  return sum + comp;
}

ChebBasis select_surface_basis(const WeightedPointSet& pts, int degree,
                               double rank_tol) {
  const std::int64_t dim = dim_poly(degree);
  const std::size_t m = pts.size();
  if (static_cast<std::int64_t>(m) < dim) {
    throw std::invalid_argument(
        "select_surface_basis: need at least " + std::to_string(dim) +
        " points, got " + std::to_string(m));
  }

  ChebBasis full;
  full.box = pts.domain_box;
  full.index_set = graded_lex(degree);

  const std::size_t probe =
      std::min<std::size_t>(2 * static_cast<std::size_t>(dim), m);
  const Eigen::MatrixXd v = cheb_vandermonde(
      full, std::span<const Eigen::Vector3d>(pts.points).first(probe));
  const PivotedQr qr = qr_colpivot(v);
  const int rank = numerical_rank(qr, rank_tol);
  if (rank == 0) {
    throw RankZero("select_surface_basis: Vandermonde has numerical rank 0");
  }
  if (rank == static_cast<int>(dim)) {
    return full;  // full rank: keep every column, no mask
  }
  std::vector<int> mask(qr.perm.begin(), qr.perm.begin() + rank);
  std::sort(mask.begin(), mask.end());
  full.column_mask = std::move(mask);
  return full;
}

CompressResult compress(const WeightedPointSet& pts, int degree,
                        const CompressOptions& options) {
  if (!(options.eps > 0.0)) {
    throw std::invalid_argument("compress: eps must be > 0");
  }
  if (!(options.growth > 1.0)) {
    throw std::invalid_argument("compress: growth must be > 1");
  }
  const std::size_t total = pts.size();
  const std::int64_t dim = dim_poly(degree);
  const double probe_tol = options.rank_tol.value_or(default_rank_tol(
      static_cast<Eigen::Index>(
          std::min<std::size_t>(2 * static_cast<std::size_t>(dim), total)),
      static_cast<Eigen::Index>(dim)));

  const ChebBasis basis = select_surface_basis(pts, degree, probe_tol);
  const std::size_t n_eff = basis.columns();
  if (total < n_eff) {
    throw std::invalid_argument("compress: point set smaller than the basis");
  }

  const Eigen::VectorXd p = qmc_moments(pts, basis);

  std::size_t m = options.m1.value_or(2 * n_eff);
  m = std::clamp(m, n_eff, total);

  CompressionReport report;
  for (;;) {
    const auto t0 = std::chrono::steady_clock::now();
    const Eigen::MatrixXd v = cheb_vandermonde(
        basis, std::span<const Eigen::Vector3d>(pts.points).first(m));
    const PivotedQr qr = qr_colpivot(v);
    const double rank_tol = options.rank_tol.value_or(
        default_rank_tol(static_cast<Eigen::Index>(m),
                         static_cast<Eigen::Index>(n_eff)));
    const int rank = numerical_rank(qr, rank_tol);

    CompressionIteration iter;
    iter.m = m;
    iter.residual = std::numeric_limits<double>::infinity();
    NnlsResult nn;
    if (rank == static_cast<int>(n_eff)) {
      // Orthogonalized moment matching: V Pi = Q R, so V^T u = p becomes
      // Q^T u = R^-T Pi^T p.
      Eigen::VectorXd pp(static_cast<Eigen::Index>(n_eff));
      for (std::size_t j = 0; j < n_eff; ++j) {
        pp[static_cast<Eigen::Index>(j)] = p[qr.perm[j]];
      }
      const Eigen::VectorXd ptil = tri_solve_transposed(qr.r, pp);
      nn = nnls(qr.q.transpose(), ptil, options.nnls);
      iter.residual = nn.residual_norm;
      iter.nnls_iterations = nn.iterations;
    }
    iter.elapsed_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
            .count();
    report.iterations.push_back(iter);

    if (iter.residual < options.eps) {
      CompressedRule rule;
      rule.degree = degree;
      rule.residual = iter.residual;
      rule.basis_rank = static_cast<int>(n_eff);
      for (int i : nn.support) {
        rule.nodes.push_back(pts.points[static_cast<std::size_t>(i)]);
        rule.weights.push_back(nn.u[i]);
      }
      report.final_m = m;
      report.compression_ratio =
          static_cast<double>(total) / static_cast<double>(rule.size());
      report.moments_preserved = static_cast<int>(n_eff);
      return CompressResult{std::move(rule), std::move(report), basis};
    }

    if (m == total) {
      report.final_m = m;
      report.moments_preserved = static_cast<int>(n_eff);
      throw ResidualNotMet(
          "compress: residual " + std::to_string(iter.residual) +
              " above tolerance even on the full set of " +
              std::to_string(total) + " points",
          report);
    }
    const double grown = options.growth * static_cast<double>(m);
    m = std::min(total,
                 static_cast<std::size_t>(std::ceil(grown)));
  }
}

double validate_rule(const CompressedRule& rule, const WeightedPointSet& pts,
                     const ChebBasis& basis) {
  const Eigen::VectorXd p = qmc_moments(pts, basis);
  const Eigen::MatrixXd v = cheb_vandermonde(
      basis, std::span<const Eigen::Vector3d>(rule.nodes));
  const Eigen::Map<const Eigen::VectorXd> w(
      rule.weights.data(), static_cast<Eigen::Index>(rule.weights.size()));
  return (v.transpose() * w - p).norm() / p.norm();
}

}  // namespace ballquad

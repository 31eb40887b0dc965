#include "ballquad/linalg.hpp"

#include <Eigen/QR>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "ballquad/errors.hpp"

namespace ballquad {

namespace {

// Columns whose remaining tail norm falls below this fraction of the first
// pivot are treated as exhausted and stop the factorization.
constexpr double kPivotTruncation = 1e-14;

// Relative floor for triangular diagonals.
constexpr double kDiagFloor = 1e-14;

}  // namespace

PivotedQr qr_colpivot(const Eigen::MatrixXd& a) {
  const Eigen::Index m = a.rows();
  const Eigen::Index k = a.cols();
  const Eigen::Index steps = std::min(m, k);

  PivotedQr out;
  out.perm.resize(static_cast<std::size_t>(k));
  std::iota(out.perm.begin(), out.perm.end(), 0);

  Eigen::MatrixXd work = a;          // reflections accumulate here
  Eigen::MatrixXd house(m, steps);   // Householder vectors, one per step
  Eigen::VectorXd tau(steps);
  double r00 = 0.0;
  Eigen::Index rank = 0;

  for (Eigen::Index s = 0; s < steps; ++s) {
    // Greedy pivot: recompute the live tail norms and take the largest
    // (smallest column index on ties).
    Eigen::Index best = s;
    double best_norm = work.col(s).tail(m - s).norm();
    for (Eigen::Index j = s + 1; j < k; ++j) {
      const double nj = work.col(j).tail(m - s).norm();
      if (nj > best_norm) {
        best_norm = nj;
        best = j;
      }
    }
    if (s == 0) r00 = best_norm;
    if (best_norm == 0.0 || best_norm <= kPivotTruncation * r00) break;
    if (best != s) {
      work.col(s).swap(work.col(best));
      std::swap(out.perm[static_cast<std::size_t>(s)],
                out.perm[static_cast<std::size_t>(best)]);
    }

    // Householder reflector for the pivot column tail.
    Eigen::VectorXd v = work.col(s).tail(m - s);
    const double alpha = v[0] >= 0.0 ? -best_norm : best_norm;
    v[0] -= alpha;
    const double vsq = v.squaredNorm();
    tau[s] = vsq > 0.0 ? 2.0 / vsq : 0.0;
    house.col(s).setZero();
    house.col(s).tail(m - s) = v;

    work(s, s) = alpha;
    work.col(s).tail(m - s - 1).setZero();
    if (s + 1 < k && tau[s] > 0.0) {
      auto trailing = work.block(s, s + 1, m - s, k - s - 1);
      const Eigen::RowVectorXd vt = v.transpose() * trailing;
      trailing.noalias() -= tau[s] * v * vt;
    }
    ++rank;
  }

  out.rank = static_cast<int>(rank);
  out.r = work.topRows(rank).triangularView<Eigen::Upper>();

  // Thin Q = H_0 ... H_{rank-1} [I_rank; 0], built by applying the
  // reflectors backwards to the identity block.
  out.q = Eigen::MatrixXd::Zero(m, rank);
  for (Eigen::Index i = 0; i < rank; ++i) out.q(i, i) = 1.0;
  for (Eigen::Index s = rank - 1; s >= 0; --s) {
    if (tau[s] == 0.0) continue;
    const auto v = house.col(s).tail(m - s);
    auto block = out.q.bottomRows(m - s);
    const Eigen::RowVectorXd vt = v.transpose() * block;
    block.noalias() -= tau[s] * v * vt;
  }
  return out;
}

double default_rank_tol(Eigen::Index m, Eigen::Index k) {
  return static_cast<double>(std::max(m, k)) * 2.2e-16;
}

int numerical_rank(const PivotedQr& qr, double rank_tol) {
  if (qr.rank == 0) return 0;
  const double head = std::abs(qr.r(0, 0));
  int r = 0;
  for (int i = 0; i < qr.rank; ++i) {
    if (std::abs(qr.r(i, i)) > rank_tol * head) {
      r = i + 1;
    } else {
      break;
    }
  }
  return r;
}

Eigen::VectorXd tri_solve_transposed(const Eigen::MatrixXd& r,
                                     const Eigen::VectorXd& p) {
  const Eigen::Index n = r.rows();
  if (r.cols() != n || p.size() != n) {
    throw std::invalid_argument("tri_solve_transposed: shape mismatch");
  }
  if (n == 0) return Eigen::VectorXd();
  const double head = std::abs(r(0, 0));
  for (Eigen::Index i = 0; i < n; ++i) {
    if (std::abs(r(i, i)) <= kDiagFloor * head) {
      throw SingularTriangular(
          "tri_solve_transposed: diagonal entry " + std::to_string(i) +
          " below 1e-14 of the leading entry");
    }
  }
  // R^T is lower triangular: forward substitution.
  Eigen::VectorXd y(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    double acc = p[i];
    for (Eigen::Index j = 0; j < i; ++j) acc -= r(j, i) * y[j];
    y[i] = acc / r(i, i);
  }
  return y;
}

namespace {

// Unconstrained least squares on the passive columns.  Plain Householder QR
// is enough for the well-conditioned subsets the active-set loop produces; a
// rank-revealing fallback handles the (rare) degenerate subset.
Eigen::VectorXd passive_ls(const Eigen::MatrixXd& a,
                           const std::vector<int>& passive,
                           const Eigen::VectorXd& b) {
  const Eigen::Index p = static_cast<Eigen::Index>(passive.size());
  Eigen::MatrixXd ap(a.rows(), p);
  for (Eigen::Index j = 0; j < p; ++j) {
    ap.col(j) = a.col(passive[static_cast<std::size_t>(j)]);
  }
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(ap);
  const auto& rdiag = qr.matrixQR().diagonal();
  double dmax = 0.0, dmin = std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < std::min(p, a.rows()); ++i) {
    dmax = std::max(dmax, std::abs(rdiag[i]));
    dmin = std::min(dmin, std::abs(rdiag[i]));
  }
  Eigen::VectorXd z;
  if (p > a.rows() || dmin <= 1e-13 * dmax) {
    z = ap.colPivHouseholderQr().solve(b);
  } else {
    z = qr.solve(b);
  }
  if (!z.allFinite()) {
    z = ap.colPivHouseholderQr().solve(b);
  }
  return z;
}

}  // namespace

NnlsResult nnls(const Eigen::MatrixXd& a, const Eigen::VectorXd& b,
                const NnlsOptions& options) {
  const Eigen::Index k = a.cols();
  if (b.size() != a.rows()) {
    throw std::invalid_argument("nnls: b length != rows(A)");
  }

  NnlsResult res;
  res.kkt_tol = options.kkt_tol >= 0.0
                    ? options.kkt_tol
                    : 1e-12 * (a.transpose() * b).cwiseAbs().maxCoeff();
  const int max_iter =
      options.max_iter > 0 ? options.max_iter : 10 * static_cast<int>(k);

  Eigen::VectorXd u = Eigen::VectorXd::Zero(k);
  std::vector<char> in_passive(static_cast<std::size_t>(k), 0);
  std::vector<int> passive;
  Eigen::VectorXd resid = b;
  double prev_obj = resid.norm();
  const double bnorm = prev_obj;
  int outer = 0;

  for (;;) {
    const Eigen::VectorXd grad = a.transpose() * resid;
    int pick = -1;
    double best = res.kkt_tol;
    for (Eigen::Index j = 0; j < k; ++j) {
      if (!in_passive[static_cast<std::size_t>(j)] && grad[j] > best) {
        best = grad[j];  // strict > keeps the smallest index on ties
        pick = static_cast<int>(j);
      }
    }
    if (pick < 0) break;  // KKT satisfied on the zero set
    if (outer >= max_iter) {
      res.status = NnlsStatus::kMaxIterations;
      break;
    }
    in_passive[static_cast<std::size_t>(pick)] = 1;
    passive.push_back(pick);

    // Inner loop: pull the passive solution back into the feasible cone.
    int inner_guard = 0;
    for (;;) {
      const Eigen::VectorXd z = passive_ls(a, passive, b);
      double zmax = 0.0;
      for (Eigen::Index i = 0; i < z.size(); ++i) {
        zmax = std::max(zmax, std::abs(z[i]));
      }
      const double zfloor = 1e-14 * zmax;
      bool feasible = true;
      for (Eigen::Index i = 0; i < z.size(); ++i) {
        if (!(z[i] > zfloor)) {
          feasible = false;
          break;
        }
      }
      if (feasible) {
        u.setZero();
        for (std::size_t i = 0; i < passive.size(); ++i) {
          u[passive[i]] = z[static_cast<Eigen::Index>(i)];
        }
        break;
      }

      // Step length to the first variable that hits zero (smallest index on
      // ties), then park the blockers at exactly zero and drop them.
      std::vector<double> ratio(passive.size(),
                                std::numeric_limits<double>::infinity());
      double alpha = std::numeric_limits<double>::infinity();
      for (std::size_t i = 0; i < passive.size(); ++i) {
        const double zi = z[static_cast<Eigen::Index>(i)];
        if (zi > zfloor) continue;
        const double ui = u[passive[i]];
        const double denom = ui - zi;
        ratio[i] = denom > 0.0 ? ui / denom : 0.0;
        if (ratio[i] < alpha) alpha = ratio[i];
      }
      std::vector<int> still;
      still.reserve(passive.size());
      for (std::size_t i = 0; i < passive.size(); ++i) {
        const double zi = z[static_cast<Eigen::Index>(i)];
        double ui = u[passive[i]] + alpha * (zi - u[passive[i]]);
        if (ratio[i] <= alpha * (1.0 + 1e-10)) ui = 0.0;  // blocking variable
        if (ui <= 0.0) {
          u[passive[i]] = 0.0;
          in_passive[static_cast<std::size_t>(passive[i])] = 0;
        } else {
          u[passive[i]] = ui;
          still.push_back(passive[i]);
        }
      }
      passive.swap(still);
      if (passive.empty()) break;
      if (++inner_guard > static_cast<int>(k) + 1) {
        throw DegenerateCycle("nnls: inner loop failed to make progress");
      }
    }

    resid = b - a * u;
    const double obj = resid.norm();
    if (obj > prev_obj + std::max(1e-10 * prev_obj, 1e-13 * bnorm)) {
      throw DegenerateCycle("nnls: residual increased across outer iterations");
    }
    prev_obj = obj;
    ++outer;
  }

  res.u = u;
  res.residual_norm = (b - a * u).norm();
  for (Eigen::Index i = 0; i < k; ++i) {
    if (u[i] > 0.0) res.support.push_back(static_cast<int>(i));
  }
  res.iterations = outer;
  return res;
}

}  // namespace ballquad

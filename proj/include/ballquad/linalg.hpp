#pragma once

#include <Eigen/Core>
#include <vector>

namespace ballquad {

// Householder QR with greedy column pivoting, A * perm = Q * R:
//   q     m x r, orthonormal columns,
//   r     r x k upper triangular (trapezoidal when r < k), |R_00| >= |R_11| >= ...
//   perm  column permutation (perm[j] = original index of pivoted column j),
//   rank  r = number of Householder steps taken before the remaining tail
//         norms fell below 1e-14 * |R_00|.
struct PivotedQr {
  Eigen::MatrixXd q;
  Eigen::MatrixXd r;
  std::vector<int> perm;
  int rank = 0;
};

PivotedQr qr_colpivot(const Eigen::MatrixXd& a);

// Default rank tolerance for an m x k matrix: max(m, k) * 2.2e-16.
double default_rank_tol(Eigen::Index m, Eigen::Index k);

// Largest r such that |R_rr| > rank_tol * |R_00| (0 for an all-zero matrix).
int numerical_rank(const PivotedQr& qr, double rank_tol);

// Solve R^T y = p by forward substitution, R square upper triangular.
// Throws SingularTriangular when a diagonal entry falls below 1e-14 * |R_00|.
Eigen::VectorXd tri_solve_transposed(const Eigen::MatrixXd& r,
                                     const Eigen::VectorXd& p);

struct NnlsOptions {
  // KKT threshold; < 0 means the default 1e-12 * ||A^T b||_inf.
  double kkt_tol = -1.0;
  // Outer iteration cap; <= 0 means the default 10 * cols(A).
  int max_iter = 0;
};

enum class NnlsStatus { kConverged, kMaxIterations };

struct NnlsResult {
  Eigen::VectorXd u;            // >= 0 componentwise
  double residual_norm = 0.0;   // ||A u - b||_2
  std::vector<int> support;     // indices with u_i > 0, ascending
  int iterations = 0;           // outer (insertion) steps taken
  double kkt_tol = 0.0;         // threshold actually used
  NnlsStatus status = NnlsStatus::kConverged;
};

// Lawson-Hanson active-set solver for min ||A u - b||_2 s.t. u >= 0.
// Ties in the gradient selection and in the inner step-length search go to
// the smallest index; the residual norm is non-increasing across outer
// iterations (a significant increase raises DegenerateCycle, as does a
// stalled inner loop).  Hitting max_iter returns the best iterate found with
// status kMaxIterations.
NnlsResult nnls(const Eigen::MatrixXd& a, const Eigen::VectorXd& b,
                const NnlsOptions& options = {});

}  // namespace ballquad

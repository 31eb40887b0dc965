#pragma once

#include <Eigen/Core>
#include <cstddef>
#include <optional>
#include <vector>

#include "ballquad/errors.hpp"
#include "ballquad/linalg.hpp"
#include "ballquad/lowdisc.hpp"
#include "ballquad/polybasis.hpp"

namespace ballquad {

// Positive-weight quadrature rule extracted from a weighted point set.
struct CompressedRule {
  std::vector<Eigen::Vector3d> nodes;
  std::vector<double> weights;   // > 0
  int degree = 0;
  double residual = 0.0;         // moment-match residual in the orthogonalized basis
  int basis_rank = 0;            // number of moments matched

  std::size_t size() const { return nodes.size(); }
  double weight_sum() const;
};

struct CompressionIteration {
  std::size_t m = 0;          // prefix length tried
  double residual = 0.0;      // +inf when the prefix was rank-deficient
  int nnls_iterations = 0;
  double elapsed_seconds = 0.0;
};

struct CompressionReport {
  std::vector<CompressionIteration> iterations;  // strictly increasing m
  std::size_t final_m = 0;
  double compression_ratio = 0.0;  // M / extracted nodes
  int moments_preserved = 0;
};

// Raised when even the full point set cannot meet the residual tolerance.
class ResidualNotMet : public Error {
 public:
  ResidualNotMet(const std::string& what, CompressionReport report)
      : Error(what), report(std::move(report)) {}

  CompressionReport report;
};

struct CompressOptions {
  double eps = 1e-10;                 // residual tolerance
  std::optional<std::size_t> m1;      // first prefix; default 2 * basis columns
  double growth = 2.0;                // prefix growth factor, > 1
  std::optional<double> rank_tol;     // default max(m,k) * 2.2e-16
  NnlsOptions nnls;
};

// QMC moments p_j = sum_i w_i phi_j(P_i) over the whole set, accumulated with
// compensated summation.
Eigen::VectorXd qmc_moments(const WeightedPointSet& pts, const ChebBasis& basis);

// Restrict the degree-n basis to the columns that are independent on the
// sampled geometry: pivoted QR of the Vandermonde of the first
// min(2 * dim_poly(n), M) points, keep the first `rank` pivot columns
// (re-sorted ascending).  Full rank yields an unmasked basis.  The mask is
// computed once per point set and reused for the whole compression run.
// Throws RankZero when no column survives.
ChebBasis select_surface_basis(const WeightedPointSet& pts, int degree,
                               double rank_tol);

struct CompressResult {
  CompressedRule rule;
  CompressionReport report;
  ChebBasis basis;  // the basis the moments were matched in
};

// Bottom-up moment matching: try NNLS on a growing prefix of the point set
// (m1, then growth * m, ... capped at M) until the orthogonalized residual
// drops below eps.  Each prefix is orthogonalized by pivoted QR, the moment
// vector transformed accordingly, and the positive NNLS weights define the
// rule.  Throws ResidualNotMet (carrying the report) if the full set fails.
CompressResult compress(const WeightedPointSet& pts, int degree,
                        const CompressOptions& options = {});

// Relative moment-match error of a rule in the raw (unorthogonalized) basis:
// ||V(nodes)^T w - p||_2 / ||p||_2 with p the QMC moments of `pts`.
double validate_rule(const CompressedRule& rule, const WeightedPointSet& pts,
                     const ChebBasis& basis);

}  // namespace ballquad

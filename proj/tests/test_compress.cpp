#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <random>

#include "ballquad/compress.hpp"
#include "ballquad/errors.hpp"
#include "ballquad/quadrature.hpp"
#include "support.hpp"

using ballquad::BallUnion;
using ballquad::ChebBasis;
using ballquad::CompressOptions;
using ballquad::CompressResult;
using ballquad::WeightedPointSet;
using Eigen::Vector3d;

namespace {

BallUnion three_balls() {
  return BallUnion({{Vector3d(0, 0, 0), 1.4},
                    {Vector3d(0, 1.3, -0.2), 0.9},
                    {Vector3d(2.5, 0, 1), 1.0}});
}

ChebBasis full_basis(const WeightedPointSet& pts, int n) {
  ChebBasis b;
  b.box = pts.domain_box;
  b.index_set = ballquad::graded_lex(n);
  return b;
}

// Hand-built set: four non-coplanar points in the unit ball.
WeightedPointSet four_points() {
  WeightedPointSet pts;
  pts.domain_box = {Vector3d(-1, -1, -1), Vector3d(1, 1, 1)};
  pts.points = {Vector3d(0.1, 0.0, -0.2), Vector3d(0.5, 0.1, 0.0),
                Vector3d(-0.1, 0.6, 0.1), Vector3d(0.0, -0.2, 0.55)};
  pts.weights = {0.9, 1.1, 0.75, 1.3};
  pts.owner = {ballquad::kVolumeOwner, ballquad::kVolumeOwner,
               ballquad::kVolumeOwner, ballquad::kVolumeOwner};
  pts.total_generated = 4;
  pts.measure_estimate = 0.9 + 1.1 + 0.75 + 1.3;
  return pts;
}

}  // namespace

TEST_CASE("qmc moments: constant column accumulates the measure") {
  const WeightedPointSet pts = ballquad::sample_volume(three_balls(), 20000);
  const ChebBasis basis = full_basis(pts, 3);
  const Eigen::VectorXd p = ballquad::qmc_moments(pts, basis);
  REQUIRE(p.size() == 20);
  CHECK(std::abs(p[0] - pts.measure_estimate) <=
        1e-12 * pts.measure_estimate);
}

TEST_CASE("qmc moments: single point set reproduces the basis row") {
  WeightedPointSet pts;
  pts.domain_box = {Vector3d(-1, -1, -1), Vector3d(1, 1, 1)};
  pts.points = {Vector3d(0.3, -0.4, 0.8)};
  pts.weights = {2.0};
  pts.owner = {ballquad::kVolumeOwner};
  pts.total_generated = 1;
  pts.measure_estimate = 2.0;
  const ChebBasis basis = full_basis(pts, 2);
  const Eigen::VectorXd p = ballquad::qmc_moments(pts, basis);
  const Eigen::MatrixXd v = ballquad::cheb_vandermonde(
      basis, std::span<const Vector3d>(pts.points));
  CHECK((p - 2.0 * v.row(0).transpose()).cwiseAbs().maxCoeff() <= 1e-15);
}

TEST_CASE("qmc moments: odd moments of a centered ball are near zero") {
  const BallUnion solo({{Vector3d(0, 0, 0), 1.0}});
  const WeightedPointSet pts = ballquad::sample_volume(solo, 50000);
  const ChebBasis basis = full_basis(pts, 1);
  const Eigen::VectorXd p = ballquad::qmc_moments(pts, basis);
  // columns 1..3 are z, y, x on the symmetric ball
  for (int j = 1; j < 4; ++j) {
    CHECK(std::abs(p[j]) <= 0.02 * p[0]);
  }
}

TEST_CASE("basis selection: full rank volume basis keeps all columns") {
  const WeightedPointSet pts = ballquad::sample_volume(three_balls(), 5000);
  const ChebBasis basis = ballquad::select_surface_basis(
      pts, 3, ballquad::default_rank_tol(40, 20));
  CHECK(basis.columns() == 20);
  CHECK_FALSE(basis.column_mask.has_value());
}

TEST_CASE("basis selection: sphere rank is (n+1)^2 with an increasing mask") {
  const BallUnion solo({{Vector3d(0, 0, 0), 1.0}});
  for (int n : {2, 3}) {
    const auto dim = ballquad::dim_poly(n);
    const WeightedPointSet pts = ballquad::sample_surface(
        solo, static_cast<std::uint64_t>(4 * dim));
    const ChebBasis basis = ballquad::select_surface_basis(
        pts, n, ballquad::default_rank_tol(2 * dim, dim));
    CHECK(basis.columns() ==
          static_cast<std::size_t>((n + 1) * (n + 1)));
    REQUIRE(basis.column_mask.has_value());
    const auto& mask = *basis.column_mask;
    for (std::size_t i = 0; i + 1 < mask.size(); ++i) {
      CHECK(mask[i] < mask[i + 1]);
    }
    CHECK(mask.back() < dim);
  }
}

TEST_CASE("basis selection: refuses sets smaller than the full basis") {
  const WeightedPointSet pts = four_points();
  CHECK_THROWS_AS(ballquad::select_surface_basis(pts, 2, 1e-13),
                  std::invalid_argument);
}

TEST_CASE("compress: square nonsingular system reproduces the input") {
  const WeightedPointSet pts = four_points();
  const CompressResult res = ballquad::compress(pts, 1);
  CHECK(res.rule.size() == 4);
  CHECK(res.rule.residual <= 1e-12 * pts.measure_estimate);
  CHECK(res.report.final_m == 4);
  // unique exact solution: the original weights come back
  std::vector<double> sorted_in = pts.weights;
  std::vector<double> sorted_out = res.rule.weights;
  std::sort(sorted_in.begin(), sorted_in.end());
  std::sort(sorted_out.begin(), sorted_out.end());
  for (std::size_t i = 0; i < 4; ++i) {
    CHECK(sorted_out[i] == doctest::Approx(sorted_in[i]).epsilon(1e-10));
  }
}

TEST_CASE("compress: three-ball volume at degree 3") {
  const WeightedPointSet pts = ballquad::sample_volume(three_balls(), 20000);
  const CompressResult res = ballquad::compress(pts, 3);

  CHECK(res.rule.size() == 20);
  CHECK(res.rule.degree == 3);
  CHECK(res.rule.basis_rank == 20);
  CHECK(res.rule.residual < 1e-10);
  for (double w : res.rule.weights) CHECK(w > 0.0);

  // report bookkeeping
  const auto& iters = res.report.iterations;
  REQUIRE(!iters.empty());
  for (std::size_t i = 0; i + 1 < iters.size(); ++i) {
    CHECK(iters[i].m < iters[i + 1].m);
  }
  CHECK(iters.front().m == 40);  // 2 * dim by default
  CHECK(iters.back().m == res.report.final_m);
  CHECK(res.report.compression_ratio ==
        doctest::Approx(static_cast<double>(pts.size()) / 20.0));
  CHECK(res.report.moments_preserved == 20);

  // mass preservation: the constant is one of the matched moments
  CHECK(std::abs(res.rule.weight_sum() - pts.weight_sum()) <=
        1e-10 * pts.weight_sum());

  // raw-basis validation agrees
  CHECK(ballquad::validate_rule(res.rule, pts, res.basis) <= 1e-8);

  // nodes are a subset of the input points
  for (const Vector3d& node : res.rule.nodes) {
    bool found = false;
    for (const Vector3d& p : pts.points) {
      if ((node - p).norm() == 0.0) {
        found = true;
        break;
      }
    }
    CHECK(found);
  }
}

TEST_CASE("compress: compressed rule integrates low-degree polynomials like the full set") {
  const WeightedPointSet pts = ballquad::sample_volume(three_balls(), 20000);
  const CompressResult res = ballquad::compress(pts, 4);
  std::mt19937_64 rng(51);
  for (int trial = 0; trial < 20; ++trial) {
    const double a = testsupport::uniform(rng, -1, 1);
    const double b = testsupport::uniform(rng, -1, 1);
    const double c = testsupport::uniform(rng, -1, 1);
    const double d = testsupport::uniform(rng, -1, 1);
    const ballquad::Integrand g{"cubic", [=](const Vector3d& p) {
      const double s = a * p.x() + b * p.y() + c * p.z() + d;
      return s * s * s + a * p.x() * p.y() - c * p.z() + d;
    }};
    const double full = ballquad::apply(pts, g);
    const double compressed = ballquad::apply(res.rule, g);
    CHECK(std::abs(full - compressed) <= 1e-9 * std::max(1.0, std::abs(full)));
  }
}

TEST_CASE("compress: surface rule on a single sphere") {
  const BallUnion solo({{Vector3d(0.5, -1.0, 2.0), 1.5}});
  const WeightedPointSet pts = ballquad::sample_surface(solo, 2000);
  const CompressResult res = ballquad::compress(pts, 3);
  CHECK(res.rule.basis_rank == 16);  // (n+1)^2 on one sphere
  CHECK(res.rule.size() <= 16);
  CHECK(res.rule.residual < 1e-10);
  CHECK(ballquad::validate_rule(res.rule, pts, res.basis) <= 1e-8);
  CHECK(std::abs(res.rule.weight_sum() - pts.weight_sum()) <=
        1e-10 * pts.weight_sum());
}

TEST_CASE("compress: a fixed reshuffle of the input changes nodes, not moments") {
  const WeightedPointSet pts = ballquad::sample_volume(three_balls(), 20000);

  WeightedPointSet shuffled = pts;
  std::mt19937_64 rng(52);
  std::vector<std::size_t> order(pts.size());
  std::iota(order.begin(), order.end(), 0);
  std::shuffle(order.begin(), order.end(), rng);
  for (std::size_t i = 0; i < order.size(); ++i) {
    shuffled.points[i] = pts.points[order[i]];
    shuffled.weights[i] = pts.weights[order[i]];
    shuffled.owner[i] = pts.owner[order[i]];
  }

  const CompressResult res = ballquad::compress(shuffled, 3);
  CHECK(res.rule.size() == 20);
  CHECK(res.rule.residual < 1e-10);
  CHECK(ballquad::validate_rule(res.rule, shuffled, res.basis) <= 1e-8);

  // Same multiset of points: moments agree, so the rule also matches the
  // original ordering's moments.
  CHECK(ballquad::validate_rule(res.rule, pts, res.basis) <= 1e-8);
}

TEST_CASE("compress: m1 and growth options steer the schedule") {
  const WeightedPointSet pts = ballquad::sample_volume(three_balls(), 5000);

  CompressOptions opt;
  opt.m1 = pts.size();  // jump straight to the full set
  const CompressResult res = ballquad::compress(pts, 2, opt);
  CHECK(res.report.iterations.size() == 1);
  CHECK(res.report.final_m == pts.size());

  CompressOptions opt4;
  opt4.m1 = 20;
  opt4.growth = 4.0;
  const CompressResult res4 = ballquad::compress(pts, 2, opt4);
  const auto& iters = res4.report.iterations;
  for (std::size_t i = 0; i + 1 < iters.size(); ++i) {
    CHECK(iters[i + 1].m == std::min<std::size_t>(4 * iters[i].m, pts.size()));
  }
}

TEST_CASE("compress: unreachable tolerance fails with a full report") {
  const WeightedPointSet pts = ballquad::sample_volume(three_balls(), 2000);
  CompressOptions opt;
  opt.eps = 1e-30;  // below any attainable floating-point residual
  try {
    ballquad::compress(pts, 3, opt);
    FAIL("expected ResidualNotMet");
  } catch (const ballquad::ResidualNotMet& e) {
    CHECK(e.report.final_m == pts.size());
    REQUIRE(!e.report.iterations.empty());
    CHECK(e.report.iterations.back().m == pts.size());
    CHECK(e.report.iterations.back().residual > 0.0);
    CHECK(e.report.moments_preserved == 20);
  }
}

TEST_CASE("compress: degree 0 gives a single node carrying the mass") {
  const WeightedPointSet pts = ballquad::sample_volume(three_balls(), 1000);
  const CompressResult res = ballquad::compress(pts, 0);
  CHECK(res.rule.size() == 1);
  CHECK(res.rule.weights[0] ==
        doctest::Approx(pts.weight_sum()).epsilon(1e-12));
}

TEST_CASE("compress: input validation") {
  const WeightedPointSet pts = ballquad::sample_volume(three_balls(), 1000);
  CompressOptions bad_eps;
  bad_eps.eps = 0.0;
  CHECK_THROWS_AS(ballquad::compress(pts, 2, bad_eps), std::invalid_argument);
  CompressOptions bad_growth;
  bad_growth.growth = 1.0;
  CHECK_THROWS_AS(ballquad::compress(pts, 2, bad_growth),
                  std::invalid_argument);
}

TEST_CASE("validate_rule: full set validates to round-off, perturbations scale") {
  const WeightedPointSet pts = ballquad::sample_volume(three_balls(), 5000);
  const ChebBasis basis = full_basis(pts, 3);

  ballquad::CompressedRule identity;
  identity.nodes = pts.points;
  identity.weights = pts.weights;
  identity.degree = 3;
  identity.basis_rank = 20;
  CHECK(ballquad::validate_rule(identity, pts, basis) <= 1e-12);

  auto perturbed = identity;
  perturbed.weights[0] *= 1.0 + 1e-6;
  const double e1 = ballquad::validate_rule(perturbed, pts, basis);
  perturbed.weights[0] = identity.weights[0] * (1.0 + 2e-6);
  const double e2 = ballquad::validate_rule(perturbed, pts, basis);
  CHECK(e1 > 0.0);
  CHECK(e2 / e1 == doctest::Approx(2.0).epsilon(0.3));
}

#include "ballquad/quadrature.hpp"

#include <cmath>
#include <random>
#include <stdexcept>
#include <string>

#include "ballquad/summation.hpp"

namespace ballquad {

double apply(std::span<const Eigen::Vector3d> nodes,
             std::span<const double> weights, const Integrand& f) {
  if (nodes.size() != weights.size()) {
    throw std::invalid_argument("apply: nodes/weights length mismatch");
  }
  KahanSum acc;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const double fx = f.fn(nodes[i]);
    if (!std::isfinite(fx)) {
      throw NonFiniteValue("apply: integrand \"" + f.label +
                           "\" returned a non-finite value at node " +
                           std::to_string(i));
    }
    acc.add(weights[i] * fx);
  }
  return acc.value();
}

double apply(const WeightedPointSet& pts, const Integrand& f) {
  return apply(std::span<const Eigen::Vector3d>(pts.points),
               std::span<const double>(pts.weights), f);
}

double apply(const CompressedRule& rule, const Integrand& f) {
  return apply(std::span<const Eigen::Vector3d>(rule.nodes),
               std::span<const double>(rule.weights), f);
}

std::vector<Integrand> test_functions(const Eigen::Vector3d& p0) {
  std::vector<Integrand> fns;
  fns.push_back({"f1", [p0](const Eigen::Vector3d& p) {
                   return std::pow((p - p0).norm(), 5);
                 }});
  fns.push_back({"f2", [](const Eigen::Vector3d& p) {
                   return std::cos(p.x() + p.y() + p.z());
                 }});
  fns.push_back({"f3", [p0](const Eigen::Vector3d& p) {
                   return std::exp(-(p - p0).squaredNorm());
                 }});
  return fns;
}

namespace {

double pow_int(double x, int n) {
  double r = 1.0;
  double base = x;
  for (int e = n; e > 0; e >>= 1) {
    if (e & 1) r *= base;
    base *= base;
  }
  return r;
}

}  // namespace

ExactnessTrials exactness_trials(const CompressedRule& rule,
                                 const WeightedPointSet& pts, int n,
                                 int trials, std::uint64_t seed) {
  if (trials < 1) throw std::invalid_argument("exactness_trials: trials >= 1");
  std::mt19937_64 rng(seed);
  // Top 53 bits of each draw -> uniform double in [0, 1); independent of the
  // standard library's distribution internals.
  const auto unit = [&rng]() {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
  };

  ExactnessTrials out;
  out.errors.reserve(static_cast<std::size_t>(trials));
  KahanSum log_acc;
  for (int trial = 0; trial < trials; ++trial) {
    const double a = unit(), b = unit(), c = unit(), d = unit();
    const Integrand g{
        "poly_trial", [a, b, c, d, n](const Eigen::Vector3d& p) {
          return pow_int(a * p.x() + b * p.y() + c * p.z() + d, n);
        }};
    const double full = apply(pts, g);
    const double compressed = apply(rule, g);
    const double err = std::abs(compressed - full) / std::abs(full);
    out.errors.push_back(err);
    log_acc.add(std::log(std::max(err, 1e-17)));
  }
  out.log_average = std::exp(log_acc.value() / static_cast<double>(trials));
  return out;
}

ErrorStudy error_study(const BallUnion& u, DomainMode mode,
                       const std::vector<int>& degrees, std::uint64_t m0,
                       std::uint64_t reference_m0, const Eigen::Vector3d& p0,
                       const CompressOptions& options) {
  if (reference_m0 <= m0) {
    throw std::invalid_argument("error_study: reference_m0 must exceed m0");
  }
  const auto sample = [&](std::uint64_t count) {
    return mode == DomainMode::kVolume ? sample_volume(u, count)
                                       : sample_surface(u, count);
  };

  const std::vector<Integrand> fns = test_functions(p0);
  ErrorStudy study;
  study.degrees = degrees;
  study.m0 = m0;
  study.reference_m0 = reference_m0;

  std::vector<double> reference(fns.size());
  {
    const WeightedPointSet ref = sample(reference_m0);
    for (std::size_t i = 0; i < fns.size(); ++i) {
      reference[i] = apply(ref, fns[i]);
    }
  }  // reference set freed here; it can be large

  const WeightedPointSet pts = sample(m0);
  for (std::size_t i = 0; i < fns.size(); ++i) {
    FunctionStudy fs;
    fs.label = fns[i].label;
    fs.reference_value = reference[i];
    fs.qmc_error =
        std::abs(apply(pts, fns[i]) - reference[i]) / std::abs(reference[i]);
    study.functions.push_back(std::move(fs));
  }

  for (int degree : degrees) {
    const CompressResult res = compress(pts, degree, options);
    for (std::size_t i = 0; i < fns.size(); ++i) {
      const double value = apply(res.rule, fns[i]);
      study.functions[i].compressed_errors.push_back(
          std::abs(value - reference[i]) / std::abs(reference[i]));
    }
  }
  return study;
}

}  // namespace ballquad

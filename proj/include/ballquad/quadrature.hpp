#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "ballquad/compress.hpp"
#include "ballquad/geometry.hpp"
#include "ballquad/lowdisc.hpp"

namespace ballquad {

struct Integrand {
  std::string label;
  std::function<double(const Eigen::Vector3d&)> fn;
};

// Weighted sum sum_i w_i f(P_i) with compensated summation, in node order.
// Throws NonFiniteValue if f returns NaN or an infinity at any node.
double apply(std::span<const Eigen::Vector3d> nodes,
             std::span<const double> weights, const Integrand& f);
double apply(const WeightedPointSet& pts, const Integrand& f);
double apply(const CompressedRule& rule, const Integrand& f);

// The three reference integrands used by the error study, anchored at p0:
//   f1 = |P - p0|^5,  f2 = cos(x + y + z),  f3 = exp(-|P - p0|^2).
std::vector<Integrand> test_functions(const Eigen::Vector3d& p0);

struct ExactnessTrials {
  std::vector<double> errors;  // one relative error per trial
  double log_average = 0.0;    // exp(mean log error), zeros floored at 1e-17
};

// Random-polynomial exactness check: `trials` draws of g = (ax+by+cz+d)^n
// with a,b,c,d ~ U[0,1] from a seeded 64-bit Mersenne Twister (each double is
// the top 53 bits of one draw).  Each trial records
// |apply(rule, g) - apply(pts, g)| / |apply(pts, g)|.
ExactnessTrials exactness_trials(const CompressedRule& rule,
                                 const WeightedPointSet& pts, int n,
                                 int trials, std::uint64_t seed);

enum class DomainMode { kVolume, kSurface };

struct FunctionStudy {
  std::string label;
  double reference_value = 0.0;           // raw QMC at reference_m0
  double qmc_error = 0.0;                 // relative error of raw QMC at m0
  std::vector<double> compressed_errors;  // one per studied degree
};

struct ErrorStudy {
  std::vector<int> degrees;
  std::vector<FunctionStudy> functions;
  std::uint64_t m0 = 0;
  std::uint64_t reference_m0 = 0;
};

// Compare raw QMC at m0 against compressed rules of the given degrees, with a
// raw QMC run at reference_m0 (> m0) as the reference value.
ErrorStudy error_study(const BallUnion& u, DomainMode mode,
                       const std::vector<int>& degrees, std::uint64_t m0,
                       std::uint64_t reference_m0, const Eigen::Vector3d& p0,
                       const CompressOptions& options = {});

}  // namespace ballquad

#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ballquad/quadrature.hpp"

namespace ballquad::cli {

enum class Format { kCsv, kJson, kBoth };

struct RunConfig {
  std::string input_path;
  DomainMode mode = DomainMode::kVolume;
  std::vector<int> degrees;
  std::uint64_t m0 = 100000;  // box points (volume) or points per sphere
  double eps = 1e-10;
  std::optional<std::size_t> m1;
  double growth = 2.0;
  std::uint64_t seed = 7;  // drives the study's exactness trials
  std::string out_dir = ".";
  Format format = Format::kBoth;
  bool write_points = false;

  // study only
  int trials = 100;
  std::uint64_t reference_m0 = 0;          // 0 means 100 * m0
  std::optional<Eigen::Vector3d> p0;       // default depends on mode
};

// Exit codes: 0 success, 2 at least one degree failed to meet the residual
// tolerance (a diagnostic JSON is written per failed degree).  Config and
// input errors throw and are mapped to exit 1 by main().
int run_compress(const RunConfig& config);
int run_study(const RunConfig& config);

}  // namespace ballquad::cli

#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <utility>

#include "ballquad/compress.hpp"
#include "ballquad/geometry.hpp"
#include "ballquad/lowdisc.hpp"
#include "ballquad/quadrature.hpp"

namespace ballquad::io {

// 17 significant digits: enough to round-trip any double exactly.
std::string format_g17(double x);

// CSV "x,y,z,weight,owner", one row per point.
void write_points_csv(std::ostream& os, const WeightedPointSet& pts);
// JSON header {"m0": ..., "m": ..., "measure_estimate": ...}.
std::string points_header_json(const WeightedPointSet& pts);

// CSV "x,y,z,weight", one row per node.
void write_rule_csv(std::ostream& os, const CompressedRule& rule);
// Rule with its report: degree, residual, basis_rank, cardinality, nodes,
// weights, report {iterations, final_m, compression_ratio, moments_preserved}.
std::string rule_json(const CompressedRule& rule,
                      const CompressionReport& report);
std::string report_json(const CompressionReport& report);

// CSV "degree,<label>_qmc,<label>_compressed,..." — one row per degree; the
// QMC columns repeat the same degree-independent value on every row.
void write_study_csv(std::ostream& os, const ErrorStudy& study);
std::string study_json(const ErrorStudy& study);

// CSV "degree,trial,rel_error"; trials are numbered from 1, and one extra
// row with trial = 0 per degree carries the logarithmic average.
void write_exactness_csv(
    std::ostream& os,
    std::span<const std::pair<int, ExactnessTrials>> per_degree);

// Read and strictly parse a ball-union JSON file.
BallUnion load_ball_union(const std::string& path);

}  // namespace ballquad::io

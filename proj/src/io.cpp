#include "ballquad/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "ballquad/errors.hpp"

namespace ballquad::io {

namespace {

using nlohmann::json;

// Report values are finite except the rank-deficient sentinel; JSON has no
// inf literal, so that one becomes a string.
json number_or_marker(double x) {
  if (std::isfinite(x)) return x;
  return "unattained";
}

json iterations_json(const CompressionReport& report) {
  json arr = json::array();
  for (const CompressionIteration& it : report.iterations) {
    arr.push_back({{"m", it.m},
                   {"residual", number_or_marker(it.residual)},
                   {"nnls_iterations", it.nnls_iterations},
                   {"elapsed_seconds", it.elapsed_seconds}});
  }
  return arr;
}

json report_as_json(const CompressionReport& report) {
  return {{"iterations", iterations_json(report)},
          {"final_m", report.final_m},
          {"compression_ratio", report.compression_ratio},
          {"moments_preserved", report.moments_preserved}};
}

}  // namespace

std::string format_g17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

void write_points_csv(std::ostream& os, const WeightedPointSet& pts) {
  os << "x,y,z,weight,owner\n";
  for (std::size_t i = 0; i < pts.size(); ++i) {
    os << format_g17(pts.points[i].x()) << ',' << format_g17(pts.points[i].y())
       << ',' << format_g17(pts.points[i].z()) << ','
       << format_g17(pts.weights[i]) << ',' << pts.owner[i] << '\n';
  }
}

std::string points_header_json(const WeightedPointSet& pts) {
  const json j = {{"m0", pts.total_generated},
                  {"m", pts.size()},
                  {"measure_estimate", pts.measure_estimate}};
  return j.dump(2) + "\n";
}

void write_rule_csv(std::ostream& os, const CompressedRule& rule) {
  os << "x,y,z,weight\n";
  for (std::size_t i = 0; i < rule.size(); ++i) {
    os << format_g17(rule.nodes[i].x()) << ',' << format_g17(rule.nodes[i].y())
       << ',' << format_g17(rule.nodes[i].z()) << ','
       << format_g17(rule.weights[i]) << '\n';
  }
}

std::string rule_json(const CompressedRule& rule,
                      const CompressionReport& report) {
  json nodes = json::array();
  for (const Eigen::Vector3d& p : rule.nodes) {
    nodes.push_back({p.x(), p.y(), p.z()});
  }
  const json j = {{"degree", rule.degree},
                  {"residual", rule.residual},
                  {"basis_rank", rule.basis_rank},
                  {"cardinality", rule.size()},
                  {"nodes", nodes},
                  {"weights", rule.weights},
                  {"report", report_as_json(report)}};
  return j.dump(2) + "\n";
}

std::string report_json(const CompressionReport& report) {
  return report_as_json(report).dump(2) + "\n";
}

void write_study_csv(std::ostream& os, const ErrorStudy& study) {
  os << "degree";
  for (const FunctionStudy& fs : study.functions) {
    os << ',' << fs.label << "_qmc," << fs.label << "_compressed";
  }
  os << '\n';
  for (std::size_t d = 0; d < study.degrees.size(); ++d) {
    os << study.degrees[d];
    for (const FunctionStudy& fs : study.functions) {
      os << ',' << format_g17(fs.qmc_error) << ','
         << format_g17(fs.compressed_errors[d]);
    }
    os << '\n';
  }
}

std::string study_json(const ErrorStudy& study) {
  json fns = json::array();
  for (const FunctionStudy& fs : study.functions) {
    fns.push_back({{"label", fs.label},
                   {"reference_value", fs.reference_value},
                   {"qmc_error", fs.qmc_error},
                   {"compressed_errors", fs.compressed_errors}});
  }
  const json j = {{"degrees", study.degrees},
                  {"m0", study.m0},
                  {"reference_m0", study.reference_m0},
                  {"functions", fns}};
  return j.dump(2) + "\n";
}

void write_exactness_csv(
    std::ostream& os,
    std::span<const std::pair<int, ExactnessTrials>> per_degree) {
  os << "degree,trial,rel_error\n";
  for (const auto& [degree, trials] : per_degree) {
    for (std::size_t t = 0; t < trials.errors.size(); ++t) {
      os << degree << ',' << (t + 1) << ',' << format_g17(trials.errors[t])
         << '\n';
    }
    // trial 0 row: the logarithmic average over the block above
    os << degree << ",0," << format_g17(trials.log_average) << '\n';
  }
}

BallUnion load_ball_union(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw BubbleParseError("cannot open \"" + path + "\"");
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_ball_union(buf.str());
}

}  // namespace ballquad::io

#include "cli.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "ballquad/compress.hpp"
#include "ballquad/io.hpp"

namespace ballquad::cli {

namespace {

namespace fs = std::filesystem;

int thread_count() {
  const char* env = std::getenv("BALLQUAD_THREADS");
  if (!env) return 1;
  const int n = std::atoi(env);
  return std::clamp(n, 1, 64);
}

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write \"" + path.string() + "\"");
  out << content;
}

WeightedPointSet make_sample(const BallUnion& u, const RunConfig& config) {
  return config.mode == DomainMode::kVolume ? sample_volume(u, config.m0)
                                            : sample_surface(u, config.m0);
}

CompressOptions make_options(const RunConfig& config) {
  CompressOptions options;
  options.eps = config.eps;
  options.m1 = config.m1;
  options.growth = config.growth;
  return options;
}

Eigen::Vector3d default_p0(const BallUnion& u, DomainMode mode) {
  const Ball& first = u.ball(0);
  if (mode == DomainMode::kSurface) {
    return first.center + first.radius * Eigen::Vector3d::UnitZ();
  }
  return first.center;
}

void maybe_write_points(const WeightedPointSet& pts, const RunConfig& config) {
  if (!config.write_points) return;
  const fs::path dir(config.out_dir);
  if (config.format != Format::kJson) {
    std::ostringstream csv;
    io::write_points_csv(csv, pts);
    write_file(dir / "points.csv", csv.str());
  }
  if (config.format != Format::kCsv) {
    write_file(dir / "points.json", io::points_header_json(pts));
  }
}

struct DegreeOutcome {
  int degree = 0;
  bool ok = false;
  std::size_t nodes = 0;
  double residual = 0.0;
  std::size_t iterations = 0;
  std::string message;
};

DegreeOutcome compress_one_degree(const WeightedPointSet& pts, int degree,
                                  const RunConfig& config) {
  const fs::path dir(config.out_dir);
  DegreeOutcome outcome;
  outcome.degree = degree;
  try {
    const CompressResult res = compress(pts, degree, make_options(config));
    if (config.format != Format::kJson) {
      std::ostringstream csv;
      io::write_rule_csv(csv, res.rule);
      write_file(dir / ("rule_" + std::to_string(degree) + ".csv"), csv.str());
    }
    if (config.format != Format::kCsv) {
      write_file(dir / ("rule_" + std::to_string(degree) + ".json"),
                 io::rule_json(res.rule, res.report));
    }
    write_file(dir / ("report_" + std::to_string(degree) + ".json"),
               io::report_json(res.report));
    outcome.ok = true;
    outcome.nodes = res.rule.size();
    outcome.residual = res.rule.residual;
    outcome.iterations = res.report.iterations.size();
  } catch (const ResidualNotMet& e) {
    nlohmann::json diag = {{"degree", degree},
                           {"error", "residual_not_met"},
                           {"eps", config.eps},
                           {"message", e.what()},
                           {"report", nlohmann::json::parse(
                                          io::report_json(e.report))}};
    write_file(dir / ("error_" + std::to_string(degree) + ".json"),
               diag.dump(2) + "\n");
    outcome.message = e.what();
  }
  return outcome;
}

}  // namespace

int run_compress(const RunConfig& config) {
  const BallUnion u = io::load_ball_union(config.input_path);
  fs::create_directories(config.out_dir);
  const WeightedPointSet pts = make_sample(u, config);
  maybe_write_points(pts, config);
  std::cout << "sample: " << pts.size() << " of " << pts.total_generated
            << " points retained, measure ~ "
            << io::format_g17(pts.measure_estimate) << "\n";

  // One pipeline per degree; BALLQUAD_THREADS > 1 runs them concurrently.
  std::vector<DegreeOutcome> outcomes(config.degrees.size());
  const int workers =
      std::min<int>(thread_count(), static_cast<int>(config.degrees.size()));
  if (workers <= 1) {
    for (std::size_t i = 0; i < config.degrees.size(); ++i) {
      outcomes[i] = compress_one_degree(pts, config.degrees[i], config);
    }
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int t = 0; t < workers; ++t) {
      pool.emplace_back([&] {
        for (std::size_t i = next.fetch_add(1); i < config.degrees.size();
             i = next.fetch_add(1)) {
          outcomes[i] = compress_one_degree(pts, config.degrees[i], config);
        }
      });
    }
    for (std::thread& th : pool) th.join();
  }

  bool all_ok = true;
  for (const DegreeOutcome& o : outcomes) {
    if (o.ok) {
      std::cout << "degree " << o.degree << ": " << o.nodes
                << " nodes, residual " << io::format_g17(o.residual) << ", "
                << o.iterations << " iteration(s)\n";
    } else {
      all_ok = false;
      std::cout << "degree " << o.degree << ": FAILED (" << o.message << ")\n";
    }
  }
  return all_ok ? 0 : 2;
}

int run_study(const RunConfig& config) {
  const BallUnion u = io::load_ball_union(config.input_path);
  fs::create_directories(config.out_dir);
  const fs::path dir(config.out_dir);

  const std::uint64_t reference_m0 =
      config.reference_m0 > 0 ? config.reference_m0 : 100 * config.m0;
  const Eigen::Vector3d p0 =
      config.p0 ? *config.p0 : default_p0(u, config.mode);

  const ErrorStudy study = error_study(u, config.mode, config.degrees,
                                       config.m0, reference_m0, p0,
                                       make_options(config));
  if (config.format != Format::kJson) {
    std::ostringstream csv;
    io::write_study_csv(csv, study);
    write_file(dir / "study.csv", csv.str());
  }
  if (config.format != Format::kCsv) {
    write_file(dir / "study.json", io::study_json(study));
  }

  // Exactness trials reuse one sample per run, like the study itself.
  const WeightedPointSet pts = make_sample(u, config);
  std::vector<std::pair<int, ExactnessTrials>> per_degree;
  for (int degree : config.degrees) {
    const CompressResult res = compress(pts, degree, make_options(config));
    per_degree.emplace_back(
        degree,
        exactness_trials(res.rule, pts, degree, config.trials, config.seed));
  }
  std::ostringstream csv;
  io::write_exactness_csv(csv, per_degree);
  write_file(dir / "exactness.csv", csv.str());

  for (std::size_t i = 0; i < study.functions.size(); ++i) {
    const FunctionStudy& fs = study.functions[i];
    std::cout << fs.label << ": qmc error " << io::format_g17(fs.qmc_error)
              << ", compressed";
    for (std::size_t d = 0; d < study.degrees.size(); ++d) {
      std::cout << " n=" << study.degrees[d] << ":"
                << io::format_g17(fs.compressed_errors[d]);
    }
    std::cout << "\n";
  }
  for (const auto& [degree, trials] : per_degree) {
    std::cout << "exactness n=" << degree << ": log-average "
              << io::format_g17(trials.log_average) << "\n";
  }
  return 0;
}

}  // namespace ballquad::cli

#include <CLI11.hpp>
#include <Eigen/Core>
#include <iostream>
#include <map>
#include <vector>

#include "ballquad/compress.hpp"
#include "ballquad/errors.hpp"
#include "cli.hpp"

namespace {

using ballquad::DomainMode;
using ballquad::cli::Format;
using ballquad::cli::RunConfig;

void add_common_options(CLI::App* cmd, RunConfig& config) {
  cmd->add_option("-i,--input", config.input_path,
                  "ball union JSON: {\"balls\": [{\"center\": [x,y,z], "
                  "\"radius\": r}, ...]}")
      ->required();
  const std::map<std::string, DomainMode> modes{
      {"volume", DomainMode::kVolume}, {"surface", DomainMode::kSurface}};
  cmd->add_option("--mode", config.mode, "integration domain")
      ->transform(CLI::CheckedTransformer(modes, CLI::ignore_case))
      ->default_str("volume");
  cmd->add_option("--degree", config.degrees,
                  "polynomial exactness degree (repeatable)")
      ->required()
      ->check(CLI::NonNegativeNumber);
  cmd->add_option("--m0", config.m0,
                  "Halton points in the box (volume) or per sphere (surface)")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  cmd->add_option("--eps", config.eps, "moment-match residual tolerance")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  cmd->add_option("--m1", config.m1,
                  "first prefix length (default: twice the basis size)");
  cmd->add_option("--growth", config.growth, "prefix growth factor")
      ->check(CLI::Range(std::nextafter(1.0, 2.0), 1e6))
      ->capture_default_str();
  cmd->add_option("--seed", config.seed, "seed for the exactness trials")
      ->capture_default_str();
  cmd->add_option("-o,--out", config.out_dir, "output directory")
      ->capture_default_str();
  const std::map<std::string, Format> formats{
      {"csv", Format::kCsv}, {"json", Format::kJson}, {"both", Format::kBoth}};
  cmd->add_option("--format", config.format, "output formats to emit")
      ->transform(CLI::CheckedTransformer(formats, CLI::ignore_case))
      ->default_str("both");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "compressed quasi-Monte Carlo quadrature on unions of balls"};
  app.require_subcommand(1);

  RunConfig config;
  std::vector<double> p0_raw;

  CLI::App* compress_cmd = app.add_subcommand(
      "compress", "extract a positive-weight rule matching QMC moments");
  add_common_options(compress_cmd, config);
  compress_cmd->add_flag("--write-points", config.write_points,
                         "also write the retained sample (points.csv/json)");

  CLI::App* study_cmd = app.add_subcommand(
      "study", "compare raw QMC and compressed-rule integration errors");
  add_common_options(study_cmd, config);
  study_cmd
      ->add_option("--reference-m0", config.reference_m0,
                   "sample size for the reference run (default: 100 * m0)")
      ->check(CLI::PositiveNumber);
  study_cmd->add_option("--trials", config.trials, "exactness trials per degree")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  study_cmd
      ->add_option("--p0", p0_raw,
                   "anchor point for the test integrands (default: center of "
                   "ball 1, or its north pole in surface mode)")
      ->expected(3);

  CLI11_PARSE(app, argc, argv);

  if (p0_raw.size() == 3) {
    config.p0 = Eigen::Vector3d(p0_raw[0], p0_raw[1], p0_raw[2]);
  }

  try {
    if (*compress_cmd) return ballquad::cli::run_compress(config);
    return ballquad::cli::run_study(config);
  } catch (const ballquad::ResidualNotMet& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const ballquad::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}

#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <vector>

#include "decomp/decompose.hpp"
#include "decomp/sampler.hpp"

namespace decomp::cli {

struct GridSpec {
  std::size_t nrow = 0;
  std::size_t ncol = 0;
};

struct RunConfig {
  std::filesystem::path counts;
  std::filesystem::path adjacency;
  std::optional<std::filesystem::path> truth;
  std::optional<GridSpec> grid;  // precision command only
  bool strict_adjacency = false;
  ScaleSet scales{{0.0, 1.0, 25.0}};
  Hyperparams hyper;
  double alpha = 0.05;
  std::filesystem::path output = "decomp-out";
  unsigned workers = 1;
  /// Cross-check sparse solves against dense elimination (small n only).
  bool dense_check = false;
};

/// JSON config; relative paths resolve against the config file's directory.
RunConfig load_config(const std::filesystem::path& path);

struct Overrides {
  std::optional<std::uint64_t> seed;
  std::optional<std::filesystem::path> output;
};

void apply(RunConfig& config, const Overrides& overrides);

/// Each command returns the files it wrote, relative to config.output.
std::vector<std::filesystem::path> cmd_precision(const RunConfig& config);
std::vector<std::filesystem::path> cmd_sample(const RunConfig& config);
std::vector<std::filesystem::path> cmd_decompose(const RunConfig& config,
                                                 const std::filesystem::path& trace);
std::vector<std::filesystem::path> cmd_diagnose(const RunConfig& config,
                                                const std::filesystem::path& trace);
/// sample, then decompose, then a manifest with SHA-256 of every output.
std::vector<std::filesystem::path> cmd_run(const RunConfig& config);

int main(int argc, char** argv);

}  // namespace decomp::cli

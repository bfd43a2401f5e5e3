#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "hsfw/problems/problems.hpp"
#include "hsfw/solvers/solvers.hpp"

namespace hsfw::cli {

/// Invalid or unreadable configuration. The message names the key and line.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ProblemConfig {
  std::string family;  // synthetic | kmeans | sparsestcut
  std::uint64_t seed = 0;
  // synthetic
  std::size_t d = 0;
  std::size_t n = 0;
  double sigma_f = 0.0;
  // kmeans: a points file, or generated blobs
  std::string points;
  std::size_t clusters = 0;
  std::size_t per_cluster = 0;
  std::size_t point_dim = 2;
  double spread = 0.1;
  double separation = 1.0;
  std::size_t k = 0;
  // sparsestcut: an edge-list file, or G(nodes, edge_prob)
  std::string edges;
  std::size_t nodes = 0;
  double edge_prob = 0.5;
};

struct SolverPreset {
  std::string name;  // file prefix; defaults to the lowercase algorithm name
  SolverConfig config;
};

struct OutputConfig {
  std::string directory;  // empty: $HSFW_OUTPUT_ROOT/<config stem>, else runs/<config stem>
  bool plot = false;
};

struct ProbeConfig {
  std::vector<std::uint64_t> checkpoints{10, 100, 1000};
  std::size_t n_seeds = 20;
};

struct ExperimentConfig {
  ProblemConfig problem;
  std::vector<SolverPreset> solvers;
  std::vector<std::uint64_t> seeds{0};
  OutputConfig output;
  ProbeConfig probe;
  std::filesystem::path source;  // config file; relative input paths resolve against its directory
};

ExperimentConfig parse_config(const std::string& yaml_text, const std::filesystem::path& source = {});
ExperimentConfig load_config(const std::filesystem::path& path);

/// Builds the configured instance. Throws ConfigError for unusable inputs.
ProblemInstance build_problem(const ExperimentConfig& config);

/// Output directory after applying the HSFW_OUTPUT_ROOT fallback.
std::filesystem::path output_directory(const ExperimentConfig& config);

}  // namespace hsfw::cli

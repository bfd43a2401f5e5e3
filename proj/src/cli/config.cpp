#include "hsfw/cli/config.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

#include <yaml-cpp/yaml.h>

namespace hsfw::cli {

namespace {

std::string where(const YAML::Node& node) {
  const YAML::Mark m = node.Mark();
  return m.line >= 0 ? "line " + std::to_string(m.line + 1) : "unknown line";
}

[[noreturn]] void fail(const YAML::Node& node, const std::string& what) {
  throw ConfigError("config " + where(node) + ": " + what);
}

YAML::Node require_map(const YAML::Node& node, const std::string& section) {
  if (!node.IsMap()) fail(node, "section '" + section + "' must be a mapping");
  return node;
}

// Rejects any key of `node` not listed in `allowed`, naming key and line.
void check_keys(const YAML::Node& node, const std::string& section, const std::set<std::string>& allowed) {
  for (auto it = node.begin(); it != node.end(); ++it) {
    const auto key = it->first.as<std::string>();
    if (!allowed.count(key)) fail(it->first, "unknown key '" + key + "' in " + section);
  }
}

template <typename T>
T scalar(const YAML::Node& node, const std::string& key) {
  if (!node.IsScalar()) fail(node, "key '" + key + "' must be a scalar");
  try {
    return node.as<T>();
  } catch (const YAML::Exception&) {
    fail(node, "key '" + key + "' has invalid value '" + node.Scalar() + "'");
  }
}

template <typename T>
void read(const YAML::Node& map, const std::string& key, T& out) {
  if (const YAML::Node v = map[key]) out = scalar<T>(v, key);
}

double positive(const YAML::Node& map, const std::string& key, double fallback) {
  double v = fallback;
  read(map, key, v);
  if (map[key] && !(v > 0.0)) fail(map[key], "key '" + key + "' must be positive");
  return v;
}

std::vector<std::uint64_t> read_list(const YAML::Node& map, const std::string& key) {
  const YAML::Node v = map[key];
  if (!v.IsSequence()) fail(v, "key '" + key + "' must be a list");
  std::vector<std::uint64_t> out;
  for (const auto& e : v) out.push_back(scalar<std::uint64_t>(e, key));
  return out;
}

ProblemConfig parse_problem(const YAML::Node& node) {
  require_map(node, "problem");
  ProblemConfig p;
  if (!node["family"]) fail(node, "problem section needs 'family'");
  read(node, "family", p.family);
  std::set<std::string> allowed{"family", "seed"};
  if (p.family == "synthetic") {
    allowed.insert({"d", "n", "sigma_f"});
  } else if (p.family == "kmeans") {
    allowed.insert({"points", "clusters", "per_cluster", "point_dim", "spread", "separation", "k"});
  } else if (p.family == "sparsestcut") {
    allowed.insert({"edges", "nodes", "edge_prob"});
  } else {
    fail(node["family"], "unknown problem family '" + p.family + "' (synthetic, kmeans, sparsestcut)");
  }
  check_keys(node, "problem (family " + p.family + ")", allowed);
  read(node, "seed", p.seed);
  read(node, "d", p.d);
  read(node, "n", p.n);
  read(node, "sigma_f", p.sigma_f);
  read(node, "points", p.points);
  read(node, "clusters", p.clusters);
  read(node, "per_cluster", p.per_cluster);
  read(node, "point_dim", p.point_dim);
  p.spread = positive(node, "spread", p.spread);
  p.separation = positive(node, "separation", p.separation);
  read(node, "k", p.k);
  read(node, "edges", p.edges);
  read(node, "nodes", p.nodes);
  read(node, "edge_prob", p.edge_prob);
  if (p.family == "synthetic" && (p.d < 2 || p.n < 1)) fail(node, "synthetic problem needs d >= 2 and n >= 1");
  if (p.family == "kmeans" && p.points.empty() && (p.clusters == 0 || p.per_cluster == 0))
    fail(node, "kmeans problem needs 'points' or both 'clusters' and 'per_cluster'");
  if (p.family == "sparsestcut" && p.edges.empty() && p.nodes < 3)
    fail(node, "sparsestcut problem needs 'edges' or 'nodes' >= 3");
  return p;
}

void parse_lmo(const YAML::Node& node, LmoSettings& lmo) {
  require_map(node, "lmo");
  check_keys(node, "lmo", {"tol", "max_iter", "restarts", "exact_threshold"});
  lmo.lanczos.tol = positive(node, "tol", lmo.lanczos.tol);
  read(node, "max_iter", lmo.lanczos.max_iter);
  read(node, "restarts", lmo.lanczos.restarts);
  read(node, "exact_threshold", lmo.exact_threshold);
}

void parse_baseline(const YAML::Node& node, BaselineSchedule& b) {
  require_map(node, "baseline");
  check_keys(node, "baseline", {"rho_scale", "rho_offset", "rho_exponent", "gamma_scale", "gamma_offset",
                                "beta_offset", "beta_exponent"});
  read(node, "rho_scale", b.rho_scale);
  read(node, "rho_offset", b.rho_offset);
  read(node, "rho_exponent", b.rho_exponent);
  read(node, "gamma_scale", b.gamma_scale);
  read(node, "gamma_offset", b.gamma_offset);
  read(node, "beta_offset", b.beta_offset);
  read(node, "beta_exponent", b.beta_exponent);
}

SolverPreset parse_solver(const YAML::Node& node) {
  require_map(node, "solvers entry");
  check_keys(node, "solvers entry", {"name", "algorithm", "beta0", "mode", "batch_size", "batch_fraction",
                                     "max_iterations", "trace_every", "checkpoint_ks", "lmo", "baseline", "f_star"});
  SolverPreset s;
  if (!node["algorithm"]) fail(node, "solver entry needs 'algorithm'");
  const auto alg = scalar<std::string>(node["algorithm"], "algorithm");
  try {
    s.config.algorithm = parse_algorithm(alg);
  } catch (const std::exception&) {
    fail(node["algorithm"], "unknown algorithm '" + alg + "' (H1SFW, HSPIDERFW, SHCGM, HCGM)");
  }
  s.name = std::string(algorithm_name(s.config.algorithm));
  std::transform(s.name.begin(), s.name.end(), s.name.begin(), [](unsigned char c) { return std::tolower(c); });
  read(node, "name", s.name);
  if (s.name.empty() || s.name.find_first_of("/\\") != std::string::npos)
    fail(node["name"], "solver name must be a non-empty file-name fragment");
  s.config.beta0 = positive(node, "beta0", s.config.beta0);
  if (const YAML::Node m = node["mode"]) {
    const auto mode = scalar<std::string>(m, "mode");
    if (mode == "FiniteSum") s.config.mode = SamplingMode::FiniteSum;
    else if (mode == "Expectation") s.config.mode = SamplingMode::Expectation;
    else fail(m, "mode must be FiniteSum or Expectation, got '" + mode + "'");
  }
  if (node["batch_size"] && node["batch_fraction"]) fail(node["batch_fraction"], "give batch_size or batch_fraction, not both");
  read(node, "batch_size", s.config.batch_size);
  if (node["batch_size"] && s.config.batch_size == 0) fail(node["batch_size"], "batch_size must be >= 1");
  read(node, "batch_fraction", s.config.batch_fraction);
  if (node["batch_fraction"] && !(s.config.batch_fraction > 0.0 && s.config.batch_fraction <= 1.0))
    fail(node["batch_fraction"], "batch_fraction must lie in (0, 1]");
  read(node, "max_iterations", s.config.max_iterations);
  read(node, "trace_every", s.config.trace_every);
  if (node["checkpoint_ks"]) s.config.checkpoint_ks = read_list(node, "checkpoint_ks");
  if (node["lmo"]) parse_lmo(node["lmo"], s.config.lmo);
  if (node["baseline"]) parse_baseline(node["baseline"], s.config.baseline);
  if (node["f_star"]) s.config.f_star = scalar<double>(node["f_star"], "f_star");
  return s;
}

}  // namespace

ExperimentConfig parse_config(const std::string& yaml_text, const std::filesystem::path& source) {
  YAML::Node root;
  try {
    root = YAML::Load(yaml_text);
  } catch (const YAML::ParserException& e) {
    throw ConfigError("config line " + std::to_string(e.mark.line + 1) + ": " + e.msg);
  }
  if (!root.IsMap()) throw ConfigError("config: top level must be a mapping");
  check_keys(root, "top level", {"problem", "solvers", "seeds", "output", "probe"});

  ExperimentConfig cfg;
  cfg.source = source;
  if (!root["problem"]) throw ConfigError("config: missing 'problem' section");
  cfg.problem = parse_problem(root["problem"]);

  const YAML::Node solvers = root["solvers"];
  if (!solvers || !solvers.IsSequence() || solvers.size() == 0)
    throw ConfigError("config" + (solvers ? " " + where(solvers) : std::string()) +
                      ": 'solvers' must be a non-empty list");
  std::set<std::string> names;
  for (const auto& s : solvers) {
    cfg.solvers.push_back(parse_solver(s));
    if (!names.insert(cfg.solvers.back().name).second)
      fail(s, "duplicate solver name '" + cfg.solvers.back().name + "'");
  }

  if (root["seeds"]) {
    cfg.seeds = read_list(root, "seeds");
    if (cfg.seeds.empty()) fail(root["seeds"], "'seeds' must not be empty");
  }
  if (const YAML::Node out = root["output"]) {
    require_map(out, "output");
    check_keys(out, "output", {"directory", "trace_every", "plot"});
    read(out, "directory", cfg.output.directory);
    read(out, "plot", cfg.output.plot);
    if (out["trace_every"]) {
      const auto every = scalar<std::uint64_t>(out["trace_every"], "trace_every");
      for (std::size_t i = 0; i < cfg.solvers.size(); ++i)
        if (!solvers[i]["trace_every"]) cfg.solvers[i].config.trace_every = every;
    }
  }
  if (const YAML::Node probe = root["probe"]) {
    require_map(probe, "probe");
    check_keys(probe, "probe", {"checkpoints", "n_seeds"});
    if (probe["checkpoints"]) cfg.probe.checkpoints = read_list(probe, "checkpoints");
    read(probe, "n_seeds", cfg.probe.n_seeds);
  }
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config '" + path.string() + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), path);
}

namespace {

std::filesystem::path resolve(const ExperimentConfig& cfg, const std::string& p) {
  const std::filesystem::path path(p);
  if (path.is_absolute() || cfg.source.empty()) return path;
  return cfg.source.parent_path() / path;
}

}  // namespace

ProblemInstance build_problem(const ExperimentConfig& config) {
  const ProblemConfig& p = config.problem;
  try {
    if (p.family == "synthetic") return build_synthetic_sdp(p.d, p.n, p.seed, p.sigma_f);
    if (p.family == "kmeans") {
      std::vector<std::vector<double>> points;
      if (!p.points.empty()) {
        points = read_points_csv(resolve(config, p.points).string());
      } else {
        points = gaussian_blobs(p.clusters, p.per_cluster, p.point_dim, p.spread, p.separation, p.seed).points;
      }
      const std::size_t k = p.k != 0 ? p.k : std::max<std::size_t>(p.clusters, 1);
      return build_kmeans_sdp(points, k);
    }
    if (p.family == "sparsestcut") {
      const GraphInput g = p.edges.empty() ? erdos_renyi(p.nodes, p.edge_prob, p.seed)
                                           : ingest_edge_list(resolve(config, p.edges).string());
      return build_sparsest_cut_sdp(g);
    }
  } catch (const std::exception& e) {
    throw ConfigError(std::string("problem: ") + e.what());
  }
  throw ConfigError("problem: unknown family '" + p.family + "'");
}

std::filesystem::path output_directory(const ExperimentConfig& config) {
  if (!config.output.directory.empty()) return config.output.directory;
  const std::string stem = config.source.empty() ? "run" : config.source.stem().string();
  if (const char* root = std::getenv("HSFW_OUTPUT_ROOT"); root && *root) return std::filesystem::path(root) / stem;
  return std::filesystem::path("runs") / stem;
}

}  // namespace hsfw::cli

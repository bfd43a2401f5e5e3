#include "hsfw/cli/commands.hpp"

#include <atomic>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <mutex>
#include <ostream>
#include <sstream>
#include <thread>

#include <Eigen/Core>
#include <json.hpp>

#include "hsfw/diagnostics/diagnostics.hpp"
#include "hsfw/simd/kernels.hpp"

namespace hsfw::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr const char* kVersion = "0.1.0";

void put_real(std::ostream& out, double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  out << buf;
}

json optional_number(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

json solver_json(const SolverPreset& s) {
  const SolverConfig& c = s.config;
  json j{{"name", s.name},
         {"algorithm", std::string(algorithm_name(c.algorithm))},
         {"beta0", c.beta0},
         {"mode", c.mode == SamplingMode::FiniteSum ? "FiniteSum" : "Expectation"},
         {"max_iterations", c.max_iterations},
         {"trace_every", c.trace_every},
         {"checkpoint_ks", c.checkpoint_ks},
         {"lmo",
          {{"tol", c.lmo.lanczos.tol},
           {"max_iter", c.lmo.lanczos.max_iter},
           {"restarts", c.lmo.lanczos.restarts},
           {"exact_threshold", c.lmo.exact_threshold}}},
         {"f_star", optional_number(c.f_star)}};
  if (c.batch_fraction > 0.0) j["batch_fraction"] = c.batch_fraction;
  else j["batch_size"] = c.batch_size;
  if (c.algorithm == Algorithm::SHCGM || c.algorithm == Algorithm::HCGM) {
    const BaselineSchedule& b = c.baseline;
    j["baseline"] = {{"rho_scale", b.rho_scale},     {"rho_offset", b.rho_offset},
                     {"rho_exponent", b.rho_exponent}, {"gamma_scale", b.gamma_scale},
                     {"gamma_offset", b.gamma_offset}, {"beta_offset", b.beta_offset},
                     {"beta_exponent", b.beta_exponent}};
  }
  return j;
}

json problem_config_json(const ProblemConfig& p) {
  json j{{"family", p.family}, {"seed", p.seed}};
  if (p.family == "synthetic") {
    j.update({{"d", p.d}, {"n", p.n}, {"sigma_f", p.sigma_f}});
  } else if (p.family == "kmeans") {
    if (!p.points.empty()) j["points"] = p.points;
    else
      j.update({{"clusters", p.clusters}, {"per_cluster", p.per_cluster}, {"point_dim", p.point_dim},
                {"spread", p.spread}, {"separation", p.separation}});
    j["k"] = p.k;
  } else {
    if (!p.edges.empty()) j["edges"] = p.edges;
    else j.update({{"nodes", p.nodes}, {"edge_prob", p.edge_prob}});
  }
  return j;
}

json problem_json(const ProblemInstance& p) {
  json j{{"name", p.meta.name},
         {"dim", p.meta.dim},
         {"constraint_count", p.meta.constraint_count},
         {"la_bound", p.constraints.la_bound()},
         {"diameter", diameter_bound(p.domain)},
         {"f_star", optional_number(p.meta.f_star)},
         {"planted_point", p.meta.planted.has_value()}};
  if (p.meta.name == "sparsestcut") j["triangle_constraints"] = triangle_count(p.meta.dim);
  return j;
}

json versions_json() {
  return {{"hsfw", kVersion},
          {"compiler", __VERSION__},
          {"cxx_standard", __cplusplus},
          {"eigen", std::to_string(EIGEN_WORLD_VERSION) + "." + std::to_string(EIGEN_MAJOR_VERSION) + "." +
                        std::to_string(EIGEN_MINOR_VERSION)},
          {"nlohmann_json", std::to_string(NLOHMANN_JSON_VERSION_MAJOR) + "." +
                                std::to_string(NLOHMANN_JSON_VERSION_MINOR) + "." +
                                std::to_string(NLOHMANN_JSON_VERSION_PATCH)},
          {"kernels", std::string(simd::isa_name(simd::kernels().isa))}};
}

// Envelope constant for the solver's estimator, or NaN when none applies.
double envelope_constant(const ProblemInstance& p, const SolverConfig& c) {
  const EnvelopeInputs in = envelope_inputs(p, c.beta0);
  if (c.algorithm == Algorithm::H1SFW) {
    const double e0 = batch_estimate_variance(p, SymMatrix::zeros(p.domain.dim), c.beta0,
                                              c.effective_batch(p.constraints.size()));
    return momentum_variance_constant(in, e0);
  }
  if (c.algorithm == Algorithm::HSPIDERFW) return spider_variance_constant(in);
  return std::nan("");
}

double envelope_at(const SolverConfig& c, double c1, std::uint64_t g) {
  if (c.algorithm == Algorithm::H1SFW) return momentum_variance_envelope(c1, g);
  if (c.algorithm == Algorithm::HSPIDERFW) return spider_variance_envelope(c1, g);
  return std::nan("");
}

template <typename Fn>
int guarded(std::ostream& err, Fn&& fn) {
  try {
    return fn();
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return kConfigError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kRuntimeError;
  }
}

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write '" + path.string() + "'");
  f << text;
  if (!f) throw std::runtime_error("write failed for '" + path.string() + "'");
}

}  // namespace

void write_trace_csv(const RunTrace& trace, std::ostream& out) {
  for (std::size_t c = 0; c < kTraceColumns.size(); ++c) out << (c ? "," : "") << kTraceColumns[c];
  out << '\n';
  for (const auto& r : trace.rows) {
    out << r.global_iter << ',' << r.epoch_t << ',' << r.inner_k << ',';
    put_real(out, r.objective);
    for (double v : {r.subopt, r.feasibility, r.smoothed_gap_upper, r.beta, r.gamma}) {
      out << ',';
      put_real(out, v);
    }
    out << ',' << r.sfo_calls << ',' << r.ifo_calls << ',' << r.lmo_calls << ',';
    put_real(out, r.wall_ms);
    out << ',';
    put_real(out, r.est_error);
    out << '\n';
  }
}

std::size_t CsvTable::column(const std::string& name) const {
  for (std::size_t i = 0; i < header.size(); ++i)
    if (header[i] == name) return i;
  throw std::invalid_argument("unknown metric column '" + name + "'");
}

CsvTable read_trace_csv(std::istream& in) {
  CsvTable t;
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("empty trace file");
  {
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) t.header.push_back(cell);
  }
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::vector<double> row;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
      char* end = nullptr;
      const double v = std::strtod(cell.c_str(), &end);
      if (cell.empty() || *end != '\0')
        throw std::runtime_error("trace line " + std::to_string(line_no) + ": bad number '" + cell + "'");
      row.push_back(v);
    }
    if (row.size() != t.header.size())
      throw std::runtime_error("trace line " + std::to_string(line_no) + ": expected " +
                               std::to_string(t.header.size()) + " columns");
    t.rows.push_back(std::move(row));
  }
  return t;
}

int cmd_run(const fs::path& config_path, std::ostream& out, std::ostream& err,
            const std::optional<fs::path>& out_dir) {
  return guarded(err, [&] {
    const ExperimentConfig cfg = load_config(config_path);
    const ProblemInstance problem = build_problem(cfg);
    const fs::path dir = out_dir ? *out_dir : output_directory(cfg);
    fs::create_directories(dir);

    struct Job {
      const SolverPreset* solver;
      std::uint64_t seed;
      RunTrace trace;
      std::string error;
    };
    std::vector<Job> jobs;
    for (const auto& s : cfg.solvers)
      for (auto seed : cfg.seeds) jobs.push_back({&s, seed, {}, {}});

    std::atomic<std::size_t> next{0};
    auto worker = [&] {
      for (std::size_t i = next++; i < jobs.size(); i = next++) {
        Job& job = jobs[i];
        try {
          SolverConfig c = job.solver->config;
          c.seed = job.seed;
          job.trace = run_solver(problem, c);
          std::ofstream f(dir / (job.solver->name + "_" + std::to_string(job.seed) + ".csv"), std::ios::binary);
          if (!f) throw std::runtime_error("cannot write trace file in '" + dir.string() + "'");
          write_trace_csv(job.trace, f);
        } catch (const std::exception& e) {
          job.error = e.what();
        }
      }
    };
    const std::size_t workers = std::min<std::size_t>(jobs.size(), std::max(1u, std::thread::hardware_concurrency()));
    std::vector<std::thread> pool;
    for (std::size_t w = 1; w < workers; ++w) pool.emplace_back(worker);
    worker();
    for (auto& th : pool) th.join();

    for (const auto& job : jobs)
      if (!job.error.empty()) {
        err << "error: solver '" << job.solver->name << "' (seed " << job.seed << ") failed: " << job.error << '\n';
        return static_cast<int>(kRuntimeError);
      }

    json manifest{{"config_file", config_path.string()},
                  {"config",
                   {{"problem", problem_config_json(cfg.problem)},
                    {"seeds", cfg.seeds},
                    {"output", {{"directory", dir.string()}, {"plot", cfg.output.plot}}}}},
                  {"problem", problem_json(problem)},
                  {"versions", versions_json()}};
    json solvers = json::array();
    for (const auto& s : cfg.solvers) {
      json j = solver_json(s);
      const double c1 = envelope_constant(problem, s.config);
      j["estimator_envelope_constant"] = std::isnan(c1) ? json(nullptr) : json(c1);
      solvers.push_back(j);
    }
    manifest["config"]["solvers"] = solvers;
    json runs = json::array();
    for (const auto& job : jobs) {
      const TraceRow& last = job.trace.rows.back();
      runs.push_back({{"solver", job.solver->name},
                      {"seed", job.seed},
                      {"csv", job.solver->name + "_" + std::to_string(job.seed) + ".csv"},
                      {"rows", job.trace.rows.size()},
                      {"iterations", last.global_iter},
                      {"final_objective", last.objective},
                      {"final_feasibility", last.feasibility},
                      {"sfo_calls", last.sfo_calls},
                      {"ifo_calls", last.ifo_calls},
                      {"lmo_calls", last.lmo_calls}});
      out << job.solver->name << " seed " << job.seed << ": " << last.global_iter << " iterations, objective "
          << last.objective << ", feasibility " << last.feasibility << '\n';
    }
    manifest["runs"] = runs;
    write_file(dir / "manifest.json", manifest.dump(2) + "\n");

    if (cfg.output.plot) {
      std::vector<fs::path> csvs;
      for (const auto& job : jobs) csvs.push_back(dir / (job.solver->name + "_" + std::to_string(job.seed) + ".csv"));
      for (const char* metric : {"feasibility", "subopt"}) {
        if (std::string(metric) == "subopt" && !problem.meta.f_star) continue;
        const int rc = cmd_plot(csvs, metric, dir / (std::string(metric) + ".svg"), err);
        if (rc != kOk) return rc;
      }
    }
    out << "wrote " << jobs.size() << " trace(s) to " << dir.string() << '\n';
    return static_cast<int>(kOk);
  });
}

int cmd_plot(const std::vector<fs::path>& csvs, const std::string& metric, const fs::path& svg,
             std::ostream& err) {
  if (csvs.empty()) {
    err << "error: plot needs at least one trace file\n";
    return kUsage;
  }
  try {
    std::vector<PlotSeries> series;
    for (const auto& path : csvs) {
      std::ifstream in(path);
      if (!in) throw std::runtime_error("cannot read trace '" + path.string() + "'");
      const CsvTable table = read_trace_csv(in);
      if (table.rows.empty()) throw std::runtime_error("trace '" + path.string() + "' has no rows");
      const std::size_t xc = table.column("global_iter");
      const std::size_t yc = table.column(metric);
      PlotSeries s;
      s.label = path.stem().string();
      std::size_t dropped = 0;
      for (const auto& row : table.rows) {
        const double x = row[xc], y = row[yc];
        if (x > 0.0 && y > 0.0 && std::isfinite(x) && std::isfinite(y)) {
          s.x.push_back(x);
          s.y.push_back(y);
        } else {
          ++dropped;
        }
      }
      if (dropped)
        err << "plot: dropped " << dropped << " row(s) with non-positive or missing " << metric << " or iteration from "
            << path.filename().string() << '\n';
      series.push_back(std::move(s));
    }
    write_file(svg, render_loglog_svg(series, "global iteration", metric));
    return kOk;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kConfigError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kRuntimeError;
  }
}

int cmd_probe_variance(const fs::path& config_path, std::ostream& out, std::ostream& err,
                       const std::optional<fs::path>& out_dir) {
  return guarded(err, [&] {
    const ExperimentConfig cfg = load_config(config_path);
    const ProblemInstance problem = build_problem(cfg);
    const fs::path dir = out_dir ? *out_dir : output_directory(cfg);
    fs::create_directories(dir);
    for (const auto& s : cfg.solvers) {
      SolverConfig c = s.config;
      c.seed = cfg.seeds.front();
      VarianceProbe probe;
      try {
        probe = variance_probe(problem, c, cfg.probe.checkpoints, cfg.probe.n_seeds);
      } catch (const std::exception& e) {
        err << "error: solver '" << s.name << "' probe failed: " << e.what() << '\n';
        return static_cast<int>(kRuntimeError);
      }
      const double c1 = envelope_constant(problem, c);
      std::ostringstream csv;
      csv << "global_iter,mse,envelope\n";
      out << s.name << " (" << cfg.probe.n_seeds << " seeds)\n";
      for (const auto& cp : probe.checkpoints) {
        const double env = envelope_at(c, c1, cp.global_iter);
        csv << cp.global_iter << ',';
        put_real(csv, cp.mse);
        csv << ',';
        put_real(csv, env);
        csv << '\n';
        out << "  k=" << cp.global_iter << "  mse=" << cp.mse << "  envelope=" << env << '\n';
      }
      write_file(dir / ("variance_" + s.name + ".csv"), csv.str());
    }
    return static_cast<int>(kOk);
  });
}

int cmd_make_problem(const fs::path& config_path, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const ExperimentConfig cfg = load_config(config_path);
    const ProblemInstance problem = build_problem(cfg);
    json j = problem_json(problem);
    j["family"] = cfg.problem.family;
    if (cfg.problem.family == "synthetic") {
      const RankReport rank = equality_system_rank(problem.constraints);
      j["equality_rank"] = rank.rank;
      j["symmetric_dimension"] = rank.full_rank;
      j["unique_feasible_point"] = rank.unique();
    }
    out << j.dump(2) << '\n';
    return static_cast<int>(kOk);
  });
}

}  // namespace hsfw::cli

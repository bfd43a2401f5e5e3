#include <ostream>

#include <CLI11.hpp>

#include "hsfw/cli/commands.hpp"

namespace hsfw::cli {

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Homotopy stochastic conditional-gradient solvers for SDPs with many constraints", "hsfw"};
  app.require_subcommand(1);

  std::string config;
  std::string out_dir;
  auto* run = app.add_subcommand("run", "Run every configured solver and seed; write CSV traces and manifest.json");
  run->add_option("config", config, "Experiment config (YAML)")->required();
  run->add_option("--out", out_dir, "Output directory (overrides the config and HSFW_OUTPUT_ROOT)");

  std::string metric = "feasibility";
  std::string svg;
  std::vector<std::string> csvs;
  auto* plot = app.add_subcommand("plot", "Log-log SVG of one trace column against global_iter");
  plot->add_option("--metric", metric, "Trace column to plot")->required();
  plot->add_option("--out", svg, "SVG file to write")->required();
  plot->add_option("csv", csvs, "Trace CSV files")->required();

  auto* probe = app.add_subcommand("probe-variance", "Seed-averaged estimator error at the probe checkpoints");
  probe->add_option("config", config, "Experiment config (YAML)")->required();
  probe->add_option("--out", out_dir, "Output directory");

  auto* make = app.add_subcommand("make-problem", "Print problem metadata and constraint counts without solving");
  make->add_option("config", config, "Experiment config (YAML)")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? kOk : kUsage;
  }

  std::optional<std::filesystem::path> dir;
  if (!out_dir.empty()) dir = out_dir;
  if (*run) return cmd_run(config, out, err, dir);
  if (*plot) return cmd_plot({csvs.begin(), csvs.end()}, metric, svg, err);
  if (*probe) return cmd_probe_variance(config, out, err, dir);
  return cmd_make_problem(config, out, err);
}

}  // namespace hsfw::cli

#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "hsfw/cli/config.hpp"
#include "hsfw/solvers/solvers.hpp"

namespace hsfw::cli {

enum ExitCode : int { kOk = 0, kUsage = 1, kConfigError = 2, kRuntimeError = 3 };

/// Header plus one line per row, columns in kTraceColumns order, reals with
/// 17 significant digits.
void write_trace_csv(const RunTrace& trace, std::ostream& out);

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
  std::size_t column(const std::string& name) const;  // throws std::invalid_argument
};
CsvTable read_trace_csv(std::istream& in);

struct PlotSeries {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
};
/// Static log-log line chart, one polyline per series. Points must be positive.
std::string render_loglog_svg(const std::vector<PlotSeries>& series, const std::string& x_label,
                              const std::string& y_label);

/// `run <config>`: writes <out>/<solver>_<seed>.csv per job and manifest.json.
int cmd_run(const std::filesystem::path& config_path, std::ostream& out, std::ostream& err,
            const std::optional<std::filesystem::path>& out_dir = std::nullopt);
/// `plot --metric <name> --out <svg> <csv...>`
int cmd_plot(const std::vector<std::filesystem::path>& csvs, const std::string& metric,
             const std::filesystem::path& svg, std::ostream& err);
/// `probe-variance <config>`: estimator mse at probe checkpoints per solver.
int cmd_probe_variance(const std::filesystem::path& config_path, std::ostream& out, std::ostream& err,
                       const std::optional<std::filesystem::path>& out_dir = std::nullopt);
/// `make-problem <config>`: problem metadata as JSON on `out`, no solving.
int cmd_make_problem(const std::filesystem::path& config_path, std::ostream& out, std::ostream& err);

/// Full command-line entry point.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace hsfw::cli

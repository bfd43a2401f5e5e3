#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "hsfw/core/schedules.hpp"
#include "hsfw/core/sym_matrix.hpp"
#include "hsfw/domains/domain.hpp"
#include "hsfw/problems/problems.hpp"

namespace hsfw {

enum class SamplingMode { FiniteSum, Expectation };

struct SolverConfig {
  Algorithm algorithm = Algorithm::H1SFW;
  double beta0 = 1.0;
  SamplingMode mode = SamplingMode::FiniteSum;
  /// H-1SFW minibatch. When batch_fraction > 0 the batch is ceil(fraction * n).
  std::uint64_t batch_size = 1;
  double batch_fraction = 0.0;
  /// Budget in global iterations (inner iterations for H-SPIDER-FW).
  std::uint64_t max_iterations = 1000;
  std::uint64_t seed = 0;
  LmoSettings lmo;
  /// Row every `trace_every` iterations (0: initial and final rows only).
  std::uint64_t trace_every = 1;
  /// Iterations at which est_error is probed; each also gets a row.
  std::vector<std::uint64_t> checkpoint_ks;
  /// SHCGM / HCGM schedule constants.
  BaselineSchedule baseline;
  /// Overrides the problem's recorded f*.
  std::optional<double> f_star;

  std::uint64_t effective_batch(std::size_t n) const;
  void validate() const;
};

/// One trace row. global_iter counts completed iterations; the iterate is the
/// one produced by that iteration, and beta/gamma are the values it used.
/// est_error is ||grad F_beta(x) - estimator|| at the iterate the estimator
/// was built for (NaN when not probed). subopt and smoothed_gap_upper are NaN
/// without f*.
struct TraceRow {
  std::uint64_t global_iter = 0;
  std::uint64_t epoch_t = 0;
  std::uint64_t inner_k = 0;
  double objective = 0.0;
  double subopt = 0.0;
  double feasibility = 0.0;
  double smoothed_gap_upper = 0.0;
  double beta = 0.0;
  double gamma = 0.0;
  std::uint64_t sfo_calls = 0;
  std::uint64_t ifo_calls = 0;
  std::uint64_t lmo_calls = 0;
  double wall_ms = 0.0;
  double est_error = 0.0;
};

/// CSV column order of a trace row.
inline constexpr std::array<std::string_view, 14> kTraceColumns = {
    "global_iter", "epoch_t",   "inner_k",   "objective", "subopt",    "feasibility", "smoothed_gap_upper",
    "beta",        "gamma",     "sfo_calls", "ifo_calls", "lmo_calls", "wall_ms",     "est_error"};

/// Column `index` of kTraceColumns as a double.
double trace_value(const TraceRow& row, std::size_t index);
/// Index into kTraceColumns; throws std::invalid_argument for unknown names.
std::size_t trace_column_index(std::string_view name);

struct RunTrace {
  std::string algorithm;
  std::uint64_t seed = 0;
  std::optional<double> f_star;
  std::vector<TraceRow> rows;
  SymMatrix final_iterate;
};

/// Optional observer; called for every recorded row with the row's iterate.
using RowObserver = std::function<void(const TraceRow&, const SymMatrix&)>;

RunTrace run_h1sfw(const ProblemInstance& problem, const SolverConfig& config,
                   const RowObserver& observer = {});
RunTrace run_hspiderfw(const ProblemInstance& problem, const SolverConfig& config,
                       const RowObserver& observer = {});
/// SHCGM when config.algorithm == SHCGM, HCGM when HCGM.
RunTrace run_shcgm(const ProblemInstance& problem, const SolverConfig& config,
                   const RowObserver& observer = {});
/// Dispatches on config.algorithm.
RunTrace run_solver(const ProblemInstance& problem, const SolverConfig& config,
                    const RowObserver& observer = {});

struct ReferenceOptions {
  std::uint64_t fallback_iterations = 1'000'000;
  double fallback_beta0 = 1.0;
};

struct ReferenceSolution {
  SymMatrix x;
  double f_star = 0.0;
  bool from_planted = false;  // unique planted point, exact
  /// Fallback only: final feasibility and smoothed penalty F_beta - f at x.
  double feasibility = 0.0;
  double error_bar = 0.0;
};

/// Ground truth at desk scale. Returns the planted X* when the equality system
/// has full rank d(d+1)/2 (so X* is the only feasible point); otherwise runs
/// HCGM until feasibility <= accuracy_target or the budget is exhausted.
ReferenceSolution run_reference(const ProblemInstance& problem, double accuracy_target,
                                const ReferenceOptions& options = {});

}  // namespace hsfw

#include "hsfw/solvers/solvers.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "hsfw/constraints/penalty.hpp"
#include "hsfw/core/counters.hpp"
#include "hsfw/estimators/estimators.hpp"

namespace hsfw {

double trace_value(const TraceRow& r, std::size_t index) {
  switch (index) {
    case 0: return static_cast<double>(r.global_iter);
    case 1: return static_cast<double>(r.epoch_t);
    case 2: return static_cast<double>(r.inner_k);
    case 3: return r.objective;
    case 4: return r.subopt;
    case 5: return r.feasibility;
    case 6: return r.smoothed_gap_upper;
    case 7: return r.beta;
    case 8: return r.gamma;
    case 9: return static_cast<double>(r.sfo_calls);
    case 10: return static_cast<double>(r.ifo_calls);
    case 11: return static_cast<double>(r.lmo_calls);
    case 12: return r.wall_ms;
    case 13: return r.est_error;
    default: throw std::out_of_range("trace_value: column index out of range");
  }
}

std::size_t trace_column_index(std::string_view name) {
  for (std::size_t i = 0; i < kTraceColumns.size(); ++i)
    if (kTraceColumns[i] == name) return i;
  throw std::invalid_argument("unknown trace column '" + std::string(name) + "'");
}

std::uint64_t SolverConfig::effective_batch(std::size_t n) const {
  if (batch_fraction > 0.0)
    return std::max<std::uint64_t>(1, static_cast<std::uint64_t>(std::ceil(batch_fraction * static_cast<double>(n))));
  return batch_size;
}

void SolverConfig::validate() const {
  if (!(beta0 > 0.0) || !std::isfinite(beta0)) throw std::invalid_argument("beta0 must be a positive finite number");
  if (batch_fraction < 0.0 || batch_fraction > 1.0 || std::isnan(batch_fraction))
    throw std::invalid_argument("batch_fraction must lie in [0, 1]");
  if (batch_fraction == 0.0 && batch_size == 0) throw std::invalid_argument("batch_size must be >= 1");
  if (!(lmo.lanczos.tol > 0.0)) throw std::invalid_argument("lmo tolerance must be positive");
}

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

class Recorder {
 public:
  Recorder(const ProblemInstance& problem, const SolverConfig& config, const RowObserver& observer)
      : problem_(problem), config_(config), observer_(observer), start_(std::chrono::steady_clock::now()) {
    trace_.algorithm = std::string(algorithm_name(config.algorithm));
    trace_.seed = config.seed;
    trace_.f_star = config.f_star ? config.f_star : problem.meta.f_star;
    checkpoints_ = config.checkpoint_ks;
    std::sort(checkpoints_.begin(), checkpoints_.end());
  }

  bool is_checkpoint(std::uint64_t g) const {
    return std::binary_search(checkpoints_.begin(), checkpoints_.end(), g);
  }

  bool wants(std::uint64_t g) const {
    return g == 0 || g == config_.max_iterations || is_checkpoint(g) ||
           (config_.trace_every != 0 && g % config_.trace_every == 0);
  }

  void record(std::uint64_t g, std::uint64_t t, std::uint64_t k, const SymMatrix& x, double beta,
              double gamma, const OracleCounters& c, double est_error, bool force = false) {
    if (!force && !wants(g)) return;
    if (!trace_.rows.empty() && trace_.rows.back().global_iter == g) return;
    TraceRow r;
    r.global_iter = g;
    r.epoch_t = t;
    r.inner_k = k;
    r.objective = problem_.objective->value(x);
    const double sumsq = squared_residual_sum(problem_.constraints, x);
    r.feasibility = std::sqrt(sumsq);
    const double n = static_cast<double>(problem_.constraints.size());
    if (trace_.f_star) {
      r.subopt = std::abs(r.objective - *trace_.f_star);
      r.smoothed_gap_upper = r.objective + sumsq / (2.0 * beta * n) - *trace_.f_star;
    } else {
      r.subopt = kNaN;
      r.smoothed_gap_upper = kNaN;
    }
    r.beta = beta;
    r.gamma = gamma;
    r.sfo_calls = c.sfo_calls;
    r.ifo_calls = c.ifo_calls;
    r.lmo_calls = c.lmo_calls;
    r.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start_).count();
    r.est_error = est_error;
    trace_.rows.push_back(r);
    if (observer_) observer_(r, x);
  }

  RunTrace finish(SymMatrix x) {
    trace_.final_iterate = std::move(x);
    return std::move(trace_);
  }

 private:
  const ProblemInstance& problem_;
  const SolverConfig& config_;
  const RowObserver& observer_;
  std::chrono::steady_clock::time_point start_;
  std::vector<std::uint64_t> checkpoints_;
  RunTrace trace_;
};

double estimator_error(const ProblemInstance& p, const SymMatrix& x, double beta, const SymMatrix& est) {
  SymMatrix diff = full_smoothed_objective(p.constraints, *p.objective, x, beta).gradient;
  diff -= est;
  return diff.frobenius_norm();
}

void check_problem(const ProblemInstance& p) {
  if (!p.objective) throw std::invalid_argument("problem has no objective");
  if (p.constraints.size() == 0) throw std::invalid_argument("problem has no constraints");
  if (p.constraints.dim() != p.domain.dim || p.objective->dim() != p.domain.dim)
    throw std::invalid_argument("problem dimensions disagree");
}

}  // namespace

RunTrace run_h1sfw(const ProblemInstance& problem, const SolverConfig& config, const RowObserver& observer) {
  config.validate();
  check_problem(problem);
  const auto& sys = problem.constraints;
  const std::uint64_t batch = config.effective_batch(sys.size());
  RngStream sampling = make_stream(config.seed, StreamTag::Sampling);
  RngStream lmo_rng = make_stream(config.seed, StreamTag::Lmo);
  RngStream noise = make_stream(config.seed, StreamTag::ObjectiveNoise);

  Recorder rec(problem, config, observer);
  OracleCounters counters;
  SymMatrix x = SymMatrix::zeros(problem.domain.dim);
  rec.record(0, 0, 0, x, config.beta0, 0.0, counters, kNaN);

  MomentumEstimatorState est;
  for (std::uint64_t k = 1; k <= config.max_iterations; ++k) {
    const MomentumStep s = h1sfw_schedule(k, config.beta0);
    const auto idx = sample_batch(sys, batch, sampling);
    momentum_update(est, sampled_gradient(sys, *problem.objective, x, s.beta, idx, noise), s.rho);
    counters.charge_sampled(batch);
    const double err = rec.is_checkpoint(k) ? estimator_error(problem, x, s.beta, est.d) : kNaN;
    const LmoReport w = lmo_spectrahedron(est.d, problem.domain, config.lmo, lmo_rng);
    counters.charge_lmo();
    convex_step_inplace(x, w.extreme_point, s.gamma);
    rec.record(k, 0, k, x, s.beta, s.gamma, counters, err);
  }
  return rec.finish(std::move(x));
}

RunTrace run_hspiderfw(const ProblemInstance& problem, const SolverConfig& config, const RowObserver& observer) {
  config.validate();
  check_problem(problem);
  const auto& sys = problem.constraints;
  RngStream sampling = make_stream(config.seed, StreamTag::Sampling);
  RngStream lmo_rng = make_stream(config.seed, StreamTag::Lmo);
  RngStream noise = make_stream(config.seed, StreamTag::ObjectiveNoise);
  const RefreshMode mode =
      config.mode == SamplingMode::FiniteSum ? RefreshMode::FiniteSumFull : RefreshMode::ExpectationBatch;

  Recorder rec(problem, config, observer);
  OracleCounters counters;
  SymMatrix x = SymMatrix::zeros(problem.domain.dim);
  rec.record(0, 0, 0, x, config.beta0, 0.0, counters, kNaN);

  SpiderEstimatorState est;
  std::uint64_t g = 0;
  for (std::uint64_t t = 1; g < config.max_iterations; ++t) {
    const SpiderStep first = hspiderfw_schedule(t, 1, config.beta0);
    const std::uint64_t q = mode == RefreshMode::ExpectationBatch ? outer_batch_size(t, config.beta0) : 0;
    spider_refresh(est, sys, *problem.objective, x, first.beta, mode, q, sampling, noise, counters);
    for (std::uint64_t k = 1; k <= first.epoch_length && g < config.max_iterations; ++k) {
      const SpiderStep s = hspiderfw_schedule(t, k, config.beta0);
      if (k > 1) {
        const auto idx = sample_batch(sys, s.inner_batch, sampling);
        spider_inner_update(est, sys, *problem.objective, x, s.beta, idx, counters);
      }
      ++g;
      const double err = rec.is_checkpoint(g) ? estimator_error(problem, x, s.beta, est.v) : kNaN;
      const LmoReport w = lmo_spectrahedron(est.v, problem.domain, config.lmo, lmo_rng);
      counters.charge_lmo();
      convex_step_inplace(x, w.extreme_point, s.gamma);
      rec.record(g, t, k, x, s.beta, s.gamma, counters, err);
    }
  }
  return rec.finish(std::move(x));
}

RunTrace run_shcgm(const ProblemInstance& problem, const SolverConfig& config, const RowObserver& observer) {
  config.validate();
  check_problem(problem);
  if (config.algorithm != Algorithm::SHCGM && config.algorithm != Algorithm::HCGM)
    throw std::invalid_argument("run_shcgm: algorithm must be SHCGM or HCGM");
  const bool stochastic = config.algorithm == Algorithm::SHCGM;
  const auto& sys = problem.constraints;
  RngStream lmo_rng = make_stream(config.seed, StreamTag::Lmo);
  RngStream noise = make_stream(config.seed, StreamTag::ObjectiveNoise);

  Recorder rec(problem, config, observer);
  OracleCounters counters;
  SymMatrix x = SymMatrix::zeros(problem.domain.dim);
  rec.record(0, 0, 0, x, config.beta0, 0.0, counters, kNaN);

  MomentumEstimatorState est;
  for (std::uint64_t k = 1; k <= config.max_iterations; ++k) {
    const MomentumStep s = config.baseline.at(k, config.beta0);
    SymMatrix dir;
    if (stochastic) {
      momentum_update(est, problem.objective->sample_gradient(x, noise), s.rho);
      counters.charge_sampled(1);
      dir = est.d;
    } else {
      dir = problem.objective->gradient(x);
    }
    dir += full_penalty_gradient(sys, x, s.beta);
    counters.charge_enumerated(sys.size());
    const double err = rec.is_checkpoint(k) ? estimator_error(problem, x, s.beta, dir) : kNaN;
    const LmoReport w = lmo_spectrahedron(dir, problem.domain, config.lmo, lmo_rng);
    counters.charge_lmo();
    convex_step_inplace(x, w.extreme_point, s.gamma);
    rec.record(k, 0, k, x, s.beta, s.gamma, counters, err);
  }
  return rec.finish(std::move(x));
}

RunTrace run_solver(const ProblemInstance& problem, const SolverConfig& config, const RowObserver& observer) {
  switch (config.algorithm) {
    case Algorithm::H1SFW:
      return run_h1sfw(problem, config, observer);
    case Algorithm::HSPIDERFW:
      return run_hspiderfw(problem, config, observer);
    case Algorithm::SHCGM:
    case Algorithm::HCGM:
      return run_shcgm(problem, config, observer);
  }
  throw std::invalid_argument("run_solver: unknown algorithm");
}

ReferenceSolution run_reference(const ProblemInstance& problem, double accuracy_target,
                                const ReferenceOptions& options) {
  check_problem(problem);
  ReferenceSolution out;
  const std::size_t d = problem.domain.dim;
  if (problem.meta.planted && problem.constraints.size() > d * (d + 1) / 2 &&
      equality_system_rank(problem.constraints).unique()) {
    out.x = *problem.meta.planted;
    out.f_star = problem.objective->value(out.x);
    out.from_planted = true;
    out.feasibility = std::sqrt(squared_residual_sum(problem.constraints, out.x));
    return out;
  }

  // Fallback: deterministic HCGM, checking feasibility every `stride` steps.
  SolverConfig cfg;
  cfg.algorithm = Algorithm::HCGM;
  cfg.beta0 = options.fallback_beta0;
  cfg.trace_every = 0;
  cfg.max_iterations = 0;
  const ConstraintSystem& sys = problem.constraints;
  RngStream lmo_rng = make_stream(0, StreamTag::Lmo);
  SymMatrix x = SymMatrix::zeros(d);
  double beta = cfg.beta0;
  const std::uint64_t stride = 1000;
  for (std::uint64_t k = 1; k <= options.fallback_iterations; ++k) {
    const MomentumStep s = cfg.baseline.at(k, cfg.beta0);
    beta = s.beta;
    SymMatrix dir = problem.objective->gradient(x);
    dir += full_penalty_gradient(sys, x, s.beta);
    const LmoReport w = lmo_spectrahedron(dir, problem.domain, cfg.lmo, lmo_rng);
    convex_step_inplace(x, w.extreme_point, s.gamma);
    if (k % stride == 0 && std::sqrt(squared_residual_sum(sys, x)) <= accuracy_target) break;
  }
  out.f_star = problem.objective->value(x);
  const double sumsq = squared_residual_sum(sys, x);
  out.feasibility = std::sqrt(sumsq);
  out.error_bar = sumsq / (2.0 * beta * static_cast<double>(sys.size()));
  out.x = std::move(x);
  return out;
}

}  // namespace hsfw

#include "hsfw/diagnostics/diagnostics.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <stdexcept>
#include <thread>

#include "hsfw/constraints/penalty.hpp"

namespace hsfw {

double feasibility_norm(const ConstraintSystem& sys, const SymMatrix& x) {
  return std::sqrt(squared_residual_sum(sys, x));
}

RateFit fit_loglog_rate(std::span<const double> iters, std::span<const double> metric, double k_min,
                        double k_max) {
  if (iters.size() != metric.size()) throw std::invalid_argument("fit_loglog_rate: length mismatch");
  RateFit fit;
  fit.k_min = k_min;
  fit.k_max = k_max;
  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < iters.size(); ++i) {
    if (!(iters[i] >= k_min && iters[i] <= k_max)) continue;
    if (!(metric[i] > 0.0) || !std::isfinite(metric[i]) || !(iters[i] > 0.0)) {
      ++fit.excluded;
      continue;
    }
    lx.push_back(std::log(iters[i]));
    ly.push_back(std::log(metric[i]));
  }
  fit.used = lx.size();
  if (fit.used < 10)
    throw std::invalid_argument("fit_loglog_rate: need at least 10 positive samples in the window, got " +
                                std::to_string(fit.used));
  const double m = static_cast<double>(fit.used);
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    mx += lx[i];
    my += ly[i];
  }
  mx /= m;
  my /= m;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    sxx += (lx[i] - mx) * (lx[i] - mx);
    sxy += (lx[i] - mx) * (ly[i] - my);
    syy += (ly[i] - my) * (ly[i] - my);
  }
  if (sxx == 0.0) throw std::invalid_argument("fit_loglog_rate: all samples share one iteration");
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  // a flat metric fits perfectly; syy only carries rounding noise then
  fit.r_squared = syy <= 1e-24 * m * (1.0 + my * my) ? 1.0 : std::clamp(sxy * sxy / (sxx * syy), 0.0, 1.0);
  return fit;
}

RateFit fit_loglog_rate(const RunTrace& trace, std::string_view column, double k_min, double k_max) {
  const std::size_t col = trace_column_index(column);
  std::vector<double> it, v;
  for (const auto& r : trace.rows) {
    it.push_back(static_cast<double>(r.global_iter));
    v.push_back(trace_value(r, col));
  }
  return fit_loglog_rate(it, v, k_min, k_max);
}

bool recursion_bound_check(double phi0, double c, double b, double alpha, double beta, double k0,
                           std::uint64_t k_max) {
  const bool alpha_one = alpha == 1.0 && beta > 1.0 && beta <= 2.0;
  const bool alpha_two_thirds = std::abs(alpha - 2.0 / 3.0) < 1e-15 && beta == 1.0;
  if (!(alpha_one || alpha_two_thirds))
    throw std::invalid_argument("recursion_bound_check: (alpha, beta) outside the admissible sets");
  if (!(b >= 0.0) || !(c > 1.0) || !(k0 >= 0.0))
    throw std::invalid_argument("recursion_bound_check: need b >= 0, c > 1, k0 >= 0");
  const double e = beta - alpha;
  const double q = std::max(phi0 * std::pow(k0 + 1.0, e), b / (c - 1.0));
  double phi = phi0;
  for (std::uint64_t k = 1; k <= k_max; ++k) {
    const double kk = static_cast<double>(k) + k0;
    phi = (1.0 - c / std::pow(kk, alpha)) * phi + b / std::pow(kk, beta);
    const double bound = q / std::pow(kk + 1.0, e);
    if (phi > bound + 1e-12 * std::abs(bound)) return false;
  }
  return true;
}

bool smoothed_gap_inequality_check(const RunTrace& trace, double f_star, double feasibility_tol) {
  if (!trace.f_star) throw std::invalid_argument("smoothed_gap_inequality_check: trace has no f*");
  for (const auto& r : trace.rows) {
    if (!(r.feasibility <= feasibility_tol)) continue;
    const double gap = r.smoothed_gap_upper + (*trace.f_star - f_star);
    if (gap < r.objective - f_star - 1e-9) return false;
  }
  return true;
}

VarianceProbe variance_probe(const ProblemInstance& problem, const SolverConfig& config,
                             std::span<const std::uint64_t> checkpoints, std::size_t n_seeds) {
  if (n_seeds < 2) throw std::invalid_argument("variance_probe: need at least 2 seeds");
  if (config.mode != SamplingMode::FiniteSum)
    throw std::invalid_argument("variance_probe: exact gradients need finite-sum mode");
  std::vector<std::uint64_t> ks(checkpoints.begin(), checkpoints.end());
  std::sort(ks.begin(), ks.end());
  ks.erase(std::unique(ks.begin(), ks.end()), ks.end());
  if (ks.empty()) throw std::invalid_argument("variance_probe: no checkpoints");

  SolverConfig base = config;
  base.checkpoint_ks = ks;
  base.trace_every = 0;
  base.max_iterations = std::max(base.max_iterations, ks.back());

  std::vector<std::vector<double>> per_seed(n_seeds, std::vector<double>(ks.size(), 0.0));
  std::vector<std::exception_ptr> errors(n_seeds);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t s = next++; s < n_seeds; s = next++) {
      try {
        SolverConfig cfg = base;
        cfg.seed = config.seed + s;
        const RunTrace trace = run_solver(problem, cfg);
        for (const auto& r : trace.rows) {
          const auto it = std::lower_bound(ks.begin(), ks.end(), r.global_iter);
          if (it != ks.end() && *it == r.global_iter)
            per_seed[s][static_cast<std::size_t>(it - ks.begin())] = r.est_error * r.est_error;
        }
      } catch (...) {
        errors[s] = std::current_exception();
      }
    }
  };
  const std::size_t workers =
      std::min<std::size_t>(n_seeds, std::max(1u, std::thread::hardware_concurrency()));
  std::vector<std::thread> pool;
  for (std::size_t w = 1; w < workers; ++w) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);

  VarianceProbe probe;
  for (std::size_t c = 0; c < ks.size(); ++c) {
    double sum = 0.0;
    for (std::size_t s = 0; s < n_seeds; ++s) sum += per_seed[s][c];
    probe.checkpoints.push_back({ks[c], sum / static_cast<double>(n_seeds)});
  }
  return probe;
}

EnvelopeInputs envelope_inputs(const ProblemInstance& problem, double beta0) {
  return {problem.objective->noise_level(), problem.objective->smoothness(), problem.constraints.la_bound(),
          diameter_bound(problem.domain), beta0};
}

double batch_estimate_variance(const ProblemInstance& problem, const SymMatrix& x, double beta,
                               std::uint64_t batch) {
  if (batch == 0) throw std::invalid_argument("batch_estimate_variance: batch must be >= 1");
  const auto& sys = problem.constraints;
  const std::size_t n = sys.size();
  SymMatrix mean = SymMatrix::zeros(x.dim());
  double second_moment = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    SymMatrix gi = SymMatrix::zeros(x.dim());
    add_penalty_gradient(sys.block(i), x, beta, 1.0, gi);
    const double nrm = gi.frobenius_norm();
    second_moment += nrm * nrm;
    mean += gi;
  }
  mean *= 1.0 / static_cast<double>(n);
  const double mnorm = mean.frobenius_norm();
  const double var = std::max(0.0, second_moment / static_cast<double>(n) - mnorm * mnorm);
  const double sf = problem.objective->noise_level();
  return (var + sf * sf) / static_cast<double>(batch);
}

double momentum_variance_constant(const EnvelopeInputs& in, double initial_error_sq) {
  const double d2 = in.diameter * in.diameter;
  const double tail = 2.0 * (18.0 * in.sigma_f * in.sigma_f + 112.0 * in.lf * in.lf * d2 +
                             522.0 * in.la * in.la * d2 / (in.beta0 * in.beta0));
  return std::max(std::cbrt(6.0) * initial_error_sq, tail);
}

double momentum_variance_envelope(double c1, std::uint64_t k) {
  return c1 / std::cbrt(static_cast<double>(k) + 5.0);
}

double spider_variance_constant(const EnvelopeInputs& in) {
  const double d2 = in.diameter * in.diameter;
  return 2.0 * d2 * (8.0 * in.lf * in.lf + 98.0 * in.la * in.la / (in.beta0 * in.beta0));
}

double spider_variance_envelope(double c1, std::uint64_t global_iter) {
  return c1 / (static_cast<double>(global_iter) + 1.0);
}

}  // namespace hsfw

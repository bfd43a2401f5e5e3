#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "hsfw/constraints/system.hpp"
#include "hsfw/problems/problems.hpp"
#include "hsfw/solvers/solvers.hpp"

namespace hsfw {

/// sqrt(sum_i dist(<A_i, X>, b_i)^2) over every block.
double feasibility_norm(const ConstraintSystem& sys, const SymMatrix& x);

struct RateFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
  double k_min = 0.0;
  double k_max = 0.0;
  std::size_t used = 0;
  std::size_t excluded = 0;  // non-positive or non-finite samples inside the window
};

/// Least squares of log(metric) on log(iter) over iter in [k_min, k_max].
/// Throws std::invalid_argument with fewer than 10 usable samples.
RateFit fit_loglog_rate(std::span<const double> iters, std::span<const double> metric, double k_min,
                        double k_max);
/// Same, on a trace column against global_iter.
RateFit fit_loglog_rate(const RunTrace& trace, std::string_view column, double k_min, double k_max);

/// Iterates phi_k = (1 - c/(k+k0)^alpha) phi_{k-1} + b/(k+k0)^beta with
/// equality and checks phi_k <= Q/(k+1+k0)^(beta-alpha) for k = 1..k_max,
/// Q = max(phi0 (k0+1)^(beta-alpha), b/(c-1)). Accepted parameter sets are
/// alpha = 1 with beta in (1, 2], and alpha = 2/3 with beta = 1; b >= 0, c > 1,
/// k0 >= 0. Comparisons allow a relative slack of 1e-12.
bool recursion_bound_check(double phi0, double c, double b, double alpha, double beta, double k0,
                           std::uint64_t k_max);

/// For every traced row with feasibility <= feasibility_tol, checks
/// S_beta(x) >= f(x) - f_star - 1e-9. Requires smoothed_gap_upper in the trace.
bool smoothed_gap_inequality_check(const RunTrace& trace, double f_star, double feasibility_tol = 1e-12);

struct VarianceCheckpoint {
  std::uint64_t global_iter = 0;
  double mse = 0.0;
};

struct VarianceProbe {
  std::vector<VarianceCheckpoint> checkpoints;
};

/// Reruns the configured solver for seeds config.seed + i, i < n_seeds (in
/// parallel), and averages ||grad F_beta(x) - estimator||^2 at each checkpoint
/// in seed order. Requires finite-sum mode and n_seeds >= 2.
VarianceProbe variance_probe(const ProblemInstance& problem, const SolverConfig& config,
                             std::span<const std::uint64_t> checkpoints, std::size_t n_seeds);

/// Problem constants entering the estimator-error envelopes.
struct EnvelopeInputs {
  double sigma_f = 0.0;
  double lf = 0.0;
  double la = 0.0;
  double diameter = 0.0;
  double beta0 = 1.0;
};
EnvelopeInputs envelope_inputs(const ProblemInstance& problem, double beta0);

/// Exact E||grad F_beta(x) - batch estimate||^2 for a uniform batch of size
/// `batch` at x, by enumerating every block; objective noise adds sigma_f^2/batch.
double batch_estimate_variance(const ProblemInstance& problem, const SymMatrix& x, double beta,
                               std::uint64_t batch);

/// Momentum estimator: C1 = max(6^{1/3} e0, 2 [18 sf^2 + 112 Lf^2 D^2 + 522 LA^2 D^2 / beta0^2]),
/// envelope C1 / (k+5)^{1/3}, where e0 is the initial squared estimator error.
double momentum_variance_constant(const EnvelopeInputs& in, double initial_error_sq);
double momentum_variance_envelope(double c1, std::uint64_t k);

/// Recursive estimator: C1 = 2 D^2 (8 Lf^2 + 98 LA^2 / beta0^2), envelope
/// C1 / kappa with kappa = K_t + k = global_iter + 1.
double spider_variance_constant(const EnvelopeInputs& in);
double spider_variance_envelope(double c1, std::uint64_t global_iter);

}  // namespace hsfw

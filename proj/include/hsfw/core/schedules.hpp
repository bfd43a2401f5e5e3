#pragma once

#include <cstdint>
#include <string_view>

namespace hsfw {

enum class Algorithm { H1SFW, HSPIDERFW, SHCGM, HCGM };

std::string_view algorithm_name(Algorithm a);
/// Accepts the canonical names (case-insensitive, '-' and '_' ignored).
Algorithm parse_algorithm(std::string_view name);

struct MomentumStep {
  double rho;
  double gamma;
  double beta;
};

/// H-1SFW: rho_k = 3/(k+5)^{2/3}, gamma_k = 2/(k+1), beta_k = beta0/(k+1)^{1/6}.
MomentumStep h1sfw_schedule(std::uint64_t k, double beta0);

struct SpiderStep {
  double gamma;
  double beta;
  std::uint64_t epoch_length;  // K_t = 2^{t-1}
  std::uint64_t inner_batch;   // |S_{t,k}| = K_t
};

/// H-SPIDER-FW: gamma = 2/(K_t+k), beta = beta0/sqrt(K_t+k). k may be K_t+1,
/// the edge index that coincides with (t+1, 1).
SpiderStep hspiderfw_schedule(std::uint64_t t, std::uint64_t k, double beta0);

/// Outer batch |Q_t| = ceil(2 K_t / beta_{t,1}^2) = ceil(2 K_t (K_t+1) / beta0^2).
/// Throws std::overflow_error when the count does not fit in 63 bits.
std::uint64_t outer_batch_size(std::uint64_t t, double beta0);

/// Global index kappa(t,k) = K_t + k. Consecutive inner steps, including the
/// step across an epoch boundary, differ by exactly one.
std::uint64_t global_index(std::uint64_t t, std::uint64_t k);

/// Number of completed iterations once step (t,k) has been taken: K_t + k - 1.
/// This is the x-axis shared with the single-loop methods.
std::uint64_t iterations_through(std::uint64_t t, std::uint64_t k);

/// Baseline schedule for SHCGM/HCGM. Defaults: rho_k = 4/(k+3)^{2/3},
/// gamma_k = 2/(k+1), beta_k = beta0/(k+1)^{1/2}; every constant is
/// overridable from the solver configuration.
struct BaselineSchedule {
  double rho_scale = 4.0;
  double rho_offset = 3.0;
  double rho_exponent = 2.0 / 3.0;
  double gamma_scale = 2.0;
  double gamma_offset = 1.0;
  double beta_offset = 1.0;
  double beta_exponent = 0.5;

  MomentumStep at(std::uint64_t k, double beta0) const;
};

}  // namespace hsfw

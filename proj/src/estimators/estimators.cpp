#include "hsfw/estimators/estimators.hpp"

#include <stdexcept>

namespace hsfw {

SymMatrix sampled_gradient(const ConstraintSystem& sys, const ObjectiveOracle& f, const SymMatrix& x,
                           double beta, std::span<const std::uint64_t> batch, RngStream& noise) {
  if (batch.empty()) throw std::invalid_argument("sampled_gradient: empty batch");
  const double inv = 1.0 / static_cast<double>(batch.size());
  SymMatrix grad;
  if (f.noise_level() == 0.0) {
    grad = f.sample_gradient(x, noise);
  } else {
    grad = SymMatrix::zeros(x.dim());
    for (std::size_t s = 0; s < batch.size(); ++s) grad += f.sample_gradient(x, noise);
    grad *= inv;
  }
  add_batch_penalty_gradient(sys, x, beta, batch, inv, grad);
  return grad;
}

void momentum_update(MomentumEstimatorState& state, const SymMatrix& stoch_grad, double rho) {
  if (!(rho > 0.0 && rho <= 1.0)) throw std::invalid_argument("momentum_update: rho must lie in (0, 1]");
  if (!state.initialized || rho == 1.0) {
    state.d = stoch_grad;
    state.initialized = true;
    ++state.k;
    return;
  }
  require_same_dim(state.d, stoch_grad, "momentum_update");
  auto d = state.d.raw();
  const auto g = stoch_grad.data();
  for (std::size_t i = 0; i < d.size(); ++i) d[i] = d[i] + rho * (g[i] - d[i]);
  ++state.k;
}

void spider_refresh(SpiderEstimatorState& state, const ConstraintSystem& sys,
                    const ObjectiveOracle& f, const SymMatrix& x, double beta, RefreshMode mode,
                    std::uint64_t batch_size, RngStream& sampling, RngStream& noise,
                    OracleCounters& counters) {
  if (mode == RefreshMode::FiniteSumFull) {
    state.v = full_smoothed_objective(sys, f, x, beta).gradient;
    counters.charge_enumerated(sys.size());
  } else {
    if (batch_size == 0) throw std::invalid_argument("spider_refresh: batch size must be >= 1");
    const auto batch = sample_batch(sys, batch_size, sampling);
    state.v = sampled_gradient(sys, f, x, beta, batch, noise);
    counters.charge_sampled(batch_size);
  }
  ++state.t;
  state.k = 1;
  state.prev_iterate = x;
  state.prev_beta = beta;
}

void spider_inner_update(SpiderEstimatorState& state, const ConstraintSystem& sys,
                         const ObjectiveOracle& f, const SymMatrix& x_new, double beta_new,
                         std::span<const std::uint64_t> batch, OracleCounters& counters) {
  if (!state.prev_iterate) throw std::logic_error("spider_inner_update: no snapshot; refresh first");
  if (batch.empty()) throw std::invalid_argument("spider_inner_update: empty batch");
  const SymMatrix& x_old = *state.prev_iterate;
  require_same_dim(x_old, x_new, "spider_inner_update");
  if (f.smoothness() != 0.0) {
    state.v += f.gradient(x_new);
    state.v -= f.gradient(x_old);
  }
  const double inv = 1.0 / static_cast<double>(batch.size());
  add_batch_penalty_difference(sys, x_new, beta_new, x_old, state.prev_beta, batch, inv, state.v);
  counters.charge_sampled(2 * batch.size());
  ++state.k;
  state.prev_iterate = x_new;
  state.prev_beta = beta_new;
}

}  // namespace hsfw

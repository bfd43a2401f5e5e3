#pragma once

#include <cstdint>
#include <optional>
#include <span>

#include "hsfw/constraints/objective.hpp"
#include "hsfw/constraints/penalty.hpp"
#include "hsfw/constraints/system.hpp"
#include "hsfw/core/counters.hpp"
#include "hsfw/core/rng.hpp"
#include "hsfw/core/sym_matrix.hpp"

namespace hsfw {

/// Batch-averaged stochastic gradient of F_beta:
/// (1/|S|) sum_{i in S} [grad f(x, xi_i) + grad g_{beta,i}(x)].
/// Objective samples are drawn from `noise`; a noiseless oracle is queried once.
SymMatrix sampled_gradient(const ConstraintSystem& sys, const ObjectiveOracle& f, const SymMatrix& x,
                           double beta, std::span<const std::uint64_t> batch, RngStream& noise);

/// d_k = (1 - rho_k) d_{k-1} + rho_k * stochastic gradient.
struct MomentumEstimatorState {
  SymMatrix d;
  std::uint64_t k = 0;
  bool initialized = false;
};

/// Updates as d + rho (g - d), which leaves d bitwise unchanged when g == d;
/// rho == 1 copies g. The first update after construction adopts g as d_0,
/// so d_1 = g for any rho. Throws for rho outside (0, 1].
void momentum_update(MomentumEstimatorState& state, const SymMatrix& stoch_grad, double rho);

enum class RefreshMode { FiniteSumFull, ExpectationBatch };

struct SpiderEstimatorState {
  SymMatrix v;
  std::uint64_t t = 0;
  std::uint64_t k = 0;
  std::optional<SymMatrix> prev_iterate;
  double prev_beta = 0.0;
};

/// Start of epoch t: v = grad F_beta(x) exactly over all n blocks
/// (FiniteSumFull, charged n ifo) or averaged over `batch_size` i.i.d. samples
/// (ExpectationBatch, charged batch_size sfo/ifo).
void spider_refresh(SpiderEstimatorState& state, const ConstraintSystem& sys,
                    const ObjectiveOracle& f, const SymMatrix& x, double beta, RefreshMode mode,
                    std::uint64_t batch_size, RngStream& sampling, RngStream& noise,
                    OracleCounters& counters);

/// v += avg_{i in batch} [grad F_{beta_new}(x_new, xi_i) - grad F_{prev_beta}(prev_iterate, xi_i)],
/// with the same indices for both terms; advances the snapshot to (x_new, beta_new).
/// Charged 2 |batch| sfo/ifo. Throws std::logic_error without a prior refresh.
///
/// The objective part of the difference is taken as grad f(x_new) - grad f(x_old):
/// with additive, x-independent noise the shared sample cancels exactly.
void spider_inner_update(SpiderEstimatorState& state, const ConstraintSystem& sys,
                         const ObjectiveOracle& f, const SymMatrix& x_new, double beta_new,
                         std::span<const std::uint64_t> batch, OracleCounters& counters);

}  // namespace hsfw

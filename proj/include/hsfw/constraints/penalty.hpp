#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "hsfw/constraints/objective.hpp"
#include "hsfw/constraints/system.hpp"
#include "hsfw/core/rng.hpp"

namespace hsfw {

/// g_beta(<A, X>) = dist(<A, X>, b)^2 / (2 beta) for one block.
struct SmoothedPenaltyEval {
  double value = 0.0;
  SymMatrix gradient;        // (1/beta) (z - proj(z)) A
  double residual = 0.0;     // dist(z, b)
  double dual_estimate = 0.0;  // (z - proj(z)) / beta; |dual_estimate| = residual / beta
};

SmoothedPenaltyEval smoothed_penalty(const ConstraintBlock& block, const SymMatrix& x, double beta);

/// grad += scale * grad g_beta(block at x); returns g_beta.
double add_penalty_gradient(const ConstraintBlock& block, const SymMatrix& x, double beta,
                            double scale, SymMatrix& grad);

/// grad += scale * sum_{i in batch} grad g_{beta,i}(x). Indices may repeat.
/// Returns the number of component evaluations performed on behalf of the
/// batch (always batch.size()).
std::uint64_t add_batch_penalty_gradient(const ConstraintSystem& sys, const SymMatrix& x,
                                         double beta, std::span<const std::uint64_t> batch,
                                         double scale, SymMatrix& grad);

/// grad += scale * sum_{i in batch} [grad g_{beta_new,i}(x_new) - grad g_{beta_old,i}(x_old)],
/// the shared-sample difference of the recursive estimator.
void add_batch_penalty_difference(const ConstraintSystem& sys, const SymMatrix& x_new,
                                  double beta_new, const SymMatrix& x_old, double beta_old,
                                  std::span<const std::uint64_t> batch, double scale,
                                  SymMatrix& grad);

struct SmoothedObjective {
  double value = 0.0;  // F_beta(x) = f(x) + (1/n) sum_i g_{beta,i}(x)
  double penalty = 0.0;  // (1/n) sum_i g_{beta,i}(x)
  SymMatrix gradient;
};

/// Exact finite-sum F_beta and its gradient.
SmoothedObjective full_smoothed_objective(const ConstraintSystem& sys, const ObjectiveOracle& f,
                                          const SymMatrix& x, double beta);

/// Exact (1/n) sum_i grad g_{beta,i}(x), penalty part only.
SymMatrix full_penalty_gradient(const ConstraintSystem& sys, const SymMatrix& x, double beta);

/// sum_i dist(<A_i, X>, b_i)^2 over every block (no averaging, no beta).
double squared_residual_sum(const ConstraintSystem& sys, const SymMatrix& x);

/// i.i.d. uniform indices with replacement; advances rng by exactly `size` draws.
std::vector<std::uint64_t> sample_batch(const ConstraintSystem& sys, std::uint64_t size,
                                        RngStream& rng);

}  // namespace hsfw

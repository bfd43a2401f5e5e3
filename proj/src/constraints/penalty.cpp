#include "hsfw/constraints/penalty.hpp"

#include <stdexcept>

namespace hsfw {

namespace {

void require_beta(double beta) {
  if (!(beta > 0.0)) throw std::invalid_argument("smoothing parameter beta must be positive");
}

// Signed residual z - proj(z) of one block.
double signed_residual(const ConstraintBlock& block, const SymMatrix& x) {
  const double z = apply(block.op, x);
  return z - block.target.project(z);
}

// Calls fn(index, multiplicity) for each distinct index. Large batches are
// folded into per-index counts; small ones are visited in draw order.
template <typename Fn>
void for_each_weighted(std::size_t n, std::span<const std::uint64_t> batch, Fn&& fn) {
  if (batch.size() > n) {
    std::vector<std::uint32_t> counts(n, 0);
    for (auto i : batch) ++counts[i];
    for (std::size_t i = 0; i < n; ++i)
      if (counts[i] != 0) fn(i, static_cast<double>(counts[i]));
  } else {
    for (auto i : batch) fn(static_cast<std::size_t>(i), 1.0);
  }
}

}  // namespace

SmoothedPenaltyEval smoothed_penalty(const ConstraintBlock& block, const SymMatrix& x, double beta) {
  require_beta(beta);
  SmoothedPenaltyEval out;
  out.gradient = SymMatrix::zeros(x.dim());
  const double r = signed_residual(block, x);
  out.residual = std::abs(r);
  out.value = r * r / (2.0 * beta);
  out.dual_estimate = r / beta;
  if (r != 0.0) add_adjoint(block.op, r / beta, out.gradient);
  return out;
}

double add_penalty_gradient(const ConstraintBlock& block, const SymMatrix& x, double beta,
                            double scale, SymMatrix& grad) {
  const double r = signed_residual(block, x);
  if (r != 0.0) add_adjoint(block.op, scale * (r / beta), grad);
  return r * r / (2.0 * beta);
}

std::uint64_t add_batch_penalty_gradient(const ConstraintSystem& sys, const SymMatrix& x,
                                         double beta, std::span<const std::uint64_t> batch,
                                         double scale, SymMatrix& grad) {
  require_beta(beta);
  for_each_weighted(sys.size(), batch, [&](std::size_t i, double mult) {
    add_penalty_gradient(sys.block(i), x, beta, scale * mult, grad);
  });
  return batch.size();
}

void add_batch_penalty_difference(const ConstraintSystem& sys, const SymMatrix& x_new,
                                  double beta_new, const SymMatrix& x_old, double beta_old,
                                  std::span<const std::uint64_t> batch, double scale,
                                  SymMatrix& grad) {
  require_beta(beta_new);
  require_beta(beta_old);
  for_each_weighted(sys.size(), batch, [&](std::size_t i, double mult) {
    const ConstraintBlock b = sys.block(i);
    const double coeff = signed_residual(b, x_new) / beta_new - signed_residual(b, x_old) / beta_old;
    if (coeff != 0.0) add_adjoint(b.op, scale * mult * coeff, grad);
  });
}

SymMatrix full_penalty_gradient(const ConstraintSystem& sys, const SymMatrix& x, double beta) {
  require_beta(beta);
  SymMatrix grad = SymMatrix::zeros(x.dim());
  const double scale = 1.0 / static_cast<double>(sys.size());
  for (std::size_t i = 0; i < sys.size(); ++i) add_penalty_gradient(sys.block(i), x, beta, scale, grad);
  return grad;
}

SmoothedObjective full_smoothed_objective(const ConstraintSystem& sys, const ObjectiveOracle& f,
                                          const SymMatrix& x, double beta) {
  require_beta(beta);
  if (sys.size() == 0) throw std::invalid_argument("full_smoothed_objective: empty system");
  SmoothedObjective out;
  out.gradient = f.gradient(x);
  const double scale = 1.0 / static_cast<double>(sys.size());
  double total = 0.0;
  for (std::size_t i = 0; i < sys.size(); ++i)
    total += add_penalty_gradient(sys.block(i), x, beta, scale, out.gradient);
  out.penalty = total * scale;
  out.value = f.value(x) + out.penalty;
  return out;
}

double squared_residual_sum(const ConstraintSystem& sys, const SymMatrix& x) {
  double total = 0.0;
  for (std::size_t i = 0; i < sys.size(); ++i) {
    const double r = signed_residual(sys.block(i), x);
    total += r * r;
  }
  return total;
}

std::vector<std::uint64_t> sample_batch(const ConstraintSystem& sys, std::uint64_t size,
                                        RngStream& rng) {
  if (size == 0) throw std::invalid_argument("sample_batch: batch size must be >= 1");
  if (sys.size() == 0) throw std::invalid_argument("sample_batch: empty constraint system");
  std::vector<std::uint64_t> out(size);
  for (auto& i : out) i = uniform_index(rng, sys.size());
  return out;
}

}  // namespace hsfw

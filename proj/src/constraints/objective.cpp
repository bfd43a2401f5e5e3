#include "hsfw/constraints/objective.hpp"

#include <stdexcept>

namespace hsfw {

LinearObjective::LinearObjective(SymMatrix c, double sigma_f) : c_(std::move(c)), sigma_f_(sigma_f) {
  if (sigma_f < 0.0) throw std::invalid_argument("LinearObjective: sigma_f must be >= 0");
}

double LinearObjective::value(const SymMatrix& x) const { return inner(c_, x); }

SymMatrix LinearObjective::sample_gradient(const SymMatrix&, RngStream& rng) const {
  if (sigma_f_ == 0.0) return c_;
  SymMatrix g = c_;
  const std::size_t d = c_.dim();
  std::normal_distribution<double> normal(0.0, sigma_f_ / static_cast<double>(d));
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = i; j < d; ++j) g.add(i, j, normal(rng));
  return g;
}

}  // namespace hsfw

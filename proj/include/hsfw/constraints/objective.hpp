#pragma once

#include "hsfw/core/rng.hpp"
#include "hsfw/core/sym_matrix.hpp"

namespace hsfw {

/// Oracle access to f(x) = E[f(x, xi)].
class ObjectiveOracle {
 public:
  virtual ~ObjectiveOracle() = default;
  virtual std::size_t dim() const = 0;
  virtual double value(const SymMatrix& x) const = 0;
  /// Exact gradient of f at x.
  virtual SymMatrix gradient(const SymMatrix& x) const = 0;
  /// One stochastic gradient sample; unbiased with variance <= sigma_f^2.
  virtual SymMatrix sample_gradient(const SymMatrix& x, RngStream& rng) const = 0;
  /// Lipschitz constant of the gradient.
  virtual double smoothness() const = 0;
  virtual double noise_level() const = 0;
};

/// f(X) = <C, X>. With sigma_f > 0 the sampled gradient is C + N, N a
/// symmetric Gaussian matrix with E||N||_F^2 = sigma_f^2.
class LinearObjective final : public ObjectiveOracle {
 public:
  explicit LinearObjective(SymMatrix c, double sigma_f = 0.0);

  std::size_t dim() const override { return c_.dim(); }
  double value(const SymMatrix& x) const override;
  SymMatrix gradient(const SymMatrix&) const override { return c_; }
  SymMatrix sample_gradient(const SymMatrix& x, RngStream& rng) const override;
  double smoothness() const override { return 0.0; }
  double noise_level() const override { return sigma_f_; }

  const SymMatrix& matrix() const { return c_; }

 private:
  SymMatrix c_;
  double sigma_f_;
};

}  // namespace hsfw

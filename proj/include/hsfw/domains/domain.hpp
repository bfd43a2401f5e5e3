#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <variant>
#include <vector>

#include "hsfw/core/rng.hpp"
#include "hsfw/core/sym_matrix.hpp"

namespace hsfw {

/// {X >= 0, tr(X) <= tau}, or tr(X) = tau when `equality` is set.
struct TraceBallPsd {
  double tau = 1.0;
  bool equality = false;
};

/// {x >= 0, sum(x) = radius} over vectors.
struct Simplex {
  double radius = 1.0;
};

/// [lo, hi]^d over vectors.
struct Box {
  double lo = 0.0;
  double hi = 1.0;
};

struct DomainSpec {
  std::variant<TraceBallPsd, Simplex, Box> set;
  std::size_t dim = 0;

  static DomainSpec trace_ball(std::size_t dim, double tau, bool equality = false);
  static DomainSpec simplex(std::size_t dim, double radius);
  static DomainSpec box(std::size_t dim, double lo, double hi);

  bool is_spectrahedron() const { return std::holds_alternative<TraceBallPsd>(set); }
  const TraceBallPsd& spectrahedron() const;
};

/// Upper bound on the Frobenius (or Euclidean) diameter.
double diameter_bound(const DomainSpec& spec);

/// Membership test: trace <= tau (1 + tol), lambda_min >= -tol * ||X||_F.
bool contains(const DomainSpec& spec, const SymMatrix& x, double tol = 1e-10);
bool contains(const DomainSpec& spec, std::span<const double> x, double tol = 1e-10);

struct LmoReport {
  SymMatrix extreme_point;
  double objective_value = 0.0;  // <extreme_point, G>
  double min_eigenvalue = 0.0;   // estimate of lambda_min(G)
  int eig_iterations = 0;
  bool converged = true;
};

/// Exact spectrahedron oracle through a full symmetric eigendecomposition.
/// Rejects G with asymmetry above 1e-12 ||G||_F.
LmoReport lmo_spectrahedron_exact(const SymMatrix& g, const DomainSpec& spec);

/// Matrix-free symmetric operator: out = G * in, both of length dim.
struct LinearOperator {
  std::size_t dim = 0;
  std::function<void(std::span<const double> in, std::span<double> out)> apply;
};

struct LanczosOptions {
  double tol = 1e-7;
  int max_iter = 0;      // 0 -> default_lanczos_iterations(d)
  int restarts = 1;      // fresh start vectors tried after a non-converged pass
};

/// ceil(10 sqrt(d) log d), clamped to [1, d].
int default_lanczos_iterations(std::size_t dim);

/// Lanczos with full reorthogonalization on the smallest eigenpair. The start
/// vector is a random unit vector from `rng`. `converged` is false when the
/// residual ||Gv - theta v|| never fell below tol * ||G|| (estimated).
LmoReport lmo_spectrahedron_lanczos(const LinearOperator& g, const DomainSpec& spec,
                                    const LanczosOptions& opts, RngStream& rng);
LmoReport lmo_spectrahedron_lanczos(const SymMatrix& g, const DomainSpec& spec,
                                    const LanczosOptions& opts, RngStream& rng);

struct LmoSettings {
  LanczosOptions lanczos;
  /// Dimensions up to this use the exact oracle.
  std::size_t exact_threshold = 64;
};

/// Dispatching spectrahedron oracle used by the solvers.
LmoReport lmo_spectrahedron(const SymMatrix& g, const DomainSpec& spec, const LmoSettings& settings,
                            RngStream& rng);

/// Vector-domain oracles.
std::vector<double> lmo_simplex(std::span<const double> g, const Simplex& s);
std::vector<double> lmo_box(std::span<const double> g, const Box& b);

}  // namespace hsfw

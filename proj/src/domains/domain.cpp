#include "hsfw/domains/domain.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <Eigen/Eigenvalues>

#include "hsfw/simd/kernels.hpp"

namespace hsfw {

DomainSpec DomainSpec::trace_ball(std::size_t dim, double tau, bool equality) {
  if (!(tau > 0.0)) throw std::invalid_argument("TraceBallPsd: tau must be positive");
  if (dim == 0) throw std::invalid_argument("DomainSpec: dim must be positive");
  return {TraceBallPsd{tau, equality}, dim};
}

DomainSpec DomainSpec::simplex(std::size_t dim, double radius) {
  if (!(radius > 0.0)) throw std::invalid_argument("Simplex: radius must be positive");
  if (dim == 0) throw std::invalid_argument("DomainSpec: dim must be positive");
  return {Simplex{radius}, dim};
}

DomainSpec DomainSpec::box(std::size_t dim, double lo, double hi) {
  if (!(lo <= hi)) throw std::invalid_argument("Box: lo must not exceed hi");
  if (dim == 0) throw std::invalid_argument("DomainSpec: dim must be positive");
  return {Box{lo, hi}, dim};
}

const TraceBallPsd& DomainSpec::spectrahedron() const {
  if (const auto* t = std::get_if<TraceBallPsd>(&set)) return *t;
  throw std::invalid_argument("domain is not a spectrahedron");
}

double diameter_bound(const DomainSpec& spec) {
  return std::visit(
      [&](const auto& s) -> double {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, TraceBallPsd>) {
          return std::sqrt(2.0) * s.tau;
        } else if constexpr (std::is_same_v<T, Simplex>) {
          return std::sqrt(2.0) * s.radius;
        } else {
          return (s.hi - s.lo) * std::sqrt(static_cast<double>(spec.dim));
        }
      },
      spec.set);
}

namespace {

Eigen::Map<const Eigen::MatrixXd> as_eigen(const SymMatrix& m) {
  return {m.data().data(), static_cast<Eigen::Index>(m.dim()), static_cast<Eigen::Index>(m.dim())};
}

double min_eigenvalue(const SymMatrix& x) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(as_eigen(x), Eigen::EigenvaluesOnly);
  return es.eigenvalues()(0);
}

}  // namespace

bool contains(const DomainSpec& spec, const SymMatrix& x, double tol) {
  const auto& s = spec.spectrahedron();
  if (x.dim() != spec.dim) return false;
  const double tr = x.trace();
  if (tr > s.tau * (1.0 + tol)) return false;
  if (s.equality && tr < s.tau * (1.0 - tol)) return false;
  if (x.max_asymmetry() != 0.0) return false;
  return min_eigenvalue(x) >= -tol * std::max(x.frobenius_norm(), 1e-300);
}

bool contains(const DomainSpec& spec, std::span<const double> x, double tol) {
  if (x.size() != spec.dim) return false;
  if (const auto* s = std::get_if<Simplex>(&spec.set)) {
    double total = 0.0;
    for (double v : x) {
      if (v < -tol * s->radius) return false;
      total += v;
    }
    return std::abs(total - s->radius) <= tol * s->radius * static_cast<double>(x.size());
  }
  if (const auto* b = std::get_if<Box>(&spec.set)) {
    const double slack = tol * std::max(1.0, b->hi - b->lo);
    return std::all_of(x.begin(), x.end(),
                       [&](double v) { return v >= b->lo - slack && v <= b->hi + slack; });
  }
  throw std::invalid_argument("vector membership requested for a matrix domain");
}

namespace {

LmoReport finish_spectrahedron(const TraceBallPsd& s, std::span<const double> v, double lambda,
                               double objective_if_rank_one, int iterations, bool converged) {
  LmoReport r;
  r.min_eigenvalue = lambda;
  r.eig_iterations = iterations;
  r.converged = converged;
  if (s.equality || lambda < 0.0) {
    r.extreme_point = SymMatrix::outer(v, s.tau);
    r.objective_value = objective_if_rank_one;
  } else {
    r.extreme_point = SymMatrix::zeros(v.size());
    r.objective_value = 0.0;
  }
  return r;
}

}  // namespace

LmoReport lmo_spectrahedron_exact(const SymMatrix& g, const DomainSpec& spec) {
  const auto& s = spec.spectrahedron();
  if (g.dim() != spec.dim) throw std::invalid_argument("lmo: gradient dimension mismatch");
  if (g.max_asymmetry() > 1e-12 * g.frobenius_norm())
    throw std::invalid_argument("lmo: gradient is not symmetric");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(as_eigen(g));
  if (es.info() != Eigen::Success) throw std::runtime_error("lmo: eigendecomposition failed");
  const double lambda = es.eigenvalues()(0);
  const Eigen::VectorXd v = es.eigenvectors().col(0);
  return finish_spectrahedron(s, {v.data(), static_cast<std::size_t>(v.size())}, lambda,
                              s.tau * lambda, 1, true);
}

int default_lanczos_iterations(std::size_t dim) {
  const double d = static_cast<double>(dim);
  const double raw = dim > 1 ? std::ceil(10.0 * std::sqrt(d) * std::log(d)) : 1.0;
  return static_cast<int>(std::clamp(raw, 1.0, d));
}

namespace {

struct LanczosPass {
  std::vector<double> vec;
  double ritz = 0.0;
  double residual = 0.0;
  double norm_estimate = 0.0;
  int iterations = 0;
  bool converged = false;
};

std::vector<double> random_unit(std::size_t n, RngStream& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<double> v(n);
  for (auto& x : v) x = normal(rng);
  const double nrm = std::sqrt(simd::dot(v, v));
  simd::scale(1.0 / nrm, v);
  return v;
}

// Two rounds of classical Gram-Schmidt against the stored basis.
void reorthogonalize(std::vector<double>& w, const std::vector<std::vector<double>>& basis) {
  for (int round = 0; round < 2; ++round)
    for (const auto& q : basis) simd::axpy(-simd::dot(q, w), q, w);
}

LanczosPass lanczos_pass(const LinearOperator& g, int max_iter, double tol, RngStream& rng) {
  const std::size_t n = g.dim;
  std::vector<std::vector<double>> basis;
  std::vector<double> alpha;
  std::vector<double> beta;  // beta[j] couples q_j and q_{j+1}
  std::vector<double> q = random_unit(n, rng);
  std::vector<double> w(n);
  LanczosPass out;
  Eigen::VectorXd s_min;

  for (int j = 0; j < max_iter; ++j) {
    basis.push_back(q);
    g.apply(basis.back(), w);
    const double a = simd::dot(basis.back(), w);
    alpha.push_back(a);
    simd::axpy(-a, basis.back(), w);
    if (j > 0) simd::axpy(-beta.back(), basis[basis.size() - 2], w);
    reorthogonalize(w, basis);
    double b = std::sqrt(simd::dot(w, w));

    const int m = j + 1;
    const bool check = m <= 50 || m % 5 == 0 || m == max_iter || m == static_cast<int>(n);
    if (check) {
      Eigen::VectorXd diag = Eigen::Map<const Eigen::VectorXd>(alpha.data(), m);
      Eigen::VectorXd sub = Eigen::VectorXd::Zero(std::max(m - 1, 0));
      for (int i = 0; i + 1 < m; ++i) sub(i) = beta[i];
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> tri;
      tri.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);
      const auto& evals = tri.eigenvalues();
      out.ritz = evals(0);
      out.norm_estimate = std::max(std::abs(evals(0)), std::abs(evals(m - 1)));
      s_min = tri.eigenvectors().col(0);
      out.residual = b * std::abs(s_min(m - 1));
      out.iterations = m;
      if (out.residual <= tol * out.norm_estimate || m == static_cast<int>(n)) {
        out.converged = out.residual <= tol * out.norm_estimate ||
                        (m == static_cast<int>(n) && b <= 1e-8 * std::max(out.norm_estimate, 1.0));
        break;
      }
    }

    // Invariant subspace: continue the Krylov sequence from a fresh direction.
    if (b <= 1e-12 * std::max(out.norm_estimate, std::abs(a))) {
      w = random_unit(n, rng);
      reorthogonalize(w, basis);
      const double nw = std::sqrt(simd::dot(w, w));
      simd::scale(1.0 / nw, w);
      b = 0.0;
      beta.push_back(0.0);
      q = w;
    } else {
      beta.push_back(b);
      q = w;
      simd::scale(1.0 / b, q);
    }
  }

  out.vec.assign(n, 0.0);
  for (int i = 0; i < s_min.size(); ++i) simd::axpy(s_min(i), basis[i], out.vec);
  const double nrm = std::sqrt(simd::dot(out.vec, out.vec));
  simd::scale(1.0 / nrm, out.vec);
  return out;
}

}  // namespace

LmoReport lmo_spectrahedron_lanczos(const LinearOperator& g, const DomainSpec& spec,
                                    const LanczosOptions& opts, RngStream& rng) {
  const auto& s = spec.spectrahedron();
  if (g.dim != spec.dim) throw std::invalid_argument("lmo: operator dimension mismatch");
  if (!(opts.tol > 0.0)) throw std::invalid_argument("lmo: Lanczos tolerance must be positive");
  const int max_iter = std::min<int>(opts.max_iter > 0 ? opts.max_iter : default_lanczos_iterations(g.dim),
                                     static_cast<int>(g.dim));

  LanczosPass best = lanczos_pass(g, max_iter, opts.tol, rng);
  int total = best.iterations;
  for (int r = 0; r < opts.restarts && !best.converged; ++r) {
    LanczosPass again = lanczos_pass(g, max_iter, opts.tol, rng);
    total += again.iterations;
    if (again.converged || again.ritz < best.ritz) best = std::move(again);
  }

  std::vector<double> gv(g.dim);
  g.apply(best.vec, gv);
  const double rayleigh = simd::dot(best.vec, gv);
  return finish_spectrahedron(s, best.vec, rayleigh, s.tau * rayleigh, total, best.converged);
}

LmoReport lmo_spectrahedron_lanczos(const SymMatrix& g, const DomainSpec& spec,
                                    const LanczosOptions& opts, RngStream& rng) {
  if (g.max_asymmetry() > 1e-12 * g.frobenius_norm())
    throw std::invalid_argument("lmo: gradient is not symmetric");
  LinearOperator op{g.dim(), [&g](std::span<const double> in, std::span<double> out) {
                      simd::kernels().symv(g.data().data(), in.data(), out.data(), g.dim());
                    }};
  return lmo_spectrahedron_lanczos(op, spec, opts, rng);
}

LmoReport lmo_spectrahedron(const SymMatrix& g, const DomainSpec& spec, const LmoSettings& settings,
                            RngStream& rng) {
  if (g.dim() <= settings.exact_threshold) return lmo_spectrahedron_exact(g, spec);
  return lmo_spectrahedron_lanczos(g, spec, settings.lanczos, rng);
}

std::vector<double> lmo_simplex(std::span<const double> g, const Simplex& s) {
  if (g.empty()) throw std::invalid_argument("lmo_simplex: empty gradient");
  std::vector<double> out(g.size(), 0.0);
  const auto it = std::min_element(g.begin(), g.end());
  out[static_cast<std::size_t>(it - g.begin())] = s.radius;
  return out;
}

std::vector<double> lmo_box(std::span<const double> g, const Box& b) {
  std::vector<double> out(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) out[i] = g[i] > 0.0 ? b.lo : b.hi;
  return out;
}

}  // namespace hsfw

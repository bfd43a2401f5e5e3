#include <cmath>
#include <random>
#include <stdexcept>

#include <Eigen/QR>

#include "hsfw/problems/problems.hpp"
#include "hsfw/simd/kernels.hpp"

namespace hsfw {

namespace {

void fill_uniform_symmetric(std::span<double> out, std::size_t d, RngStream& rng) {
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = i; j < d; ++j) {
      const double v = u01(rng);
      out[i * d + j] = v;
      out[j * d + i] = v;
    }
}

SymMatrix planted_point(std::size_t d, RngStream& rng) {
  const std::size_t r = (d + 3) / 4;
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<std::vector<double>> basis;
  while (basis.size() < r) {
    std::vector<double> v(d);
    for (auto& x : v) x = normal(rng);
    for (int round = 0; round < 2; ++round)
      for (const auto& q : basis) simd::axpy(-simd::dot(q, v), q, v);
    const double nrm = std::sqrt(simd::dot(v, v));
    if (nrm < 1e-8) continue;
    simd::scale(1.0 / nrm, v);
    basis.push_back(std::move(v));
  }
  const double weight = 1.0 / (2.0 * static_cast<double>(d) * static_cast<double>(r));
  SymMatrix x = SymMatrix::zeros(d);
  for (const auto& v : basis) x += SymMatrix::outer(v, weight);
  return x;
}

}  // namespace

RankReport equality_system_rank(const ConstraintSystem& sys) {
  const std::size_t d = sys.dim();
  RankReport report;
  report.full_rank = d * (d + 1) / 2;
  Eigen::MatrixXd m(static_cast<Eigen::Index>(sys.size()), static_cast<Eigen::Index>(report.full_rank));
  SymMatrix a(d);
  for (std::size_t i = 0; i < sys.size(); ++i) {
    const ConstraintBlock b = sys.block(i);
    if (!std::holds_alternative<PointTarget>(b.target.variant())) report.all_equalities = false;
    a.fill(0.0);
    add_adjoint(b.op, 1.0, a);
    Eigen::Index col = 0;
    for (std::size_t p = 0; p < d; ++p)
      for (std::size_t q = p; q < d; ++q)
        m(static_cast<Eigen::Index>(i), col++) = p == q ? a(p, q) : std::sqrt(2.0) * a(p, q);
  }
  if (sys.size() == 0) return report;
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(m);
  qr.setThreshold(1e-10);
  report.rank = static_cast<std::size_t>(qr.rank());
  return report;
}

ProblemInstance build_synthetic_sdp(std::size_t d, std::size_t n, std::uint64_t seed, double sigma_f) {
  if (d < 2) throw std::invalid_argument("build_synthetic_sdp: d must be >= 2");
  if (n < 1) throw std::invalid_argument("build_synthetic_sdp: n must be >= 1");
  RngStream rng = make_stream(seed, StreamTag::Problem);

  std::vector<double> c(d * d);
  fill_uniform_symmetric(c, d, rng);
  SymMatrix cost = SymMatrix::from_upper(d, c);

  std::vector<double> rows(n * d * d);
  for (std::size_t i = 0; i < n; ++i) fill_uniform_symmetric({rows.data() + i * d * d, d * d}, d, rng);

  SymMatrix x_star = planted_point(d, rng);
  std::vector<TargetSet> targets;
  targets.reserve(n);
  for (std::size_t i = 0; i < n; ++i)
    targets.push_back(TargetSet::point(simd::dot({rows.data() + i * d * d, d * d}, x_star.data())));

  ProblemInstance p{DomainSpec::trace_ball(d, 1.0 / static_cast<double>(d)),
                    ConstraintSystem::from_rows(d, std::move(rows), std::move(targets)),
                    std::make_shared<LinearObjective>(cost, sigma_f),
                    {}};
  p.meta.name = "synthetic";
  p.meta.dim = d;
  p.meta.constraint_count = n;
  if (n > d * (d + 1) / 2 && equality_system_rank(p.constraints).unique())
    p.meta.f_star = inner(cost, x_star);
  p.meta.planted = std::move(x_star);
  return p;
}

}  // namespace hsfw

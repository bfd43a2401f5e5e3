#include <doctest.h>

#include <cmath>
#include <random>

#include "helpers.hpp"
#include "hsfw/constraints/penalty.hpp"
#include "hsfw/diagnostics/diagnostics.hpp"

using namespace hsfw;

TEST_CASE("feasibility norm examples") {
  const std::size_t d = 2;
  const ConstraintSystem sys = ConstraintSystem::from_blocks(
      d, {{EntryOp{0, 0}, TargetSet::point(1.0)}, {EntryOp{1, 1}, TargetSet::point(-1.0)}});
  CHECK(feasibility_norm(sys, SymMatrix::zeros(2)) == doctest::Approx(std::sqrt(2.0)));
  CHECK(feasibility_norm(sys, SymMatrix::diagonal(std::vector<double>{1.0, -1.0})) == 0.0);
  // a sum over blocks, not an average: duplicating a block scales by sqrt(2)
  const ConstraintSystem twice = ConstraintSystem::from_blocks(
      d, {{EntryOp{0, 0}, TargetSet::point(1.0)}, {EntryOp{0, 0}, TargetSet::point(1.0)}});
  CHECK(feasibility_norm(twice, SymMatrix::zeros(2)) == doctest::Approx(std::sqrt(2.0)));
}

TEST_CASE("log-log rate fit") {
  std::vector<double> k, inv, flat;
  for (int i = 1; i <= 100; ++i) {
    k.push_back(i);
    inv.push_back(3.0 / i);
    flat.push_back(2.5);
  }
  const RateFit a = fit_loglog_rate(k, inv, 1, 100);
  CHECK(a.slope == doctest::Approx(-1.0).epsilon(1e-12));
  CHECK(a.intercept == doctest::Approx(std::log(3.0)));
  CHECK(a.r_squared == doctest::Approx(1.0));
  CHECK(a.used == 100);

  const RateFit b = fit_loglog_rate(k, flat, 1, 100);
  CHECK(std::abs(b.slope) < 1e-12);
  CHECK(b.r_squared == 1.0);

  std::mt19937_64 rng(3);
  std::normal_distribution<double> noise(0.0, 0.05);
  std::vector<double> kk, v;
  for (int i = 1; i <= 10000; i += 7) {
    kk.push_back(i);
    v.push_back(std::pow(i, -0.5) * std::exp(noise(rng)));
  }
  const RateFit c = fit_loglog_rate(kk, v, 10, 10000);
  CHECK(c.slope >= -0.55);
  CHECK(c.slope <= -0.45);

  std::vector<double> withzero = inv;
  withzero[50] = 0.0;
  withzero[60] = NAN;
  const RateFit z = fit_loglog_rate(k, withzero, 1, 100);
  CHECK(z.excluded == 2);
  CHECK(z.used == 98);

  CHECK(fit_loglog_rate(k, inv, 50, 70).used == 21);
  CHECK_THROWS(fit_loglog_rate(k, inv, 1, 9));
  CHECK_THROWS(fit_loglog_rate(std::span<const double>(k).first(5), std::span<const double>(inv).first(4), 1, 9));
}

TEST_CASE("rate fit on a trace column") {
  RunTrace t;
  for (std::uint64_t g = 0; g <= 40; ++g) {
    TraceRow r;
    r.global_iter = g;
    r.feasibility = g == 0 ? 1.0 : 1.0 / std::sqrt(double(g));
    t.rows.push_back(r);
  }
  CHECK(fit_loglog_rate(t, "feasibility", 1, 40).slope == doctest::Approx(-0.5).epsilon(1e-12));
  CHECK_THROWS(fit_loglog_rate(t, "feasibility", 1000, 2000));
  CHECK_THROWS(fit_loglog_rate(t, "nope", 1, 40));
}

TEST_CASE("recursion bound examples") {
  CHECK(recursion_bound_check(1.0, 2.0, 0.0, 1.0, 2.0, 1.0, 10000));
  // the two proof instantiations: (alpha, beta, c, k0) = (1, 3/2, 2, 0) and (2/3, 1, 3/2, 5)
  CHECK(recursion_bound_check(1.0, 2.0, 1.0, 1.0, 1.5, 0.0, 100000));
  CHECK(recursion_bound_check(3.0, 1.5, 5.0, 2.0 / 3.0, 1.0, 5.0, 100000));
  CHECK_THROWS(recursion_bound_check(1.0, 2.0, 1.0, 1.0, 2.5, 1.0, 10));
  CHECK_THROWS(recursion_bound_check(1.0, 2.0, 1.0, 0.5, 1.0, 1.0, 10));
  CHECK_THROWS(recursion_bound_check(1.0, 1.0, 1.0, 1.0, 2.0, 1.0, 10));
  CHECK_THROWS(recursion_bound_check(1.0, 2.0, -1.0, 1.0, 2.0, 1.0, 10));
}

TEST_CASE("recursion bound: random parameter sweep") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int rep = 0; rep < 300; ++rep) {
    const bool one = rep % 2 == 0;
    const double alpha = one ? 1.0 : 2.0 / 3.0;
    const double beta = one ? 1.0 + 1e-3 + u(rng) * (1.0 - 1e-3) : 1.0;
    const double k0 = 1.0 + std::floor(u(rng) * 20.0);
    // the contraction factor stays in [0, 1) when c <= (k0+1)^alpha
    const double cmax = std::pow(k0 + 1.0, alpha);
    const double c = 1.0 + 1e-3 + u(rng) * (cmax - 1.0 - 1e-3);
    const double b = 10.0 * u(rng);
    const double phi0 = 10.0 * u(rng);
    REQUIRE(recursion_bound_check(phi0, c, b, alpha, beta, k0, 20000));
  }
}

TEST_CASE("smoothed gap inequality check") {
  RunTrace t;
  t.f_star = 1.0;
  TraceRow r;
  r.objective = 1.2;
  r.feasibility = 0.0;
  r.smoothed_gap_upper = 0.2;
  t.rows.push_back(r);
  CHECK(smoothed_gap_inequality_check(t, 1.0));
  t.rows[0].smoothed_gap_upper = 0.1;
  CHECK_FALSE(smoothed_gap_inequality_check(t, 1.0));
  t.rows[0].feasibility = 0.5;  // infeasible rows are skipped
  CHECK(smoothed_gap_inequality_check(t, 1.0));
  RunTrace none;
  CHECK_THROWS(smoothed_gap_inequality_check(none, 0.0));

  const ProblemInstance p = build_synthetic_sdp(4, 20, 2);
  SolverConfig c;
  c.max_iterations = 200;
  const RunTrace run = run_h1sfw(p, c);
  CHECK(smoothed_gap_inequality_check(run, *p.meta.f_star, INFINITY));
}

TEST_CASE("exact batch variance matches brute-force enumeration") {
  const ProblemInstance p = build_synthetic_sdp(3, 3, 4);
  std::mt19937_64 rng(1);
  const SymMatrix x = testing::random_symmetric(3, rng, 0.3);
  const double beta = 0.4;
  const SymMatrix exact = full_smoothed_objective(p.constraints, *p.objective, x, beta).gradient;
  std::vector<SymMatrix> g;
  for (std::size_t i = 0; i < 3; ++i) {
    SymMatrix gi = p.cost();
    gi += smoothed_penalty(p.constraints.block(i), x, beta).gradient;
    g.push_back(gi);
  }
  double brute = 0.0;  // all 9 ordered batches of size 2
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j) {
      SymMatrix m = g[i];
      m += g[j];
      m *= 0.5;
      m -= exact;
      brute += m.frobenius_norm() * m.frobenius_norm() / 9.0;
    }
  CHECK(batch_estimate_variance(p, x, beta, 2) == doctest::Approx(brute).epsilon(1e-10));
  CHECK_THROWS(batch_estimate_variance(p, x, beta, 0));
}

TEST_CASE("variance probe") {
  const ProblemInstance p = build_synthetic_sdp(6, 30, 5);
  SolverConfig c;
  c.algorithm = Algorithm::HSPIDERFW;
  c.beta0 = 1.0;
  c.max_iterations = 1;
  const std::vector<std::uint64_t> ks{1, 2, 3, 4, 7, 8, 31, 32, 63};
  const VarianceProbe v = variance_probe(p, c, ks, 6);
  REQUIRE(v.checkpoints.size() == ks.size());
  const EnvelopeInputs in = envelope_inputs(p, c.beta0);
  const double c1 = spider_variance_constant(in);
  for (const auto& cp : v.checkpoints) {
    const bool epoch_start = (cp.global_iter & (cp.global_iter - 1)) == 0;
    if (epoch_start) CHECK(cp.mse <= 1e-20);
    CHECK(cp.mse <= spider_variance_envelope(c1, cp.global_iter));
  }

  // one block: every batch is the full set
  const ProblemInstance one = build_synthetic_sdp(3, 1, 6);
  for (const auto& cp : variance_probe(one, c, ks, 2).checkpoints) CHECK(cp.mse <= 1e-20);

  // momentum estimator error decays over the run
  SolverConfig m;
  m.beta0 = 1.0;
  const std::vector<std::uint64_t> mk{10, 100, 3000};
  const VarianceProbe h = variance_probe(p, m, mk, 8);
  CHECK(h.checkpoints[2].mse < h.checkpoints[0].mse);
  const double e0 = batch_estimate_variance(p, SymMatrix::zeros(6), m.beta0, 1);
  const double mc = momentum_variance_constant(envelope_inputs(p, m.beta0), e0);
  for (const auto& cp : h.checkpoints) CHECK(cp.mse <= momentum_variance_envelope(mc, cp.global_iter));

  SolverConfig e = c;
  e.mode = SamplingMode::Expectation;
  CHECK_THROWS(variance_probe(p, e, ks, 4));
  CHECK_THROWS(variance_probe(p, c, ks, 1));
}

TEST_CASE("envelope constants") {
  EnvelopeInputs in{0.0, 0.0, 2.0, 1.0, 0.5};
  CHECK(spider_variance_constant(in) == doctest::Approx(2.0 * 98.0 * 4.0 / 0.25));
  CHECK(spider_variance_envelope(10.0, 4) == doctest::Approx(2.0));
  in.sigma_f = 1.0;
  in.lf = 0.0;
  const double tail = 2.0 * (18.0 + 522.0 * 4.0 / 0.25);
  CHECK(momentum_variance_constant(in, 0.0) == doctest::Approx(tail));
  CHECK(momentum_variance_constant(in, 1e9) == doctest::Approx(std::cbrt(6.0) * 1e9));
  CHECK(momentum_variance_envelope(3.0, 3) == doctest::Approx(1.5));

  const ProblemInstance p = build_synthetic_sdp(5, 10, 1, 0.2);
  const EnvelopeInputs e = envelope_inputs(p, 0.3);
  CHECK(e.sigma_f == 0.2);
  CHECK(e.lf == 0.0);
  CHECK(e.diameter == doctest::Approx(std::sqrt(2.0) / 5.0));
  CHECK(e.la == p.constraints.la_bound());
  CHECK(e.beta0 == 0.3);
}

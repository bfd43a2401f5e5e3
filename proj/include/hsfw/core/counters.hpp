#pragma once

#include <cstdint>

namespace hsfw {

/// Oracle call accounting for one run.
///
/// sfo counts stochastic-gradient evaluations at indices drawn from the RNG;
/// ifo counts every component-gradient evaluation, sampled or enumerated; lmo
/// counts linear minimization calls, one per iteration.
struct OracleCounters {
  std::uint64_t sfo_calls = 0;
  std::uint64_t ifo_calls = 0;
  std::uint64_t lmo_calls = 0;

  void charge_sampled(std::uint64_t evaluations) {
    sfo_calls += evaluations;
    ifo_calls += evaluations;
  }
  void charge_enumerated(std::uint64_t evaluations) { ifo_calls += evaluations; }
  void charge_lmo() { ++lmo_calls; }
};

}  // namespace hsfw

#pragma once

#include <cstdint>
#include <random>

namespace hsfw {

using RngStream = std::mt19937_64;

/// Independent named substreams of one run seed, so that e.g. constraint
/// sampling is unaffected by how many Lanczos start vectors were drawn.
enum class StreamTag : std::uint32_t {
  Sampling = 1,
  Lmo = 2,
  ObjectiveNoise = 3,
  Problem = 4,
};

inline RngStream make_stream(std::uint64_t seed, StreamTag tag) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(tag)};
  return RngStream(seq);
}

/// Uniform index in [0, n) from exactly one 64-bit draw (multiply-shift; the
/// bias is at most n / 2^64).
inline std::uint64_t uniform_index(RngStream& rng, std::uint64_t n) {
  const unsigned __int128 wide = static_cast<unsigned __int128>(rng()) * n;
  return static_cast<std::uint64_t>(wide >> 64);
}

}  // namespace hsfw

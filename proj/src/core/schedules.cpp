#include "hsfw/core/schedules.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <stdexcept>
#include <string>

namespace hsfw {

std::string_view algorithm_name(Algorithm a) {
  switch (a) {
    case Algorithm::H1SFW: return "H1SFW";
    case Algorithm::HSPIDERFW: return "HSPIDERFW";
    case Algorithm::SHCGM: return "SHCGM";
    case Algorithm::HCGM: return "HCGM";
  }
  return "unknown";
}

Algorithm parse_algorithm(std::string_view name) {
  std::string key;
  for (char c : name)
    if (c != '-' && c != '_') key.push_back(static_cast<char>(std::toupper(static_cast<unsigned char>(c))));
  for (auto a : {Algorithm::H1SFW, Algorithm::HSPIDERFW, Algorithm::SHCGM, Algorithm::HCGM})
    if (key == algorithm_name(a)) return a;
  throw std::invalid_argument("unknown algorithm '" + std::string(name) + "'");
}

namespace {

void require_beta0(double beta0) {
  if (!(beta0 > 0.0) || !std::isfinite(beta0))
    throw std::invalid_argument("beta0 must be a positive finite number");
}

std::uint64_t epoch_length(std::uint64_t t) {
  if (t == 0) throw std::invalid_argument("epoch index t must be >= 1");
  if (t > 63) throw std::overflow_error("epoch index too large: K_t = 2^(t-1) overflows");
  return std::uint64_t{1} << (t - 1);
}

}  // namespace

MomentumStep h1sfw_schedule(std::uint64_t k, double beta0) {
  if (k == 0) throw std::invalid_argument("h1sfw_schedule: k must be >= 1");
  require_beta0(beta0);
  const double kd = static_cast<double>(k);
  return {3.0 / std::pow(kd + 5.0, 2.0 / 3.0), 2.0 / (kd + 1.0),
          beta0 / std::pow(kd + 1.0, 1.0 / 6.0)};
}

SpiderStep hspiderfw_schedule(std::uint64_t t, std::uint64_t k, double beta0) {
  const std::uint64_t big_k = epoch_length(t);
  if (k == 0 || k > big_k + 1)
    throw std::invalid_argument("hspiderfw_schedule: inner index k outside [1, K_t + 1]");
  require_beta0(beta0);
  const double kappa = static_cast<double>(big_k + k);
  return {2.0 / kappa, beta0 / std::sqrt(kappa), big_k, big_k};
}

std::uint64_t outer_batch_size(std::uint64_t t, double beta0) {
  const std::uint64_t big_k = epoch_length(t);
  require_beta0(beta0);
  const double kd = static_cast<double>(big_k);
  const double count = std::ceil(2.0 * kd * (kd + 1.0) / (beta0 * beta0));
  if (!std::isfinite(count) || count >= 9.2e18)
    throw std::overflow_error("outer_batch_size: |Q_t| overflows a 64-bit count (t=" +
                              std::to_string(t) + ")");
  return std::max<std::uint64_t>(1, static_cast<std::uint64_t>(count));
}

std::uint64_t global_index(std::uint64_t t, std::uint64_t k) { return epoch_length(t) + k; }

std::uint64_t iterations_through(std::uint64_t t, std::uint64_t k) {
  return global_index(t, k) - 1;
}

MomentumStep BaselineSchedule::at(std::uint64_t k, double beta0) const {
  if (k == 0) throw std::invalid_argument("baseline schedule: k must be >= 1");
  require_beta0(beta0);
  const double kd = static_cast<double>(k);
  const double rho = std::min(1.0, rho_scale / std::pow(kd + rho_offset, rho_exponent));
  const double gamma = std::min(1.0, gamma_scale / (kd + gamma_offset));
  return {rho, gamma, beta0 / std::pow(kd + beta_offset, beta_exponent)};
}

}  // namespace hsfw

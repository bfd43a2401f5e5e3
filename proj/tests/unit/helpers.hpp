#pragma once

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "hsfw/core/sym_matrix.hpp"

namespace testing {

inline hsfw::SymMatrix random_symmetric(std::size_t d, std::mt19937_64& rng, double scale = 1.0) {
  std::normal_distribution<double> n(0.0, scale);
  hsfw::SymMatrix m(d);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = i; j < d; ++j) m.set(i, j, n(rng));
  return m;
}

inline std::vector<double> random_unit(std::size_t d, std::mt19937_64& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  std::vector<double> v(d);
  double s = 0.0;
  for (auto& x : v) {
    x = n(rng);
    s += x * x;
  }
  for (auto& x : v) x /= std::sqrt(s);
  return v;
}

/// Cyclic Jacobi eigenvalues of a symmetric matrix, ascending. Deliberately
/// independent of the library's eigensolvers.
inline std::vector<double> jacobi_eigenvalues(const hsfw::SymMatrix& m) {
  const std::size_t d = m.dim();
  std::vector<double> a(m.data().begin(), m.data().end());
  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (std::size_t p = 0; p < d; ++p)
      for (std::size_t q = p + 1; q < d; ++q) off += a[p * d + q] * a[p * d + q];
    if (off < 1e-30) break;
    for (std::size_t p = 0; p < d; ++p)
      for (std::size_t q = p + 1; q < d; ++q) {
        const double apq = a[p * d + q];
        if (std::abs(apq) < 1e-300) continue;
        const double theta = (a[q * d + q] - a[p * d + p]) / (2.0 * apq);
        const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0), s = t * c;
        for (std::size_t k = 0; k < d; ++k) {
          const double akp = a[k * d + p], akq = a[k * d + q];
          a[k * d + p] = c * akp - s * akq;
          a[k * d + q] = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < d; ++k) {
          const double apk = a[p * d + k], aqk = a[q * d + k];
          a[p * d + k] = c * apk - s * aqk;
          a[q * d + k] = s * apk + c * aqk;
        }
      }
  }
  std::vector<double> ev(d);
  for (std::size_t i = 0; i < d; ++i) ev[i] = a[i * d + i];
  std::sort(ev.begin(), ev.end());
  return ev;
}

/// Random member of {X >= 0, tr X <= tau}: a convex combination of rank-one
/// extreme points and the origin.
inline hsfw::SymMatrix random_spectrahedron_point(std::size_t d, double tau, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const int terms = 1 + static_cast<int>(rng() % 4);
  std::vector<double> w(terms + 1);
  double s = 0.0;
  for (auto& x : w) s += (x = u(rng));
  hsfw::SymMatrix x(d);
  for (int t = 0; t < terms; ++t) x += hsfw::SymMatrix::outer(random_unit(d, rng), tau * w[t] / s);
  return x;
}

}  // namespace testing

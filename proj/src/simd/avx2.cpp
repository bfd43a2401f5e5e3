// Compiled with -mavx2 only; nothing here may be called unless the CPU
// reports AVX2 (see dispatch.cpp).
#include <immintrin.h>

#include "hsfw/simd/kernels.hpp"

namespace hsfw::simd {
namespace {

inline double hsum(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d s = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

double dot_avx2(const double* x, const double* y, std::size_t n) {
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    acc0 = _mm256_add_pd(acc0, _mm256_mul_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i)));
    acc1 = _mm256_add_pd(acc1,
                         _mm256_mul_pd(_mm256_loadu_pd(x + i + 4), _mm256_loadu_pd(y + i + 4)));
  }
  for (; i + 4 <= n; i += 4)
    acc0 = _mm256_add_pd(acc0, _mm256_mul_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i)));
  double acc = hsum(_mm256_add_pd(acc0, acc1));
  for (; i < n; ++i) acc += x[i] * y[i];
  return acc;
}

double sum_avx2(const double* x, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) acc = _mm256_add_pd(acc, _mm256_loadu_pd(x + i));
  double s = hsum(acc);
  for (; i < n; ++i) s += x[i];
  return s;
}

void axpy_avx2(double a, const double* x, double* y, std::size_t n) {
  const __m256d va = _mm256_set1_pd(a);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d prod = _mm256_mul_pd(va, _mm256_loadu_pd(x + i));
    _mm256_storeu_pd(y + i, _mm256_add_pd(_mm256_loadu_pd(y + i), prod));
  }
  for (; i < n; ++i) y[i] += a * x[i];
}

void lerp_avx2(double g, const double* w, double* x, std::size_t n) {
  const double keep = 1.0 - g;
  const __m256d vk = _mm256_set1_pd(keep);
  const __m256d vg = _mm256_set1_pd(g);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d a = _mm256_mul_pd(vk, _mm256_loadu_pd(x + i));
    const __m256d b = _mm256_mul_pd(vg, _mm256_loadu_pd(w + i));
    _mm256_storeu_pd(x + i, _mm256_add_pd(a, b));
  }
  for (; i < n; ++i) x[i] = keep * x[i] + g * w[i];
}

void scale_avx2(double a, double* x, std::size_t n) {
  const __m256d va = _mm256_set1_pd(a);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) _mm256_storeu_pd(x + i, _mm256_mul_pd(va, _mm256_loadu_pd(x + i)));
  for (; i < n; ++i) x[i] *= a;
}

void outer_avx2(double s, const double* v, double* out, std::size_t n) {
  const __m256d vs = _mm256_set1_pd(s);
  for (std::size_t r = 0; r < n; ++r) {
    const double vr = v[r];
    const __m256d vvr = _mm256_set1_pd(vr);
    double* row = out + r * n;
    std::size_t j = 0;
    for (; j + 4 <= n; j += 4)
      _mm256_storeu_pd(row + j, _mm256_mul_pd(vs, _mm256_mul_pd(vvr, _mm256_loadu_pd(v + j))));
    for (; j < n; ++j) row[j] = s * (vr * v[j]);
  }
}

void symv_avx2(const double* a, const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] = dot_avx2(a + i * n, x, n);
}

}  // namespace

const KernelTable& avx2_kernels() {
  static const KernelTable table{Isa::Avx2, dot_avx2,   sum_avx2,   axpy_avx2,
                                 lerp_avx2, scale_avx2, outer_avx2, symv_avx2};
  return table;
}

}  // namespace hsfw::simd

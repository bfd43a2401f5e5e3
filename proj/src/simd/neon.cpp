// AArch64 only. Float64 NEON lanes are 2 wide.
#include <arm_neon.h>

#include "hsfw/simd/kernels.hpp"

namespace hsfw::simd {
namespace {

double dot_neon(const double* x, const double* y, std::size_t n) {
  float64x2_t acc0 = vdupq_n_f64(0.0);
  float64x2_t acc1 = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    acc0 = vaddq_f64(acc0, vmulq_f64(vld1q_f64(x + i), vld1q_f64(y + i)));
    acc1 = vaddq_f64(acc1, vmulq_f64(vld1q_f64(x + i + 2), vld1q_f64(y + i + 2)));
  }
  double acc = vaddvq_f64(vaddq_f64(acc0, acc1));
  for (; i < n; ++i) acc += x[i] * y[i];
  return acc;
}

double sum_neon(const double* x, std::size_t n) {
  float64x2_t acc = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) acc = vaddq_f64(acc, vld1q_f64(x + i));
  double s = vaddvq_f64(acc);
  for (; i < n; ++i) s += x[i];
  return s;
}

void axpy_neon(double a, const double* x, double* y, std::size_t n) {
  const float64x2_t va = vdupq_n_f64(a);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2)
    vst1q_f64(y + i, vaddq_f64(vld1q_f64(y + i), vmulq_f64(va, vld1q_f64(x + i))));
  for (; i < n; ++i) y[i] += a * x[i];
}

void lerp_neon(double g, const double* w, double* x, std::size_t n) {
  const double keep = 1.0 - g;
  const float64x2_t vk = vdupq_n_f64(keep);
  const float64x2_t vg = vdupq_n_f64(g);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2)
    vst1q_f64(x + i, vaddq_f64(vmulq_f64(vk, vld1q_f64(x + i)), vmulq_f64(vg, vld1q_f64(w + i))));
  for (; i < n; ++i) x[i] = keep * x[i] + g * w[i];
}

void scale_neon(double a, double* x, std::size_t n) {
  const float64x2_t va = vdupq_n_f64(a);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) vst1q_f64(x + i, vmulq_f64(va, vld1q_f64(x + i)));
  for (; i < n; ++i) x[i] *= a;
}

void outer_neon(double s, const double* v, double* out, std::size_t n) {
  const float64x2_t vs = vdupq_n_f64(s);
  for (std::size_t r = 0; r < n; ++r) {
    const double vr = v[r];
    const float64x2_t vvr = vdupq_n_f64(vr);
    double* row = out + r * n;
    std::size_t j = 0;
    for (; j + 2 <= n; j += 2) vst1q_f64(row + j, vmulq_f64(vs, vmulq_f64(vvr, vld1q_f64(v + j))));
    for (; j < n; ++j) row[j] = s * (vr * v[j]);
  }
}

void symv_neon(const double* a, const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] = dot_neon(a + i * n, x, n);
}

}  // namespace

const KernelTable& neon_kernels() {
  static const KernelTable table{Isa::Neon, dot_neon,   sum_neon,   axpy_neon,
                                 lerp_neon, scale_neon, outer_neon, symv_neon};
  return table;
}

}  // namespace hsfw::simd

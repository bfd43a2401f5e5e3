#include "hsfw/simd/kernels.hpp"

namespace hsfw::simd {
namespace {

double dot_scalar(const double* x, const double* y, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += x[i] * y[i];
  return acc;
}

double sum_scalar(const double* x, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += x[i];
  return acc;
}

void axpy_scalar(double a, const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += a * x[i];
}

void lerp_scalar(double g, const double* w, double* x, std::size_t n) {
  const double keep = 1.0 - g;
  for (std::size_t i = 0; i < n; ++i) x[i] = keep * x[i] + g * w[i];
}

void scale_scalar(double a, double* x, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) x[i] *= a;
}

void outer_scalar(double s, const double* v, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    const double vi = v[i];
    double* row = out + i * n;
    for (std::size_t j = 0; j < n; ++j) row[j] = s * (vi * v[j]);
  }
}

void symv_scalar(const double* a, const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] = dot_scalar(a + i * n, x, n);
}

}  // namespace

const KernelTable& scalar_kernels() {
  static const KernelTable table{Isa::Scalar, dot_scalar,   sum_scalar,   axpy_scalar,
                                 lerp_scalar, scale_scalar, outer_scalar, symv_scalar};
  return table;
}

}  // namespace hsfw::simd

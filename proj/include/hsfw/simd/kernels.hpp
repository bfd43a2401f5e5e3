#pragma once

// Dense double-precision inner loops used by every solver. Each kernel has a
// scalar reference implementation and, where the target supports it, an
// AVX2 or NEON variant. The active table is chosen once at first use from the
// CPU's capabilities; HSFW_KERNELS=scalar|avx2|neon overrides the choice.
//
// Elementwise kernels (axpy, lerp, scale, outer) are bit-identical across
// variants. Reductions (dot, sum, symv) differ only in summation order.

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

namespace hsfw::simd {

enum class Isa { Scalar, Avx2, Neon };

std::string_view isa_name(Isa isa);

struct KernelTable {
  Isa isa;
  // sum_i x[i] * y[i]
  double (*dot)(const double* x, const double* y, std::size_t n);
  // sum_i x[i]
  double (*sum)(const double* x, std::size_t n);
  // y += a * x
  void (*axpy)(double a, const double* x, double* y, std::size_t n);
  // x = (1 - g) * x + g * w
  void (*lerp)(double g, const double* w, double* x, std::size_t n);
  // x *= a
  void (*scale)(double a, double* x, std::size_t n);
  // out[i*n + j] = s * (v[i] * v[j]); the product order keeps out symmetric
  void (*outer)(double s, const double* v, double* out, std::size_t n);
  // y = A x for a dense row-major n x n matrix
  void (*symv)(const double* a, const double* x, double* y, std::size_t n);
};

const KernelTable& scalar_kernels();
#if defined(HSFW_HAVE_AVX2)
const KernelTable& avx2_kernels();
#endif
#if defined(HSFW_HAVE_NEON)
const KernelTable& neon_kernels();
#endif

/// Every variant that is both compiled in and supported by the running CPU,
/// scalar first.
std::vector<const KernelTable*> available_kernels();

/// The dispatched table. Selected once per process.
const KernelTable& kernels();

// Span conveniences over the dispatched table.
inline double dot(std::span<const double> x, std::span<const double> y) {
  return kernels().dot(x.data(), y.data(), x.size());
}
inline double sum(std::span<const double> x) { return kernels().sum(x.data(), x.size()); }
inline void axpy(double a, std::span<const double> x, std::span<double> y) {
  kernels().axpy(a, x.data(), y.data(), x.size());
}
inline void lerp(double g, std::span<const double> w, std::span<double> x) {
  kernels().lerp(g, w.data(), x.data(), x.size());
}
inline void scale(double a, std::span<double> x) { kernels().scale(a, x.data(), x.size()); }

}  // namespace hsfw::simd

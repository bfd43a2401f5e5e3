#include <cstdlib>
#include <stdexcept>
#include <string>

#include "hsfw/simd/kernels.hpp"

namespace hsfw::simd {

std::string_view isa_name(Isa isa) {
  switch (isa) {
    case Isa::Scalar: return "scalar";
    case Isa::Avx2: return "avx2";
    case Isa::Neon: return "neon";
  }
  return "unknown";
}

namespace {

bool cpu_has_avx2() {
#if defined(HSFW_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") != 0;
#else
  return false;
#endif
}

const KernelTable& select() {
  const auto tables = available_kernels();
  if (const char* forced = std::getenv("HSFW_KERNELS"); forced != nullptr && *forced != '\0') {
    for (const auto* t : tables)
      if (isa_name(t->isa) == forced) return *t;
    throw std::runtime_error(std::string("HSFW_KERNELS=") + forced +
                             " is not available on this build/CPU");
  }
  return *tables.back();
}

}  // namespace

std::vector<const KernelTable*> available_kernels() {
  std::vector<const KernelTable*> out{&scalar_kernels()};
#if defined(HSFW_HAVE_AVX2)
  if (cpu_has_avx2()) out.push_back(&avx2_kernels());
#endif
#if defined(HSFW_HAVE_NEON)
  out.push_back(&neon_kernels());
#endif
  return out;
}

const KernelTable& kernels() {
  static const KernelTable& active = select();
  return active;
}

}  // namespace hsfw::simd

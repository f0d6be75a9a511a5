#include <cstdlib>
#include <string_view>

#include "qmetro/kernels.hpp"

namespace qmetro::kernels {

#if QMETRO_HAVE_AVX2
const KernelTable& avx2_kernel_table();
#endif

const KernelTable* avx2_kernels() {
#if QMETRO_HAVE_AVX2
  return &avx2_kernel_table();
#else
  return nullptr;
#endif
}

bool cpu_supports_avx2() {
#if QMETRO_HAVE_AVX2 && (defined(__GNUC__) || defined(__clang__))
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

namespace {

const KernelTable& resolve() {
  if (const char* env = std::getenv("QMETRO_SIMD")) {
    if (std::string_view(env) == "scalar") {
      return scalar_kernels();
    }
  }
  if (const KernelTable* simd = avx2_kernels(); simd != nullptr && cpu_supports_avx2()) {
    return *simd;
  }
  return scalar_kernels();
}

}  // namespace

const KernelTable& active() {
  static const KernelTable& table = resolve();
  return table;
}

}  // namespace qmetro::kernels

#pragma once

// Inner-loop kernels used by the dense linear algebra. Every kernel has a
// portable scalar reference implementation; an AVX2+FMA variant is compiled
// on x86-64 and selected at runtime when the CPU supports it. Setting the
// environment variable QMETRO_SIMD=scalar forces the reference kernels.

#include <complex>
#include <cstddef>
#include <string_view>

namespace qmetro::kernels {

using cplx = std::complex<double>;

struct KernelTable {
  std::string_view name;
  // y[i] += a * x[i]
  void (*zaxpy)(std::size_t n, cplx a, const cplx* x, cplx* y);
  // sum_i conj(x[i]) * y[i]
  cplx (*zdotc)(std::size_t n, const cplx* x, const cplx* y);
  // sum_i |x[i]|^2
  double (*dznrm2sq)(std::size_t n, const cplx* x);
  // Plane rotation of two real rows: x' = c*x - s*y, y' = s*x + c*y.
  void (*drot)(std::size_t n, double c, double s, double* x, double* y);
};

const KernelTable& scalar_kernels();

// nullptr when the binary was built without the AVX2 translation unit.
const KernelTable* avx2_kernels();

bool cpu_supports_avx2();

// Kernel set in use by the library; resolved once on first call.
const KernelTable& active();

}  // namespace qmetro::kernels

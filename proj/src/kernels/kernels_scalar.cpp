#include "qmetro/kernels.hpp"

namespace qmetro::kernels {
namespace {

void zaxpy_scalar(std::size_t n, cplx a, const cplx* x, cplx* y) {
  const double ar = a.real();
  const double ai = a.imag();
  for (std::size_t i = 0; i < n; ++i) {
    const double xr = x[i].real();
    const double xi = x[i].imag();
    y[i] = cplx(y[i].real() + ar * xr - ai * xi, y[i].imag() + ar * xi + ai * xr);
  }
}

cplx zdotc_scalar(std::size_t n, const cplx* x, const cplx* y) {
  double re = 0.0;
  double im = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double xr = x[i].real();
    const double xi = x[i].imag();
    const double yr = y[i].real();
    const double yi = y[i].imag();
    re += xr * yr + xi * yi;
    im += xr * yi - xi * yr;
  }
  return {re, im};
}

double dznrm2sq_scalar(std::size_t n, const cplx* x) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    acc += x[i].real() * x[i].real() + x[i].imag() * x[i].imag();
  }
  return acc;
}

void drot_scalar(std::size_t n, double c, double s, double* x, double* y) {
  for (std::size_t i = 0; i < n; ++i) {
    const double xv = x[i];
    const double yv = y[i];
    x[i] = c * xv - s * yv;
    y[i] = s * xv + c * yv;
  }
}

}  // namespace

const KernelTable& scalar_kernels() {
  static const KernelTable table{"scalar", zaxpy_scalar, zdotc_scalar,
                                 dznrm2sq_scalar, drot_scalar};
  return table;
}

}  // namespace qmetro::kernels

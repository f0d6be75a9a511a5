#include "qmetro/qfi.hpp"

#include <cmath>
#include <string>

#include "qmetro/errors.hpp"

namespace qmetro {

void validate(const StateFamily& f, double tol) {
  const auto& rho = f.rho;
  const auto& rho_dot = f.rho_dot;
  if (!rho.is_square() || rho.empty() || rho_dot.rows() != rho.rows() ||
      rho_dot.cols() != rho.cols()) {
    throw DimensionError("state family needs square rho and rho_dot of equal size");
  }
  if (!rho.all_finite() || !rho_dot.all_finite()) {
    throw NumericError("state family has non-finite entries");
  }
  if (!is_hermitian(rho, tol) || !is_hermitian(rho_dot, tol)) {
    throw DomainError("rho and rho_dot must be Hermitian");
  }
  if (std::abs(trace(rho) - 1.0) > tol) {
    throw DomainError("rho must have unit trace");
  }
  if (std::abs(trace(rho_dot)) > tol) {
    throw DomainError("rho_dot must be traceless");
  }
  if (hermitian_eigenvalues(rho).front() < -tol) {
    throw DomainError("rho must be positive semidefinite");
  }
}

namespace {

// rho_dot in the eigenbasis of rho.
struct Diagonalised {
  HermitianEigensystem es;
  ComplexMatrix d;
};

Diagonalised diagonalise(const StateFamily& f) {
  if (!f.rho.is_square() || f.rho_dot.rows() != f.rho.rows() ||
      f.rho_dot.cols() != f.rho.cols()) {
    throw DimensionError("state family needs square rho and rho_dot of equal size");
  }
  Diagonalised out{hermitian_eigensystem(f.rho), {}};
  const auto& v = out.es.eigenvectors;
  out.d = adjoint_matmul(v, matmul(hermitian_part(f.rho_dot), v));
  return out;
}

}  // namespace

ComplexMatrix sld(const StateFamily& f) {
  auto [es, d] = diagonalise(f);
  const std::size_t n = d.rows();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const double s = es.eigenvalues[i] + es.eigenvalues[j];
      d(i, j) = s > kSldCutoff ? 2.0 * d(i, j) / s : cplx{};
    }
  }
  const auto& v = es.eigenvectors;
  return hermitian_part(matmul_adjoint(matmul(v, d), v));
}

double qfi_value(const StateFamily& f) {
  const auto [es, d] = diagonalise(f);
  const std::size_t n = d.rows();
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const double s = es.eigenvalues[i] + es.eigenvalues[j];
      if (s > kSldCutoff) total += std::norm(d(i, j)) / s;
    }
  }
  return 2.0 * total;
}

double qfi_pure(std::span<const cplx> psi, std::span<const cplx> psi_dot) {
  if (psi.size() != psi_dot.size() || psi.empty()) {
    throw DimensionError("psi and psi_dot must have equal non-zero length");
  }
  const double overlap = std::norm(inner(psi, psi_dot));
  return 4.0 * (inner(psi_dot, psi_dot).real() - overlap);
}

}  // namespace qmetro

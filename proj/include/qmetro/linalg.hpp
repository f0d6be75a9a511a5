#pragma once

// Dense complex linear algebra sized for desk-scale metrology problems
// (matrices up to a few hundred rows). Row-major storage throughout.

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace qmetro {

using cplx = std::complex<double>;
using ComplexVector = std::vector<cplx>;

class ComplexMatrix {
 public:
  ComplexMatrix() = default;
  // Zero-filled rows x cols matrix.
  ComplexMatrix(std::size_t rows, std::size_t cols);
  // Throws DimensionError on a size mismatch and NumericError on non-finite
  // entries.
  ComplexMatrix(std::size_t rows, std::size_t cols, std::vector<cplx> entries);
  ComplexMatrix(std::initializer_list<std::initializer_list<cplx>> rows);

  static ComplexMatrix identity(std::size_t n);
  static ComplexMatrix diagonal(std::span<const cplx> diag);
  static ComplexMatrix diagonal(std::span<const double> diag);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool empty() const noexcept { return entries_.empty(); }
  bool is_square() const noexcept { return rows_ == cols_; }

  cplx& operator()(std::size_t r, std::size_t c) { return entries_[r * cols_ + c]; }
  const cplx& operator()(std::size_t r, std::size_t c) const {
    return entries_[r * cols_ + c];
  }

  std::span<cplx> row(std::size_t r) { return {entries_.data() + r * cols_, cols_}; }
  std::span<const cplx> row(std::size_t r) const {
    return {entries_.data() + r * cols_, cols_};
  }

  cplx* data() noexcept { return entries_.data(); }
  const cplx* data() const noexcept { return entries_.data(); }
  std::span<const cplx> entries() const noexcept { return entries_; }

  ComplexMatrix adjoint() const;
  ComplexMatrix transpose() const;
  bool all_finite() const;

  ComplexMatrix& operator+=(const ComplexMatrix& other);
  ComplexMatrix& operator-=(const ComplexMatrix& other);
  ComplexMatrix& operator*=(cplx scale);

  // y += a * x over the whole storage; shapes must agree.
  void add_scaled(cplx a, const ComplexMatrix& x);

  friend bool operator==(const ComplexMatrix&, const ComplexMatrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<cplx> entries_;
};

ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b);
ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b);
ComplexMatrix operator*(cplx s, ComplexMatrix m);
ComplexMatrix operator*(ComplexMatrix m, cplx s);
ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b);

ComplexMatrix matmul(const ComplexMatrix& a, const ComplexMatrix& b);
// a^dagger * b
ComplexMatrix adjoint_matmul(const ComplexMatrix& a, const ComplexMatrix& b);
// a * b^dagger
ComplexMatrix matmul_adjoint(const ComplexMatrix& a, const ComplexMatrix& b);

cplx trace(const ComplexMatrix& m);
// Tr(a^dagger b)
cplx hs_inner(const ComplexMatrix& a, const ComplexMatrix& b);
double frobenius_norm(const ComplexMatrix& m);
double max_abs(const ComplexMatrix& m);

ComplexMatrix hermitian_part(const ComplexMatrix& m);
// max |m - m^dagger|, zero for Hermitian input.
double hermiticity_defect(const ComplexMatrix& m);
bool is_hermitian(const ComplexMatrix& m, double tol);
bool is_unitary(const ComplexMatrix& m, double tol);

// Kronecker product with a's indices major.
ComplexMatrix tensor_product(const ComplexMatrix& a, const ComplexMatrix& b);

// Traces out every subsystem not listed in `keep`. `dims` gives the factor
// dimensions, most significant first; `keep` indices must be distinct.
ComplexMatrix partial_trace(const ComplexMatrix& m, std::span<const std::size_t> dims,
                            std::span<const std::size_t> keep);

// (a ⊗ I_d) x and x (a ⊗ I_d) without materialising the Kronecker product.
ComplexMatrix kron_identity_left(const ComplexMatrix& a, const ComplexMatrix& x,
                                 std::size_t d);
ComplexMatrix kron_identity_right(const ComplexMatrix& x, const ComplexMatrix& a,
                                  std::size_t d);

ComplexVector matvec(const ComplexMatrix& m, std::span<const cplx> v);
// <a|b>
cplx inner(std::span<const cplx> a, std::span<const cplx> b);
double vector_norm(std::span<const cplx> v);
// |ket><bra|
ComplexMatrix outer(std::span<const cplx> ket, std::span<const cplx> bra);

struct HermitianEigensystem {
  std::vector<double> eigenvalues;  // ascending
  ComplexMatrix eigenvectors;       // column i pairs with eigenvalues[i]

  ComplexVector eigenvector(std::size_t i) const;
};

// Householder reduction to real tridiagonal form followed by implicit QL.
// The input is symmetrised as (m + m^dagger)/2 first; a Hermiticity defect
// above 1e-9 * ||m|| is rejected with DomainError.
HermitianEigensystem hermitian_eigensystem(const ComplexMatrix& m);

std::vector<double> hermitian_eigenvalues(const ComplexMatrix& m);

struct TopEigenpair {
  double value;
  ComplexVector vector;  // normalised
};

// Largest eigenvalue and one eigenvector for it, without the full basis.
TopEigenpair top_eigenpair(const ComplexMatrix& m);

// Largest singular value. Hermitian input uses max |eigenvalue|, anything
// else sqrt(lambda_max(m^dagger m)).
double operator_norm(const ComplexMatrix& m);

constexpr double kHermTol = 1e-9;

}  // namespace qmetro

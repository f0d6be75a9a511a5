#include "qmetro/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "qmetro/errors.hpp"
#include "qmetro/kernels.hpp"

namespace qmetro {

namespace {

void require_same_shape(const ComplexMatrix& a, const ComplexMatrix& b, const char* op) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw DimensionError(std::string(op) + ": shape mismatch " + std::to_string(a.rows()) +
                         "x" + std::to_string(a.cols()) + " vs " + std::to_string(b.rows()) +
                         "x" + std::to_string(b.cols()));
  }
}

bool finite(cplx z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

}  // namespace

ComplexMatrix::ComplexMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), entries_(rows * cols) {}

ComplexMatrix::ComplexMatrix(std::size_t rows, std::size_t cols, std::vector<cplx> entries)
    : rows_(rows), cols_(cols), entries_(std::move(entries)) {
  if (entries_.size() != rows_ * cols_) {
    throw DimensionError("matrix entries: expected " + std::to_string(rows_ * cols_) +
                         ", got " + std::to_string(entries_.size()));
  }
  if (!all_finite()) {
    throw NumericError("matrix entries must be finite");
  }
}

ComplexMatrix::ComplexMatrix(std::initializer_list<std::initializer_list<cplx>> rows) {
  rows_ = rows.size();
  cols_ = rows_ == 0 ? 0 : rows.begin()->size();
  entries_.reserve(rows_ * cols_);
  for (const auto& r : rows) {
    if (r.size() != cols_) {
      throw DimensionError("ragged matrix literal");
    }
    entries_.insert(entries_.end(), r.begin(), r.end());
  }
}

ComplexMatrix ComplexMatrix::identity(std::size_t n) {
  ComplexMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    m(i, i) = 1.0;
  }
  return m;
}

ComplexMatrix ComplexMatrix::diagonal(std::span<const cplx> diag) {
  ComplexMatrix m(diag.size(), diag.size());
  for (std::size_t i = 0; i < diag.size(); ++i) {
    m(i, i) = diag[i];
  }
  return m;
}

ComplexMatrix ComplexMatrix::diagonal(std::span<const double> diag) {
  ComplexMatrix m(diag.size(), diag.size());
  for (std::size_t i = 0; i < diag.size(); ++i) {
    m(i, i) = diag[i];
  }
  return m;
}

ComplexMatrix ComplexMatrix::adjoint() const {
  ComplexMatrix out(cols_, rows_);
  for (std::size_t r = 0; r < rows_; ++r) {
    for (std::size_t c = 0; c < cols_; ++c) {
      out(c, r) = std::conj((*this)(r, c));
    }
  }
  return out;
}

ComplexMatrix ComplexMatrix::transpose() const {
  ComplexMatrix out(cols_, rows_);
  for (std::size_t r = 0; r < rows_; ++r) {
    for (std::size_t c = 0; c < cols_; ++c) {
      out(c, r) = (*this)(r, c);
    }
  }
  return out;
}

bool ComplexMatrix::all_finite() const {
  return std::all_of(entries_.begin(), entries_.end(), finite);
}

ComplexMatrix& ComplexMatrix::operator+=(const ComplexMatrix& other) {
  add_scaled(1.0, other);
  return *this;
}

ComplexMatrix& ComplexMatrix::operator-=(const ComplexMatrix& other) {
  add_scaled(-1.0, other);
  return *this;
}

ComplexMatrix& ComplexMatrix::operator*=(cplx scale) {
  for (auto& z : entries_) {
    z *= scale;
  }
  return *this;
}

void ComplexMatrix::add_scaled(cplx a, const ComplexMatrix& x) {
  require_same_shape(*this, x, "add");
  kernels::active().zaxpy(entries_.size(), a, x.data(), entries_.data());
}

ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b) {
  a += b;
  return a;
}

ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b) {
  a -= b;
  return a;
}

ComplexMatrix operator*(cplx s, ComplexMatrix m) {
  m *= s;
  return m;
}

ComplexMatrix operator*(ComplexMatrix m, cplx s) {
  m *= s;
  return m;
}

ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) {
  return matmul(a, b);
}

ComplexMatrix matmul(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.cols() != b.rows()) {
    throw DimensionError("matmul: inner dimensions " + std::to_string(a.cols()) + " and " +
                         std::to_string(b.rows()));
  }
  const auto& k = kernels::active();
  ComplexMatrix c(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    cplx* crow = c.row(i).data();
    for (std::size_t l = 0; l < a.cols(); ++l) {
      const cplx s = a(i, l);
      if (s != cplx{}) {
        k.zaxpy(b.cols(), s, b.row(l).data(), crow);
      }
    }
  }
  return c;
}

ComplexMatrix adjoint_matmul(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.rows() != b.rows()) {
    throw DimensionError("adjoint_matmul: row counts " + std::to_string(a.rows()) + " and " +
                         std::to_string(b.rows()));
  }
  const auto& k = kernels::active();
  ComplexMatrix c(a.cols(), b.cols());
  for (std::size_t l = 0; l < a.rows(); ++l) {
    const cplx* brow = b.row(l).data();
    for (std::size_t i = 0; i < a.cols(); ++i) {
      const cplx s = std::conj(a(l, i));
      if (s != cplx{}) {
        k.zaxpy(b.cols(), s, brow, c.row(i).data());
      }
    }
  }
  return c;
}

ComplexMatrix matmul_adjoint(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.cols() != b.cols()) {
    throw DimensionError("matmul_adjoint: column counts " + std::to_string(a.cols()) +
                         " and " + std::to_string(b.cols()));
  }
  const auto& k = kernels::active();
  ComplexMatrix c(a.rows(), b.rows());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < b.rows(); ++j) {
      c(i, j) = k.zdotc(a.cols(), b.row(j).data(), a.row(i).data());
    }
  }
  return c;
}

cplx trace(const ComplexMatrix& m) {
  if (!m.is_square()) {
    throw DimensionError("trace of non-square matrix");
  }
  cplx t{};
  for (std::size_t i = 0; i < m.rows(); ++i) {
    t += m(i, i);
  }
  return t;
}

cplx hs_inner(const ComplexMatrix& a, const ComplexMatrix& b) {
  require_same_shape(a, b, "hs_inner");
  return kernels::active().zdotc(a.entries().size(), a.data(), b.data());
}

double frobenius_norm(const ComplexMatrix& m) {
  return std::sqrt(kernels::active().dznrm2sq(m.entries().size(), m.data()));
}

double max_abs(const ComplexMatrix& m) {
  double best = 0.0;
  for (const cplx& z : m.entries()) {
    best = std::max(best, std::abs(z));
  }
  return best;
}

ComplexMatrix hermitian_part(const ComplexMatrix& m) {
  if (!m.is_square()) {
    throw DimensionError("hermitian_part of non-square matrix");
  }
  ComplexMatrix h(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) {
      h(i, j) = 0.5 * (m(i, j) + std::conj(m(j, i)));
    }
  }
  return h;
}

double hermiticity_defect(const ComplexMatrix& m) {
  if (!m.is_square()) {
    throw DimensionError("hermiticity_defect of non-square matrix");
  }
  double worst = 0.0;
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = i; j < m.cols(); ++j) {
      worst = std::max(worst, std::abs(m(i, j) - std::conj(m(j, i))));
    }
  }
  return worst;
}

bool is_hermitian(const ComplexMatrix& m, double tol) {
  return m.is_square() && hermiticity_defect(m) <= tol;
}

bool is_unitary(const ComplexMatrix& m, double tol) {
  if (!m.is_square()) {
    return false;
  }
  return max_abs(adjoint_matmul(m, m) - ComplexMatrix::identity(m.rows())) <= tol;
}

ComplexMatrix tensor_product(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  const auto& k = kernels::active();
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) {
      const cplx s = a(i, j);
      if (s == cplx{}) {
        continue;
      }
      for (std::size_t r = 0; r < b.rows(); ++r) {
        k.zaxpy(b.cols(), s, b.row(r).data(), &out(i * b.rows() + r, j * b.cols()));
      }
    }
  }
  return out;
}

ComplexMatrix partial_trace(const ComplexMatrix& m, std::span<const std::size_t> dims,
                            std::span<const std::size_t> keep) {
  if (!m.is_square()) {
    throw DimensionError("partial_trace of non-square matrix");
  }
  const std::size_t total =
      std::accumulate(dims.begin(), dims.end(), std::size_t{1}, std::multiplies<>());
  if (dims.empty() || total != m.rows()) {
    throw DimensionError("partial_trace: factor dimensions multiply to " +
                         std::to_string(total) + ", matrix has " + std::to_string(m.rows()));
  }
  std::vector<bool> kept(dims.size(), false);
  for (std::size_t idx : keep) {
    if (idx >= dims.size() || kept[idx]) {
      throw DimensionError("partial_trace: invalid or repeated subsystem index " +
                           std::to_string(idx));
    }
    kept[idx] = true;
  }

  const std::size_t n = dims.size();
  // Strides of the full index and of the kept-only index.
  std::vector<std::size_t> stride(n);
  std::vector<std::size_t> kept_stride(n, 0);
  std::size_t s = 1;
  std::size_t ks = 1;
  for (std::size_t q = n; q-- > 0;) {
    stride[q] = s;
    s *= dims[q];
    if (kept[q]) {
      kept_stride[q] = ks;
      ks *= dims[q];
    }
  }
  const std::size_t out_dim = ks;

  // Each full index splits into (kept part, traced part).
  std::vector<std::size_t> kept_index(total);
  std::vector<std::size_t> traced_index(total);
  for (std::size_t idx = 0; idx < total; ++idx) {
    std::size_t k = 0;
    std::size_t t = 0;
    std::size_t traced_stride = 1;
    for (std::size_t q = n; q-- > 0;) {
      const std::size_t digit = (idx / stride[q]) % dims[q];
      if (kept[q]) {
        k += digit * kept_stride[q];
      } else {
        t += digit * traced_stride;
        traced_stride *= dims[q];
      }
    }
    kept_index[idx] = k;
    traced_index[idx] = t;
  }

  ComplexMatrix out(out_dim, out_dim);
  for (std::size_t r = 0; r < total; ++r) {
    for (std::size_t c = 0; c < total; ++c) {
      if (traced_index[r] == traced_index[c]) {
        out(kept_index[r], kept_index[c]) += m(r, c);
      }
    }
  }
  return out;
}

ComplexMatrix kron_identity_left(const ComplexMatrix& a, const ComplexMatrix& x,
                                 std::size_t d) {
  if (d == 0 || a.cols() * d != x.rows()) {
    throw DimensionError("kron_identity_left: operand rows do not match");
  }
  const auto& k = kernels::active();
  ComplexMatrix out(a.rows() * d, x.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) {
      const cplx s = a(i, j);
      if (s == cplx{}) {
        continue;
      }
      for (std::size_t e = 0; e < d; ++e) {
        k.zaxpy(x.cols(), s, x.row(j * d + e).data(), out.row(i * d + e).data());
      }
    }
  }
  return out;
}

ComplexMatrix kron_identity_right(const ComplexMatrix& x, const ComplexMatrix& a,
                                  std::size_t d) {
  if (d == 0 || a.rows() * d != x.cols()) {
    throw DimensionError("kron_identity_right: operand columns do not match");
  }
  const auto& k = kernels::active();
  ComplexMatrix out(x.rows(), a.cols() * d);
  for (std::size_t r = 0; r < x.rows(); ++r) {
    const cplx* xr = x.row(r).data();
    cplx* orow = out.row(r).data();
    for (std::size_t i = 0; i < a.rows(); ++i) {
      for (std::size_t j = 0; j < a.cols(); ++j) {
        const cplx s = a(i, j);
        if (s != cplx{}) {
          k.zaxpy(d, s, xr + i * d, orow + j * d);
        }
      }
    }
  }
  return out;
}

ComplexVector matvec(const ComplexMatrix& m, std::span<const cplx> v) {
  if (m.cols() != v.size()) {
    throw DimensionError("matvec: matrix has " + std::to_string(m.cols()) +
                         " columns, vector has " + std::to_string(v.size()) + " entries");
  }
  ComplexVector out(m.rows());
  for (std::size_t i = 0; i < m.rows(); ++i) {
    cplx acc{};
    for (std::size_t j = 0; j < m.cols(); ++j) {
      acc += m(i, j) * v[j];
    }
    out[i] = acc;
  }
  return out;
}

cplx inner(std::span<const cplx> a, std::span<const cplx> b) {
  if (a.size() != b.size()) {
    throw DimensionError("inner: length mismatch");
  }
  return kernels::active().zdotc(a.size(), a.data(), b.data());
}

double vector_norm(std::span<const cplx> v) {
  return std::sqrt(kernels::active().dznrm2sq(v.size(), v.data()));
}

ComplexMatrix outer(std::span<const cplx> ket, std::span<const cplx> bra) {
  ComplexMatrix m(ket.size(), bra.size());
  for (std::size_t i = 0; i < ket.size(); ++i) {
    for (std::size_t j = 0; j < bra.size(); ++j) {
      m(i, j) = ket[i] * std::conj(bra[j]);
    }
  }
  return m;
}

double operator_norm(const ComplexMatrix& m) {
  if (m.empty()) {
    throw DimensionError("operator_norm of empty matrix");
  }
  if (m.is_square() && hermiticity_defect(m) <= kHermTol * std::max(1.0, max_abs(m))) {
    const auto ev = hermitian_eigenvalues(m);
    return std::max(std::abs(ev.front()), std::abs(ev.back()));
  }
  const auto ev = hermitian_eigenvalues(adjoint_matmul(m, m));
  return std::sqrt(std::max(0.0, ev.back()));
}

}  // namespace qmetro

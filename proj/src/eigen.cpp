#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "qmetro/errors.hpp"
#include "qmetro/kernels.hpp"
#include "qmetro/linalg.hpp"

namespace qmetro {

namespace {

struct Tridiagonal {
  std::vector<double> diag;
  std::vector<double> offdiag;  // offdiag[i] couples i and i+1; last entry is 0
  ComplexMatrix basis;          // columns map tridiagonal coordinates back
  // Without an accumulated basis: reflector j acts on indices >= j + 1.
  std::vector<ComplexVector> reflectors;
  ComplexVector phase;
};

// Householder reduction of a Hermitian matrix to real symmetric tridiagonal
// form T = B^dagger A B, with B = Q D where D rotates the complex
// off-diagonal entries onto the non-negative real axis.
Tridiagonal tridiagonalize(ComplexMatrix a, bool accumulate) {
  const auto& k = kernels::active();
  const std::size_t n = a.rows();
  ComplexMatrix q = accumulate ? ComplexMatrix::identity(n) : ComplexMatrix();
  std::vector<ComplexVector> reflectors(n);
  ComplexVector v(n);
  ComplexVector vc(n);
  ComplexVector p(n);
  ComplexVector w(n);
  ComplexVector wc(n);

  for (std::size_t col = 0; col + 2 < n; ++col) {
    const std::size_t off = col + 1;
    const std::size_t m = n - off;
    double xnorm2 = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      xnorm2 += std::norm(a(off + i, col));
    }
    double tail2 = xnorm2 - std::norm(a(off, col));
    if (tail2 <= 0.0) {
      continue;  // already tridiagonal in this column
    }
    const double xnorm = std::sqrt(xnorm2);
    const cplx x0 = a(off, col);
    const cplx phase = std::abs(x0) > 0.0 ? x0 / std::abs(x0) : cplx{1.0};
    const cplx alpha = -phase * xnorm;

    for (std::size_t i = 0; i < m; ++i) {
      v[i] = a(off + i, col);
    }
    v[0] -= alpha;
    const double vnorm = std::sqrt(k.dznrm2sq(m, v.data()));
    for (std::size_t i = 0; i < m; ++i) {
      v[i] /= vnorm;
      vc[i] = std::conj(v[i]);
    }

    // Trailing block B <- H B H = B - 2 v w^dagger - 2 w v^dagger.
    for (std::size_t i = 0; i < m; ++i) {
      p[i] = std::conj(k.zdotc(m, &a(off + i, off), vc.data()));
    }
    const double c = k.zdotc(m, v.data(), p.data()).real();
    for (std::size_t i = 0; i < m; ++i) {
      w[i] = p[i] - c * v[i];
      wc[i] = std::conj(w[i]);
    }
    for (std::size_t i = 0; i < m; ++i) {
      cplx* brow = &a(off + i, off);
      k.zaxpy(m, -2.0 * v[i], wc.data(), brow);
      k.zaxpy(m, -2.0 * w[i], vc.data(), brow);
    }
    a(off, col) = alpha;
    a(col, off) = std::conj(alpha);
    for (std::size_t i = 1; i < m; ++i) {
      a(off + i, col) = 0.0;
      a(col, off + i) = 0.0;
    }

    if (!accumulate) {
      reflectors[col].assign(v.begin(), v.begin() + m);
      continue;
    }
    // Q <- Q H
    for (std::size_t r = 0; r < n; ++r) {
      cplx* qrow = &q(r, off);
      const cplx s = std::conj(k.zdotc(m, qrow, vc.data()));
      k.zaxpy(m, -2.0 * s, vc.data(), qrow);
    }
  }

  Tridiagonal t;
  t.diag.resize(n);
  t.offdiag.assign(n, 0.0);
  ComplexVector phase(n, 1.0);
  for (std::size_t i = 0; i < n; ++i) {
    t.diag[i] = a(i, i).real();
  }
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const cplx e = a(i + 1, i);
    const double mag = std::abs(e);
    t.offdiag[i] = mag;
    phase[i + 1] = mag > 0.0 ? phase[i] * (e / mag) : phase[i];
  }
  if (accumulate) {
    for (std::size_t r = 0; r < n; ++r) {
      for (std::size_t c = 0; c < n; ++c) {
        q(r, c) *= phase[c];
      }
    }
    t.basis = std::move(q);
  } else {
    t.reflectors = std::move(reflectors);
    t.phase = std::move(phase);
  }
  return t;
}

// basis * x for a tridiagonal built without accumulation.
ComplexVector back_transform(const Tridiagonal& t, std::span<const double> x) {
  const auto& k = kernels::active();
  const std::size_t n = x.size();
  ComplexVector y(n);
  for (std::size_t i = 0; i < n; ++i) {
    y[i] = t.phase[i] * x[i];
  }
  for (std::size_t j = n; j-- > 0;) {
    const ComplexVector& v = t.reflectors[j];
    if (v.empty()) {
      continue;
    }
    cplx* tail = y.data() + j + 1;
    const cplx s = k.zdotc(v.size(), v.data(), tail);
    k.zaxpy(v.size(), -2.0 * s, v.data(), tail);
  }
  return y;
}

// Implicit QL with Wilkinson-style shifts on a real symmetric tridiagonal
// matrix. Rotations accumulate into the rows of zt (= Z^T).
void tridiagonal_ql(std::vector<double>& d, std::vector<double>& e,
                    std::vector<std::vector<double>>* zt) {
  const auto& k = kernels::active();
  const std::size_t n = d.size();
  const double eps = std::numeric_limits<double>::epsilon();
  // Off-diagonals below eps * ||T|| are dropped outright; a purely relative
  // test never deflates between two (near-)zero diagonal entries.
  double anorm = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    anorm = std::max(anorm, std::abs(d[i]) + std::abs(e[i]) + (i > 0 ? std::abs(e[i - 1]) : 0.0));
  }
  for (std::size_t l = 0; l < n; ++l) {
    int iter = 0;
    std::size_t m = l;
    do {
      for (m = l; m + 1 < n; ++m) {
        const double dd = std::abs(d[m]) + std::abs(d[m + 1]);
        if (std::abs(e[m]) <= eps * std::max(dd, 0.5 * anorm)) {
          break;
        }
      }
      if (m != l) {
        if (++iter > 60) {
          throw NumericError("hermitian_eigensystem: QL iteration did not converge");
        }
        double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
        double r = std::hypot(g, 1.0);
        g = d[m] - d[l] + e[l] / (g + std::copysign(r, g));
        double s = 1.0;
        double c = 1.0;
        double p = 0.0;
        bool deflated = false;
        for (std::size_t i = m; i-- > l;) {
          double f = s * e[i];
          const double b = c * e[i];
          r = std::hypot(f, g);
          e[i + 1] = r;
          if (r == 0.0) {
            d[i + 1] -= p;
            e[m] = 0.0;
            deflated = true;
            break;
          }
          s = f / r;
          c = g / r;
          g = d[i + 1] - p;
          r = (d[i] - g) * s + 2.0 * c * b;
          p = s * r;
          d[i + 1] = g + p;
          g = c * r - b;
          // Columns i, i+1 of Z: z_i' = c z_i - s z_{i+1}, z_{i+1}' = s z_i + c z_{i+1}.
          if (zt != nullptr) {
            k.drot(n, c, s, (*zt)[i].data(), (*zt)[i + 1].data());
          }
        }
        if (deflated) {
          continue;
        }
        d[l] -= p;
        e[l] = g;
        e[m] = 0.0;
      }
    } while (m != l);
  }
}

}  // namespace

ComplexVector HermitianEigensystem::eigenvector(std::size_t i) const {
  ComplexVector v(eigenvectors.rows());
  for (std::size_t r = 0; r < v.size(); ++r) {
    v[r] = eigenvectors(r, i);
  }
  return v;
}

namespace {

void check_input(const ComplexMatrix& m) {
  if (!m.is_square()) {
    throw DimensionError("hermitian_eigensystem: matrix is " + std::to_string(m.rows()) + "x" +
                         std::to_string(m.cols()));
  }
  if (m.empty()) {
    throw DimensionError("hermitian_eigensystem: empty matrix");
  }
  if (!m.all_finite()) {
    throw NumericError("hermitian_eigensystem: non-finite entries");
  }
  const double scale = max_abs(m);
  if (hermiticity_defect(m) > kHermTol * std::max(scale, 1e-300) && scale > 0.0) {
    throw DomainError("hermitian_eigensystem: matrix is not Hermitian");
  }
}

}  // namespace

HermitianEigensystem hermitian_eigensystem(const ComplexMatrix& m) {
  check_input(m);
  const std::size_t n = m.rows();
  Tridiagonal t = tridiagonalize(hermitian_part(m), true);
  std::vector<std::vector<double>> zt(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i) {
    zt[i][i] = 1.0;
  }
  tridiagonal_ql(t.diag, t.offdiag, &zt);

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return t.diag[a] < t.diag[b]; });

  // Eigenvectors = basis * Z, with columns permuted into ascending order.
  ComplexMatrix z(n, n);
  for (std::size_t c = 0; c < n; ++c) {
    const auto& col = zt[order[c]];
    for (std::size_t r = 0; r < n; ++r) {
      z(r, c) = col[r];
    }
  }
  HermitianEigensystem es;
  es.eigenvalues.resize(n);
  for (std::size_t c = 0; c < n; ++c) {
    es.eigenvalues[c] = t.diag[order[c]];
  }
  es.eigenvectors = matmul(t.basis, z);
  return es;
}

std::vector<double> hermitian_eigenvalues(const ComplexMatrix& m) {
  check_input(m);
  Tridiagonal t = tridiagonalize(hermitian_part(m), false);
  tridiagonal_ql(t.diag, t.offdiag, nullptr);
  std::sort(t.diag.begin(), t.diag.end());
  return t.diag;
}

TopEigenpair top_eigenpair(const ComplexMatrix& m) {
  check_input(m);
  const std::size_t n = m.rows();
  Tridiagonal t = tridiagonalize(hermitian_part(m), false);
  const std::vector<double> d0 = t.diag;
  const std::vector<double> e0 = t.offdiag;
  std::vector<double> d = d0;
  std::vector<double> e = e0;
  tridiagonal_ql(d, e, nullptr);
  const double top = *std::max_element(d.begin(), d.end());

  // Inverse iteration with a shift just above the top eigenvalue, where
  // T - shift is negative definite and LDL^T needs no pivoting.
  double norm = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    norm = std::max(norm, std::abs(d0[i]) + e0[i] + (i > 0 ? e0[i - 1] : 0.0));
  }
  const double shift = top + 1e-10 * std::max(norm, 1e-300);
  std::vector<double> piv(n), low(n), x(n, 1.0);
  piv[0] = d0[0] - shift;
  for (std::size_t i = 1; i < n; ++i) {
    low[i] = e0[i - 1] / piv[i - 1];
    piv[i] = d0[i] - shift - low[i] * e0[i - 1];
  }
  for (std::size_t i = 0; i < n; ++i) {
    x[i] = 1.0 + 1e-3 * static_cast<double>(i % 7);
  }
  for (int sweep = 0; sweep < 3; ++sweep) {
    for (std::size_t i = 1; i < n; ++i) x[i] -= low[i] * x[i - 1];
    for (std::size_t i = 0; i < n; ++i) x[i] /= piv[i];
    for (std::size_t i = n - 1; i-- > 0;) x[i] -= low[i + 1] * x[i + 1];
    double s = 0.0;
    for (double v : x) s += v * v;
    s = std::sqrt(s);
    for (double& v : x) v /= s;
  }
  return {top, back_transform(t, x)};
}

}  // namespace qmetro

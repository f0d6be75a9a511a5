#pragma once

// Random generators shared by the test suites.

#include <cmath>
#include <random>

#include <vector>

#include "qmetro/bounds.hpp"
#include "qmetro/linalg.hpp"

namespace qmetro::testing {

inline ComplexMatrix random_matrix(std::mt19937_64& rng, std::size_t rows, std::size_t cols) {
  std::normal_distribution<double> normal(0.0, 1.0);
  ComplexMatrix m(rows, cols);
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t j = 0; j < cols; ++j) {
      m(i, j) = cplx(normal(rng), normal(rng));
    }
  }
  return m;
}

inline ComplexMatrix random_hermitian(std::mt19937_64& rng, std::size_t n) {
  return hermitian_part(random_matrix(rng, n, n));
}

inline ComplexVector random_state(std::mt19937_64& rng, std::size_t n) {
  std::normal_distribution<double> normal(0.0, 1.0);
  ComplexVector v(n);
  for (auto& z : v) {
    z = cplx(normal(rng), normal(rng));
  }
  const double norm = vector_norm(v);
  for (auto& z : v) {
    z /= norm;
  }
  return v;
}

// Full-rank density matrix G G^dagger / Tr(G G^dagger).
inline ComplexMatrix random_density(std::mt19937_64& rng, std::size_t n) {
  ComplexMatrix g = random_matrix(rng, n, n);
  ComplexMatrix rho = matmul_adjoint(g, g);
  rho *= 1.0 / trace(rho).real();
  return hermitian_part(rho);
}

// Unitary from the eigenvectors of a random Hermitian matrix.
inline ComplexMatrix random_unitary(std::mt19937_64& rng, std::size_t n) {
  return hermitian_eigensystem(random_hermitian(rng, n)).eigenvectors;
}

// exp(-i h phi) from the eigensystem of h.
inline ComplexMatrix rotation(const ComplexMatrix& h, double phi) {
  const auto es = hermitian_eigensystem(h);
  ComplexMatrix scaled = es.eigenvectors;
  for (std::size_t r = 0; r < scaled.rows(); ++r) {
    for (std::size_t c = 0; c < scaled.cols(); ++c) {
      scaled(r, c) *= std::polar(1.0, -es.eigenvalues[c] * phi);
    }
  }
  return matmul_adjoint(scaled, es.eigenvectors);
}

inline std::vector<ComplexMatrix> mix(const ComplexMatrix& u, const std::vector<ComplexMatrix>& k) {
  std::vector<ComplexMatrix> out(k.size(), ComplexMatrix(k[0].rows(), k[0].cols()));
  for (std::size_t a = 0; a < k.size(); ++a) {
    for (std::size_t b = 0; b < k.size(); ++b) out[a].add_scaled(u(a, b), k[b]);
  }
  return out;
}

inline ComplexMatrix act(const std::vector<ComplexMatrix>& k, const ComplexMatrix& rho) {
  ComplexMatrix out(k[0].rows(), k[0].rows());
  for (const auto& m : k) out += matmul_adjoint(matmul(m, rho), m);
  return out;
}

inline ComplexMatrix pauli_x() { return ComplexMatrix{{0.0, 1.0}, {1.0, 0.0}}; }

// Generators realising the analytic Kraus rotations in the convention
// Ktdot_k = Kdot_k - i sum_l h_kl K_l.
inline KrausGenerator dephasing_rotation(double speed) {
  ComplexMatrix h = 0.5 * ComplexMatrix::identity(2);
  h -= speed * pauli_x();
  return {h};
}

inline KrausGenerator erasure_beta0(double eta) {
  const std::vector<double> d{0.5, 0.0, -eta / (2.0 * (1.0 - eta)),
                              (1.0 - eta / 2.0) / (1.0 - eta)};
  return {ComplexMatrix::diagonal(d)};
}

inline KrausGenerator amplitude_damping_beta0(double eta) {
  const std::vector<double> d{0.0, 1.0 / (1.0 - eta)};
  return {ComplexMatrix::diagonal(d)};
}

}  // namespace qmetro::testing

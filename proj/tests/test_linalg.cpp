#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "qmetro/errors.hpp"
#include "qmetro/linalg.hpp"
#include "support.hpp"

using namespace qmetro;
using qmetro::testing::random_density;
using qmetro::testing::random_hermitian;
using qmetro::testing::random_matrix;

TEST_CASE("eigensystem of identity and Pauli-z") {
  auto id = hermitian_eigensystem(ComplexMatrix::identity(2));
  CHECK(id.eigenvalues[0] == doctest::Approx(1.0));
  CHECK(id.eigenvalues[1] == doctest::Approx(1.0));

  ComplexMatrix z{{1.0, 0.0}, {0.0, -1.0}};
  auto es = hermitian_eigensystem(z);
  CHECK(es.eigenvalues[0] == doctest::Approx(-1.0));
  CHECK(es.eigenvalues[1] == doctest::Approx(1.0));
}

TEST_CASE("eigensystem reconstructs random Hermitian matrices") {
  std::mt19937_64 rng(1);
  for (std::size_t n : {1u, 2u, 3u, 8u, 33u, 64u}) {
    const ComplexMatrix m = random_hermitian(rng, n);
    const auto es = hermitian_eigensystem(m);
    for (std::size_t i = 1; i < n; ++i) {
      CHECK(es.eigenvalues[i - 1] <= es.eigenvalues[i]);
    }
    const ComplexMatrix& v = es.eigenvectors;
    ComplexMatrix scaled = v;
    for (std::size_t r = 0; r < n; ++r) {
      for (std::size_t c = 0; c < n; ++c) {
        scaled(r, c) *= es.eigenvalues[c];
      }
    }
    const double scale = operator_norm(m);
    CHECK(max_abs(matmul_adjoint(scaled, v) - m) <= 1e-10 * scale);
    CHECK(max_abs(adjoint_matmul(v, v) - ComplexMatrix::identity(n)) <= 1e-10);
  }
}

TEST_CASE("eigensystem handles degenerate and already-diagonal spectra") {
  std::mt19937_64 rng(2);
  const std::size_t n = 12;
  const ComplexMatrix u = testing::random_unitary(rng, n);
  std::vector<double> diag{-1, -1, -1, 0, 0, 2, 2, 2, 2, 5, 5, 7};
  const ComplexMatrix m = matmul(matmul(u, ComplexMatrix::diagonal(diag)), u.adjoint());
  const auto es = hermitian_eigensystem(hermitian_part(m));
  for (std::size_t i = 0; i < n; ++i) {
    CHECK(std::abs(es.eigenvalues[i] - diag[i]) <= 1e-10);
  }
  const auto d = hermitian_eigensystem(ComplexMatrix::diagonal(diag));
  for (std::size_t i = 0; i < n; ++i) {
    CHECK(d.eigenvalues[i] == doctest::Approx(diag[i]));
  }
}

TEST_CASE("eigensystem errors") {
  CHECK_THROWS_AS(hermitian_eigensystem(ComplexMatrix(2, 3)), DimensionError);
  CHECK_THROWS_AS(hermitian_eigensystem(ComplexMatrix()), DimensionError);
  ComplexMatrix bad{{1.0, 0.0}, {0.0, 1.0}};
  bad(0, 1) = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(hermitian_eigensystem(bad), NumericError);
  ComplexMatrix skew{{0.0, 1.0}, {-1.0, 0.0}};
  CHECK_THROWS_AS(hermitian_eigensystem(skew), DomainError);
  CHECK_THROWS_AS(ComplexMatrix(2, 2, std::vector<cplx>(3)), DimensionError);
}

TEST_CASE("operator norm") {
  CHECK(operator_norm(ComplexMatrix::identity(5)) == doctest::Approx(1.0));
  std::vector<double> d{0.3, -0.7};
  CHECK(operator_norm(ComplexMatrix::diagonal(d)) == doctest::Approx(0.7));

  ComplexMatrix anti{{cplx(0, 0.2), 0.0}, {0.0, cplx(0, 0.5)}};
  const auto ev = hermitian_eigenvalues(adjoint_matmul(anti, anti));
  CHECK(operator_norm(anti) == doctest::Approx(std::sqrt(ev.back())).epsilon(1e-14));
  CHECK(operator_norm(anti) == doctest::Approx(0.5));

  CHECK_THROWS_AS(operator_norm(ComplexMatrix()), DimensionError);

  // Rectangular: largest singular value of a rank-one matrix is |u||v|.
  ComplexVector u{1.0, 2.0, cplx(0, 2.0)};
  ComplexVector w{3.0, 4.0};
  CHECK(operator_norm(outer(u, w)) == doctest::Approx(3.0 * 5.0));
}

TEST_CASE("operator norm equals max |eigenvalue| for random Hermitian matrices") {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    const ComplexMatrix m = random_hermitian(rng, 2 + trial % 7);
    const auto ev = hermitian_eigenvalues(m);
    const double expected = std::max(std::abs(ev.front()), std::abs(ev.back()));
    CHECK(std::abs(operator_norm(m) - expected) <= 1e-10);
    // The non-Hermitian route agrees.
    CHECK(std::abs(std::sqrt(hermitian_eigenvalues(adjoint_matmul(m, m)).back()) - expected) <=
          1e-10 * (1.0 + expected));
  }
}

TEST_CASE("tensor product") {
  CHECK(tensor_product(ComplexMatrix::identity(2), ComplexMatrix::identity(2)) ==
        ComplexMatrix::identity(4));

  const double phi = 0.41;
  const cplx e = std::polar(1.0, phi);
  ComplexMatrix u{{1.0, 0.0}, {0.0, e}};
  const ComplexMatrix uu = tensor_product(u, u);
  const cplx expected[] = {1.0, e, e, e * e};
  for (std::size_t i = 0; i < 4; ++i) {
    CHECK(std::abs(uu(i, i) - expected[i]) <= 1e-15);
  }
  CHECK(max_abs(uu - ComplexMatrix::diagonal(std::span<const cplx>(expected))) <= 1e-15);

  std::mt19937_64 rng(4);
  const auto a = random_matrix(rng, 2, 2);
  const auto b = random_matrix(rng, 2, 2);
  const auto c = random_matrix(rng, 2, 2);
  const auto d = random_matrix(rng, 2, 2);
  CHECK(max_abs(matmul(tensor_product(a, b), tensor_product(c, d)) -
                tensor_product(matmul(a, c), matmul(b, d))) <= 1e-12);
}

TEST_CASE("tensor product is associative") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 10; ++trial) {
    const auto a = random_matrix(rng, 2, 3);
    const auto b = random_matrix(rng, 3, 2);
    const auto c = random_matrix(rng, 2, 2);
    CHECK(max_abs(tensor_product(tensor_product(a, b), c) -
                  tensor_product(a, tensor_product(b, c))) <= 1e-12);
  }
}

TEST_CASE("partial trace") {
  std::mt19937_64 rng(6);
  const auto ra = random_density(rng, 2);
  const auto rb = random_density(rng, 3);
  const std::size_t dims[] = {2, 3};
  const std::size_t keep_a[] = {0};
  const std::size_t keep_b[] = {1};
  const auto prod = tensor_product(ra, rb);
  CHECK(max_abs(partial_trace(prod, dims, keep_a) - ra) <= 1e-14);
  CHECK(max_abs(partial_trace(prod, dims, keep_b) - rb) <= 1e-14);

  // Bell state: either marginal is maximally mixed.
  const double s = 1.0 / std::sqrt(2.0);
  ComplexVector bell{s, 0.0, 0.0, s};
  const auto rho = outer(bell, bell);
  const std::size_t qubits[] = {2, 2};
  const ComplexMatrix half = 0.5 * ComplexMatrix::identity(2);
  CHECK(max_abs(partial_trace(rho, qubits, keep_a) - half) <= 1e-15);
  CHECK(max_abs(partial_trace(rho, qubits, keep_b) - half) <= 1e-15);

  const std::size_t all[] = {0, 1};
  CHECK(max_abs(partial_trace(prod, dims, all) - prod) == 0.0);

  const std::size_t wrong[] = {2, 2};
  CHECK_THROWS_AS(partial_trace(prod, wrong, keep_a), DimensionError);
  const std::size_t out_of_range[] = {3};
  CHECK_THROWS_AS(partial_trace(prod, dims, out_of_range), DimensionError);
}

TEST_CASE("partial trace is linear and trace preserving") {
  std::mt19937_64 rng(7);
  const std::size_t dims[] = {2, 3, 2};
  const std::size_t keep[] = {0, 2};
  for (int trial = 0; trial < 10; ++trial) {
    const auto x = random_matrix(rng, 12, 12);
    const auto y = random_matrix(rng, 12, 12);
    const cplx a(0.3, -0.8);
    const auto lhs = partial_trace(x + a * y, dims, keep);
    const auto rhs = partial_trace(x, dims, keep) + a * partial_trace(y, dims, keep);
    CHECK(max_abs(lhs - rhs) <= 1e-12);
    CHECK(std::abs(trace(partial_trace(x, dims, keep)) - trace(x)) <= 1e-12);
  }
}

TEST_CASE("kron_identity helpers match explicit Kronecker products") {
  std::mt19937_64 rng(8);
  const auto a = random_matrix(rng, 3, 2);
  const auto x = random_matrix(rng, 8, 5);
  const auto expected_left = matmul(tensor_product(a, ComplexMatrix::identity(4)), x);
  CHECK(max_abs(kron_identity_left(a, x, 4) - expected_left) <= 1e-12);

  const auto y = random_matrix(rng, 5, 12);
  const auto expected_right = matmul(y, tensor_product(a, ComplexMatrix::identity(4)));
  CHECK(max_abs(kron_identity_right(y, a, 4) - expected_right) <= 1e-12);
}

TEST_CASE("matrix product variants agree") {
  std::mt19937_64 rng(9);
  const auto a = random_matrix(rng, 4, 3);
  const auto b = random_matrix(rng, 4, 5);
  const auto c = random_matrix(rng, 6, 3);
  CHECK(max_abs(adjoint_matmul(a, b) - matmul(a.adjoint(), b)) <= 1e-13);
  CHECK(max_abs(matmul_adjoint(a, c) - matmul(a, c.adjoint())) <= 1e-13);
  CHECK_THROWS_AS(matmul(a, c), DimensionError);
  CHECK(std::abs(hs_inner(a, a).real() - frobenius_norm(a) * frobenius_norm(a)) <= 1e-12);
}

TEST_CASE("top eigenpair matches the full eigensystem") {
  std::mt19937_64 rng(9);
  for (std::size_t n : {1u, 2u, 5u, 40u, 130u}) {
    const ComplexMatrix m = random_hermitian(rng, n);
    const auto es = hermitian_eigensystem(m);
    const auto top = top_eigenpair(m);
    CHECK(top.value == doctest::Approx(es.eigenvalues.back()).epsilon(1e-12));
    const ComplexVector mv = matvec(m, top.vector);
    double res = 0.0;
    for (std::size_t i = 0; i < n; ++i) res += std::norm(mv[i] - top.value * top.vector[i]);
    CHECK(std::sqrt(res) < 1e-8 * std::max(1.0, std::abs(top.value)));
    CHECK(std::abs(vector_norm(top.vector) - 1.0) < 1e-12);
  }
  // Degenerate top eigenvalue: any vector in the eigenspace will do.
  ComplexMatrix d{{2.0, 0.0, 0.0}, {0.0, 2.0, 0.0}, {0.0, 0.0, -1.0}};
  const auto top = top_eigenpair(d);
  CHECK(top.value == doctest::Approx(2.0));
  CHECK(std::abs(top.vector[2]) < 1e-8);
}

TEST_CASE("eigensolvers handle low-rank matrices with large null spaces") {
  std::mt19937_64 rng(10);
  for (std::size_t n : {48u, 96u}) {
    const ComplexMatrix g = random_matrix(rng, n, 3);
    const ComplexMatrix m = hermitian_part(matmul_adjoint(g, g));
    const auto es = hermitian_eigensystem(m);
    const auto top = top_eigenpair(m);
    CHECK(top.value == doctest::Approx(es.eigenvalues.back()).epsilon(1e-12));
    for (std::size_t i = 0; i + 3 < n; ++i) CHECK(std::abs(es.eigenvalues[i]) < 1e-10 * top.value);
  }
}

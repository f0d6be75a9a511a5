#include <algorithm>
#include <cmath>
#include <exception>
#include <random>
#include <string>
#include <thread>

#include "qmetro/errors.hpp"
#include "qmetro/qfi.hpp"

namespace qmetro {

namespace {

// Output of (ch ⊗ id) on a pure input, kept in factored form. With the
// output rho = V V^dagger of rank s, the SLD is L = Z core Z^dagger where
// Z = [U | Y]: U spans the support and Y holds the off-support part of
// rho_dot U. Nothing of size D_out x D_out is ever formed.
struct FactoredSld {
  ComplexMatrix z;
  ComplexMatrix core;
  double qfi = 0.0;
};

struct Problem {
  const ChannelFamily& ch;
  std::size_t da;
  std::vector<ComplexMatrix> kraus_adj;
  std::vector<ComplexMatrix> kraus_dot_adj;

  Problem(const ChannelFamily& c, std::size_t ancilla) : ch(c), da(ancilla) {
    for (std::size_t k = 0; k < ch.kraus_count(); ++k) {
      kraus_adj.push_back(ch.kraus()[k].adjoint());
      kraus_dot_adj.push_back(ch.kraus_dot()[k].adjoint());
    }
  }

  std::size_t dim_in() const { return ch.dim_in() * da; }
  std::size_t dim_out() const { return ch.dim_out() * da; }

  FactoredSld factor(std::span<const cplx> psi) const {
    const std::size_t r = ch.kraus_count();
    const std::size_t dout = dim_out();
    const ComplexMatrix block(ch.dim_in(), da, ComplexVector(psi.begin(), psi.end()));
    ComplexMatrix v(dout, r);
    ComplexMatrix vd(dout, r);
    for (std::size_t k = 0; k < r; ++k) {
      const ComplexMatrix a = matmul(ch.kraus()[k], block);
      const ComplexMatrix ad = matmul(ch.kraus_dot()[k], block);
      for (std::size_t i = 0; i < dout; ++i) {
        v(i, k) = a.data()[i];
        vd(i, k) = ad.data()[i];
      }
    }

    const auto es = hermitian_eigensystem(adjoint_matmul(v, v));
    std::vector<std::size_t> support;
    for (std::size_t j = 0; j < r; ++j) {
      if (es.eigenvalues[j] > kSldCutoff) support.push_back(j);
    }
    const std::size_t s = support.size();
    if (s == 0) throw NumericError("see-saw output state vanished");

    std::vector<double> lam(s);
    ComplexMatrix w(r, s);
    for (std::size_t j = 0; j < s; ++j) {
      lam[j] = es.eigenvalues[support[j]];
      const double scale = 1.0 / std::sqrt(lam[j]);
      for (std::size_t i = 0; i < r; ++i) w(i, j) = es.eigenvectors(i, support[j]) * scale;
    }
    const ComplexMatrix u = matmul(v, w);
    // rho_dot U = Vd (V^dagger U) + V (Vd^dagger U)
    ComplexMatrix x = matmul(vd, adjoint_matmul(v, u));
    x += matmul(v, adjoint_matmul(vd, u));
    const ComplexMatrix a = hermitian_part(adjoint_matmul(u, x));
    const ComplexMatrix y = x - matmul(u, a);

    FactoredSld out{ComplexMatrix(dout, 2 * s), ComplexMatrix(2 * s, 2 * s), 0.0};
    double f_in = 0.0;
    double f_cross = 0.0;
    for (std::size_t i = 0; i < s; ++i) {
      for (std::size_t j = 0; j < s; ++j) {
        const double sum = lam[i] + lam[j];
        f_in += std::norm(a(i, j)) / sum;
        out.core(i, j) = 2.0 * a(i, j) / sum;
      }
      double col = 0.0;
      for (std::size_t row = 0; row < dout; ++row) col += std::norm(y(row, i));
      f_cross += col / lam[i];
      out.core(i, s + i) = 2.0 / lam[i];
      out.core(s + i, i) = 2.0 / lam[i];
    }
    for (std::size_t row = 0; row < dout; ++row) {
      for (std::size_t j = 0; j < s; ++j) {
        out.z(row, j) = u(row, j);
        out.z(row, s + j) = y(row, j);
      }
    }
    out.qfi = 2.0 * f_in + 4.0 * f_cross;
    return out;
  }

  // M(L) = sum_k 2 (K'^dagger L Kdot' + h.c.) - K'^dagger L^2 K', K' = K ⊗ I.
  // The r terms are stacked side by side so each sum is one wide product.
  ComplexMatrix objective_operator(const FactoredSld& l) const {
    const ComplexMatrix core_sq = matmul(matmul(l.core, adjoint_matmul(l.z, l.z)), l.core);
    const std::size_t w = l.z.cols();
    const std::size_t r = ch.kraus_count();
    const std::size_t n = dim_in();
    ComplexMatrix a_core(n, r * w), b(n, r * w), a(n, r * w), a_sq(n, r * w);
    auto place = [&](ComplexMatrix& dst, const ComplexMatrix& src, std::size_t k) {
      for (std::size_t i = 0; i < n; ++i) {
        std::copy(src.row(i).begin(), src.row(i).end(), dst.row(i).begin() + k * w);
      }
    };
    for (std::size_t k = 0; k < r; ++k) {
      const ComplexMatrix ak = kron_identity_left(kraus_adj[k], l.z, da);
      place(a, ak, k);
      place(a_core, matmul(ak, l.core), k);
      place(a_sq, matmul(ak, core_sq), k);
      place(b, kron_identity_left(kraus_dot_adj[k], l.z, da), k);
    }
    const ComplexMatrix cross = matmul_adjoint(a_core, b);
    ComplexMatrix m = cross + cross.adjoint();
    m *= 2.0;
    m -= matmul_adjoint(a_sq, a);
    return hermitian_part(m);
  }
};

struct RestartOutcome {
  double qfi = -1.0;
  ComplexVector input;
  int iterations = 0;
  bool converged = false;
  std::vector<double> trace;
};

std::uint64_t restart_seed(std::uint64_t base, int index) {
  std::seed_seq seq{static_cast<std::uint32_t>(base), static_cast<std::uint32_t>(base >> 32),
                    static_cast<std::uint32_t>(index)};
  std::uint32_t words[2];
  seq.generate(words, words + 2);
  return (std::uint64_t{words[0]} << 32) | words[1];
}

ComplexVector random_input(std::uint64_t seed, std::size_t n) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  ComplexVector v(n);
  for (auto& z : v) z = cplx(normal(rng), normal(rng));
  const double norm = vector_norm(v);
  for (auto& z : v) z /= norm;
  return v;
}

RestartOutcome run_restart(const Problem& p, const SeesawOptions& opts, int index) {
  RestartOutcome out;
  ComplexVector psi = random_input(restart_seed(opts.seed, index), p.dim_in());
  FactoredSld l = p.factor(psi);
  double f = l.qfi;
  int calm = 0;
  out.trace.push_back(f);
  for (int it = 1; it <= opts.max_iters; ++it) {
    ComplexVector next = top_eigenpair(p.objective_operator(l)).vector;
    FactoredSld l_next = p.factor(next);
    out.iterations = it;
    // Ascent is guaranteed in exact arithmetic; a drop beyond rounding means
    // the step is not trustworthy, so keep the previous input.
    if (l_next.qfi < f - 1e-9 * std::max(1.0, f)) break;
    const double change = std::abs(l_next.qfi - f);
    psi = std::move(next);
    l = std::move(l_next);
    f = std::max(f, l.qfi);
    out.trace.push_back(f);
    calm = change <= opts.tol * std::max(f, 1e-300) ? calm + 1 : 0;
    if (calm >= opts.patience) {
      out.converged = true;
      break;
    }
  }
  out.qfi = f;
  out.input = std::move(psi);
  return out;
}

void check_dims(const ChannelFamily& ch, std::size_t ancilla_dim, std::size_t cap) {
  if (ancilla_dim < 1) throw DomainError("ancilla_dim must be at least 1");
  const std::size_t big = std::max(ch.dim_in(), ch.dim_out());
  if (big > cap / ancilla_dim) {
    throw ResourceError("extended dimension " + std::to_string(big) + " x " +
                        std::to_string(ancilla_dim) + " exceeds cap " + std::to_string(cap));
  }
}

}  // namespace

std::size_t default_ancilla_dim(const ChannelFamily& ch) { return ch.kraus_count(); }

double output_qfi(const ChannelFamily& ch, std::size_t ancilla_dim, std::span<const cplx> input) {
  check_dims(ch, ancilla_dim, kDefaultDimensionCap);
  const Problem p(ch, ancilla_dim);
  if (input.size() != p.dim_in()) throw DimensionError("input has the wrong dimension");
  return p.factor(input).qfi;
}

SeesawResult optimize_input(const ChannelFamily& ch, std::size_t ancilla_dim,
                            const SeesawOptions& opts) {
  check_dims(ch, ancilla_dim, opts.dim_cap);
  if (opts.restarts < 1) throw DomainError("restarts must be at least 1");
  if (opts.max_iters < 1 || opts.patience < 1 || !(opts.tol > 0.0)) {
    throw DomainError("see-saw needs max_iters, patience >= 1 and tol > 0");
  }
  const Problem p(ch, ancilla_dim);

  std::vector<RestartOutcome> outcomes(static_cast<std::size_t>(opts.restarts));
  unsigned workers = opts.workers ? opts.workers : std::thread::hardware_concurrency();
  workers = std::clamp(workers, 1u, static_cast<unsigned>(opts.restarts));
  if (workers == 1) {
    for (int i = 0; i < opts.restarts; ++i) outcomes[i] = run_restart(p, opts, i);
  } else {
    std::vector<std::exception_ptr> errors(workers);
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        try {
          for (int i = static_cast<int>(w); i < opts.restarts; i += static_cast<int>(workers)) {
            outcomes[i] = run_restart(p, opts, i);
          }
        } catch (...) {
          errors[w] = std::current_exception();
        }
      });
    }
    for (auto& t : pool) t.join();
    for (auto& e : errors) {
      if (e) std::rethrow_exception(e);
    }
  }

  // Ties go to the lowest restart index so the result never depends on
  // scheduling.
  std::size_t best = 0;
  for (std::size_t i = 1; i < outcomes.size(); ++i) {
    if (outcomes[i].qfi > outcomes[best].qfi) best = i;
  }
  SeesawResult res;
  res.qfi = outcomes[best].qfi;
  res.optimal_input = std::move(outcomes[best].input);
  res.iterations = outcomes[best].iterations;
  res.restarts_used = opts.restarts;
  res.converged = outcomes[best].converged;
  res.objective_trace = std::move(outcomes[best].trace);
  return res;
}

}  // namespace qmetro

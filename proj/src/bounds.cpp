#include "qmetro/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "qmetro/detail/minimize.hpp"
#include "qmetro/errors.hpp"
#include "qmetro/qfi.hpp"

namespace qmetro {

namespace {

constexpr cplx kI{0.0, 1.0};

void require_n(std::size_t n) {
  if (n < 1) throw DomainError("N must be at least 1");
}

double lambda_max(const ComplexMatrix& herm) { return hermitian_eigenvalues(herm).back(); }

double beta_norm(const ComplexMatrix& beta) {
  return std::sqrt(std::max(0.0, lambda_max(hermitian_part(adjoint_matmul(beta, beta)))));
}

// Kraus list padded with zeros and the real parametrisation of generators:
// x = (h_00 .. h_rr, then Re h_kl, Im h_kl for k < l).
struct Representation {
  std::vector<ComplexMatrix> s;
  std::vector<ComplexMatrix> sd;
  std::size_t r = 0;
  std::size_t d = 0;

  Representation(const ChannelFamily& ch, std::size_t pad) : r(ch.kraus_count() + pad) {
    d = ch.dim_in();
    s = ch.kraus();
    sd = ch.kraus_dot();
    s.resize(r, ComplexMatrix(ch.dim_out(), d));
    sd.resize(r, ComplexMatrix(ch.dim_out(), d));
  }

  std::size_t params() const { return r * r; }

  ComplexMatrix generator(std::span<const double> x) const {
    ComplexMatrix h(r, r);
    std::size_t p = r;
    for (std::size_t k = 0; k < r; ++k) {
      h(k, k) = x[k];
      for (std::size_t l = k + 1; l < r; ++l, p += 2) {
        h(k, l) = cplx(x[p], x[p + 1]);
        h(l, k) = cplx(x[p], -x[p + 1]);
      }
    }
    return h;
  }

  // Real gradient from df = 2 Re sum_kl dh_kl g_kl.
  void real_gradient(const ComplexMatrix& g, std::span<double> out) const {
    std::size_t p = r;
    for (std::size_t k = 0; k < r; ++k) {
      out[k] = 2.0 * g(k, k).real();
      for (std::size_t l = k + 1; l < r; ++l, p += 2) {
        out[p] = 2.0 * (g(k, l) + g(l, k)).real();
        out[p + 1] = 2.0 * (g(l, k).imag() - g(k, l).imag());
      }
    }
  }

  std::vector<ComplexMatrix> rotated(const ComplexMatrix& h) const {
    std::vector<ComplexMatrix> m = sd;
    for (std::size_t k = 0; k < r; ++k) {
      for (std::size_t l = 0; l < r; ++l) {
        if (h(k, l) != cplx{}) m[k].add_scaled(-kI * h(k, l), s[l]);
      }
    }
    return m;
  }

  AlphaBeta alpha_beta(const std::vector<ComplexMatrix>& m) const {
    AlphaBeta ab{ComplexMatrix(d, d), ComplexMatrix(d, d)};
    for (std::size_t k = 0; k < r; ++k) {
      ab.alpha += adjoint_matmul(m[k], m[k]);
      ab.beta += adjoint_matmul(m[k], s[k]);
    }
    ab.alpha = hermitian_part(ab.alpha);
    return ab;
  }

  // Smoothed c_a lambda_max(alpha) + c_b lambda_max(beta^dagger beta).
  double smooth(std::span<const double> x, double t, std::span<double> grad, double c_a,
                double c_b) const {
    const auto m = rotated(generator(x));
    const AlphaBeta ab = alpha_beta(m);
    ComplexMatrix g(r, r);
    std::vector<double> w;
    double value = 0.0;
    if (c_a != 0.0) {
      const auto es = hermitian_eigensystem(ab.alpha);
      value += c_a * detail::smooth_max(es.eigenvalues, t / c_a, w);
      const ComplexMatrix weight = detail::weighted_projector(es, w);
      for (std::size_t l = 0; l < r; ++l) {
        const ComplexMatrix sl = matmul(s[l], weight);
        for (std::size_t k = 0; k < r; ++k) g(k, l) += -kI * c_a * hs_inner(m[k], sl);
      }
    }
    if (c_b != 0.0) {
      const auto es = hermitian_eigensystem(hermitian_part(adjoint_matmul(ab.beta, ab.beta)));
      value += c_b * detail::smooth_max(es.eigenvalues, t / c_b, w);
      const ComplexMatrix weight =
          matmul_adjoint(detail::weighted_projector(es, w), ab.beta);
      for (std::size_t k = 0; k < r; ++k) {
        const ComplexMatrix sk = matmul(s[k], weight);
        for (std::size_t l = 0; l < r; ++l) g(k, l) += -kI * c_b * std::conj(hs_inner(s[l], sk));
      }
    }
    real_gradient(g, grad);
    return value;
  }
};

void check_caps(const ChannelFamily& ch, std::size_t pad, const BoundOptions& opts) {
  if (ch.kraus_count() + pad > opts.kraus_cap) {
    throw ResourceError("Kraus count " + std::to_string(ch.kraus_count() + pad) +
                        " exceeds cap " + std::to_string(opts.kraus_cap));
  }
  if (std::max(ch.dim_in(), ch.dim_out()) > opts.dim_cap) {
    throw ResourceError("channel dimension exceeds cap " + std::to_string(opts.dim_cap));
  }
}

detail::MinimizeSettings settings_from(const BoundOptions& opts) {
  detail::MinimizeSettings s;
  s.max_iters = opts.max_iters;
  s.grad_tol = opts.grad_tol;
  return s;
}

BoundReport make_report(std::string_view scheme, std::size_t n, const Representation& rep,
                        const detail::MinimizeResult& res, std::span<const double> x,
                        std::size_t pad, double value) {
  BoundReport out;
  out.scheme = std::string(scheme);
  out.n = n;
  out.value = value;
  out.generator = {rep.generator(x)};
  out.residual_beta_norm = beta_norm(rep.alpha_beta(rep.rotated(out.generator.h)).beta);
  out.converged = res.converged;
  out.grad_norm = res.grad_norm;
  out.pad = pad;
  out.iterations = res.iterations;
  return out;
}

// Keeps the unpadded report unless padding strictly lowers the value.
template <typename Solve>
BoundReport with_padding(std::size_t pad, Solve solve) {
  BoundReport best = solve(0);
  if (pad > 0) {
    BoundReport padded = solve(pad);
    if (padded.value < best.value) best = std::move(padded);
  }
  return best;
}

BoundReport beta0_once(const ChannelFamily& ch, std::size_t pad, const BoundOptions& opts) {
  const Representation rep(ch, pad);
  const std::size_t nx = rep.params();
  const std::size_t d = rep.d;

  // Real matrix of the affine map x -> beta(x) - beta(0).
  const ComplexMatrix beta0 = rep.alpha_beta(rep.sd).beta;
  std::vector<std::vector<double>> cols(nx);
  std::vector<double> x(nx, 0.0);
  for (std::size_t j = 0; j < nx; ++j) {
    x[j] = 1.0;
    const ComplexMatrix b = rep.alpha_beta(rep.rotated(rep.generator(x))).beta - beta0;
    x[j] = 0.0;
    cols[j].reserve(2 * d * d);
    for (const cplx& z : b.entries()) {
      cols[j].push_back(z.real());
      cols[j].push_back(z.imag());
    }
  }
  std::vector<double> rhs;
  for (const cplx& z : beta0.entries()) {
    rhs.push_back(-z.real());
    rhs.push_back(-z.imag());
  }
  ComplexMatrix gram(nx, nx);
  std::vector<double> atb(nx, 0.0);
  for (std::size_t i = 0; i < nx; ++i) {
    for (std::size_t j = i; j < nx; ++j) {
      double v = 0.0;
      for (std::size_t q = 0; q < rhs.size(); ++q) v += cols[i][q] * cols[j][q];
      gram(i, j) = v;
      gram(j, i) = v;
    }
    for (std::size_t q = 0; q < rhs.size(); ++q) atb[i] += cols[i][q] * rhs[q];
  }
  const auto es = hermitian_eigensystem(gram);
  const double cut = 1e-10 * std::max(es.eigenvalues.back(), 1e-300);
  std::vector<double> xp(nx, 0.0);
  std::vector<std::vector<double>> null;
  for (std::size_t i = 0; i < nx; ++i) {
    std::vector<double> v(nx);
    for (std::size_t j = 0; j < nx; ++j) v[j] = es.eigenvectors(j, i).real();
    if (es.eigenvalues[i] > cut) {
      double c = 0.0;
      for (std::size_t j = 0; j < nx; ++j) c += v[j] * atb[j];
      c /= es.eigenvalues[i];
      for (std::size_t j = 0; j < nx; ++j) xp[j] += c * v[j];
    } else {
      null.push_back(std::move(v));
    }
  }
  const double residual = beta_norm(rep.alpha_beta(rep.rotated(rep.generator(xp))).beta);
  if (residual > opts.constraint_tol * std::max(1.0, beta_norm(beta0))) {
    throw ConstraintError("no Kraus generator gives beta = 0 for " + ch.label() +
                          " (least-squares residual " + std::to_string(residual) + ")");
  }

  const std::size_t nz = null.size();
  auto lift = [&](std::span<const double> z) {
    std::vector<double> full = xp;
    for (std::size_t i = 0; i < nz; ++i) {
      for (std::size_t j = 0; j < nx; ++j) full[j] += z[i] * null[i][j];
    }
    return full;
  };
  std::vector<double> gx(nx);
  auto smooth = [&](std::span<const double> z, double t, std::span<double> gz) {
    const double v = rep.smooth(lift(z), t, gx, 1.0, 0.0);
    for (std::size_t i = 0; i < nz; ++i) {
      double acc = 0.0;
      for (std::size_t j = 0; j < nx; ++j) acc += null[i][j] * gx[j];
      gz[i] = acc;
    }
    return v;
  };
  auto exact = [&](std::span<const double> z) {
    return lambda_max(rep.alpha_beta(rep.rotated(rep.generator(lift(z)))).alpha);
  };
  const auto res = detail::minimize_smoothed(smooth, exact, std::vector<double>(nz, 0.0),
                                             settings_from(opts));
  const auto xf = lift(res.x);
  return make_report(scheme_tag::asymptotic_beta0, 1, rep, res, xf, pad, 4.0 * res.value);
}

// Unconstrained minimisation of c_a ||alpha|| + c_b ||beta||^2 from h = 0.
detail::MinimizeResult minimize_free(const Representation& rep, double c_a, double c_b,
                                     const BoundOptions& opts) {
  auto smooth = [&](std::span<const double> x, double t, std::span<double> g) {
    return rep.smooth(x, t, g, c_a, c_b);
  };
  auto exact = [&](std::span<const double> x) {
    const AlphaBeta ab = rep.alpha_beta(rep.rotated(rep.generator(x)));
    double v = c_a * lambda_max(ab.alpha);
    if (c_b != 0.0) v += c_b * std::pow(beta_norm(ab.beta), 2);
    return v;
  };
  return detail::minimize_smoothed(smooth, exact, std::vector<double>(rep.params(), 0.0),
                                   settings_from(opts));
}

}  // namespace

ChannelFamily rotate(const ChannelFamily& ch, const KrausGenerator& g) {
  if (!g.h.is_square() || g.h.rows() < ch.kraus_count()) {
    throw DimensionError("generator size " + std::to_string(g.h.rows()) +
                         " does not cover " + std::to_string(ch.kraus_count()) +
                         " Kraus operators");
  }
  const Representation rep(ch, g.h.rows() - ch.kraus_count());
  return ChannelFamily(rep.s, rep.rotated(g.h), ch.label(), ch.eta());
}

AlphaBeta alpha_beta(const ChannelFamily& ch, const KrausGenerator& g) {
  if (!g.h.is_square() || g.h.rows() < ch.kraus_count()) {
    throw DimensionError("generator size " + std::to_string(g.h.rows()) +
                         " does not cover " + std::to_string(ch.kraus_count()) +
                         " Kraus operators");
  }
  const Representation rep(ch, g.h.rows() - ch.kraus_count());
  return rep.alpha_beta(rep.rotated(g.h));
}

double finite_n_bound_parallel(const AlphaBeta& ab, std::size_t n) {
  require_n(n);
  const double nn = static_cast<double>(n);
  const double b = beta_norm(ab.beta);
  return 4.0 * (nn * lambda_max(ab.alpha) + nn * (nn - 1.0) * b * b);
}

double finite_n_bound_parallel(const ChannelFamily& ch, const KrausGenerator& g, std::size_t n) {
  return finite_n_bound_parallel(alpha_beta(ch, g), n);
}

double finite_n_bound_adaptive(const AlphaBeta& ab, std::size_t n) {
  require_n(n);
  const double nn = static_cast<double>(n);
  const double a = lambda_max(ab.alpha);
  const double b = beta_norm(ab.beta);
  return 4.0 * (nn * a + nn * (nn - 1.0) * b * (a + b + 1.0));
}

double finite_n_bound_adaptive(const ChannelFamily& ch, const KrausGenerator& g, std::size_t n) {
  return finite_n_bound_adaptive(alpha_beta(ch, g), n);
}

BoundReport minimize_beta0(const ChannelFamily& ch, std::size_t pad, const BoundOptions& opts) {
  check_caps(ch, pad, opts);
  return with_padding(pad, [&](std::size_t z) { return beta0_once(ch, z, opts); });
}

BoundReport minimize_finite_parallel(const ChannelFamily& ch, std::size_t n, std::size_t pad,
                                     const BoundOptions& opts) {
  require_n(n);
  check_caps(ch, pad, opts);
  const double nn = static_cast<double>(n);
  return with_padding(pad, [&](std::size_t z) {
    const Representation rep(ch, z);
    const auto res = minimize_free(rep, nn, nn * (nn - 1.0), opts);
    return make_report(scheme_tag::finite_par, n, rep, res, res.x, z, 4.0 * res.value);
  });
}

BoundReport minimize_finite_adaptive(const ChannelFamily& ch, std::size_t n, std::size_t pad,
                                     const BoundOptions& opts) {
  require_n(n);
  std::vector<BoundReport> candidates;
  BoundReport zero;
  zero.generator = KrausGenerator::zero(ch.kraus_count());
  zero.converged = true;
  candidates.push_back(zero);
  candidates.push_back(minimize_finite_parallel(ch, n, pad, opts));
  try {
    candidates.push_back(minimize_beta0(ch, pad, opts));
  } catch (const ConstraintError&) {
  }
  BoundReport best;
  bool first = true;
  for (auto& c : candidates) {
    const double v = finite_n_bound_adaptive(ch, c.generator, n);
    if (first || v < best.value) {
      best = c;
      best.value = v;
      first = false;
    }
  }
  best.scheme = std::string(scheme_tag::finite_adaptive);
  best.n = n;
  best.pad = best.generator.h.rows() - ch.kraus_count();
  best.residual_beta_norm = beta_norm(alpha_beta(ch, best.generator).beta);
  return best;
}

BoundReport extended_channel_qfi(const ChannelFamily& ch, std::size_t pad,
                                 const BoundOptions& opts) {
  check_caps(ch, pad, opts);
  return with_padding(pad, [&](std::size_t z) {
    const Representation rep(ch, z);
    const auto res = minimize_free(rep, 1.0, 0.0, opts);
    return make_report(scheme_tag::extended_exact, 1, rep, res, res.x, z, 4.0 * res.value);
  });
}

double simulation_bound(const StateFamily& sigma, std::size_t n) {
  require_n(n);
  validate(sigma);
  return static_cast<double>(n) * qfi_value(sigma);
}

}  // namespace qmetro

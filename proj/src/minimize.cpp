#include "qmetro/detail/minimize.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <numeric>

namespace qmetro::detail {

double smooth_max(std::span<const double> eigenvalues, double t, std::vector<double>& weights) {
  const double top = eigenvalues.back();
  weights.assign(eigenvalues.size(), 0.0);
  double sum = 0.0;
  for (std::size_t i = 0; i < eigenvalues.size(); ++i) {
    weights[i] = std::exp((eigenvalues[i] - top) / t);
    sum += weights[i];
  }
  for (auto& w : weights) w /= sum;
  return top + t * std::log(sum);
}

ComplexMatrix weighted_projector(const HermitianEigensystem& es, std::span<const double> w) {
  const std::size_t n = es.eigenvectors.rows();
  ComplexMatrix scaled(n, w.size());
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < w.size(); ++c) scaled(r, c) = es.eigenvectors(r, c) * w[c];
  }
  return matmul_adjoint(scaled, es.eigenvectors);
}

namespace {

double dot(std::span<const double> a, std::span<const double> b) {
  return std::inner_product(a.begin(), a.end(), b.begin(), 0.0);
}

struct Pair {
  std::vector<double> s, y;
  double rho;
};

// Runs L-BFGS at fixed width t. Returns the number of iterations used.
int lbfgs_stage(const SmoothObjective& smooth, std::vector<double>& x, double t, int budget,
                int memory, double gtol, double& f, std::vector<double>& g) {
  const std::size_t n = x.size();
  f = smooth(x, t, g);
  std::deque<Pair> hist;
  std::vector<double> d(n), x_new(n), g_new(n), alpha(memory);
  int stall = 0;
  double best_gnorm = std::sqrt(dot(g, g));
  int it = 0;
  for (; it < budget; ++it) {
    if (std::sqrt(dot(g, g)) <= gtol) break;
    // Two-loop recursion.
    d = g;
    for (std::size_t i = hist.size(); i-- > 0;) {
      alpha[i] = hist[i].rho * dot(hist[i].s, d);
      for (std::size_t j = 0; j < n; ++j) d[j] -= alpha[i] * hist[i].y[j];
    }
    if (!hist.empty()) {
      const auto& last = hist.back();
      const double gamma = dot(last.s, last.y) / dot(last.y, last.y);
      for (auto& v : d) v *= gamma;
    } else {
      const double gn = std::sqrt(dot(g, g));
      for (auto& v : d) v *= std::min(1.0, t / gn);
    }
    for (std::size_t i = 0; i < hist.size(); ++i) {
      const double b = hist[i].rho * dot(hist[i].y, d);
      for (std::size_t j = 0; j < n; ++j) d[j] += hist[i].s[j] * (alpha[i] - b);
    }
    for (auto& v : d) v = -v;
    double slope = dot(g, d);
    if (!(slope < 0.0)) {
      hist.clear();
      d = g;
      for (auto& v : d) v = -v;
      slope = dot(g, d);
    }

    double step = 1.0;
    double f_new = 0.0;
    bool accepted = false;
    for (int ls = 0; ls < 60; ++ls) {
      for (std::size_t j = 0; j < n; ++j) x_new[j] = x[j] + step * d[j];
      f_new = smooth(x_new, t, g_new);
      if (!std::isfinite(f_new)) {
        step *= 0.5;
        continue;
      }
      // Armijo, or the approximate Wolfe test once value differences sink
      // into rounding: the directional derivative must not have overshot.
      const bool armijo = f_new <= f + 1e-4 * step * slope;
      const bool flat = f_new <= f + 1e-14 * std::abs(f) && dot(g_new, d) <= -(1.0 - 2e-4) * slope;
      if (armijo || flat) {
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) {
      if (hist.empty()) break;
      hist.clear();
      continue;
    }

    Pair p{std::vector<double>(n), std::vector<double>(n), 0.0};
    for (std::size_t j = 0; j < n; ++j) {
      p.s[j] = x_new[j] - x[j];
      p.y[j] = g_new[j] - g[j];
    }
    const double sy = dot(p.s, p.y);
    const double decrease = f - f_new;
    const double gnorm_new = std::sqrt(dot(g_new, g_new));
    x.swap(x_new);
    g.swap(g_new);
    f = f_new;
    if (sy > 1e-300) {
      p.rho = 1.0 / sy;
      hist.push_back(std::move(p));
      if (hist.size() > static_cast<std::size_t>(memory)) hist.pop_front();
    }
    const bool progress = decrease > 4.0 * std::numeric_limits<double>::epsilon() * std::abs(f) ||
                          gnorm_new < 0.9 * best_gnorm;
    best_gnorm = std::min(best_gnorm, gnorm_new);
    stall = progress ? 0 : stall + 1;
    if (stall >= 20) break;
  }
  return it;
}

}  // namespace

MinimizeResult minimize_smoothed(const SmoothObjective& smooth, const ExactObjective& exact,
                                 std::vector<double> x0, const MinimizeSettings& settings) {
  MinimizeResult res;
  res.x = std::move(x0);
  const std::size_t n = res.x.size();
  res.value = exact(res.x);
  if (n == 0) {
    res.converged = true;
    return res;
  }
  std::vector<double> g(n);
  double scale = std::max(res.value, 1e-300);
  double t = settings.t_start * scale;
  double f = 0.0;
  int used = 0;
  while (true) {
    const double gtol = settings.grad_tol * 1e-2 * std::max(1.0, res.value);
    used += lbfgs_stage(smooth, res.x, t, settings.max_iters - used, settings.memory, gtol, f, g);
    res.value = exact(res.x);
    if (t <= settings.t_stop * std::max(res.value, 1e-300) || used >= settings.max_iters) break;
    t = std::max(t * 0.1, 0.5 * settings.t_stop * std::max(res.value, 1e-300));
  }
  res.grad_norm = std::sqrt(dot(g, g));
  res.iterations = used;
  res.converged = res.grad_norm <= settings.grad_tol * std::max(1.0, res.value);
  return res;
}

}  // namespace qmetro::detail

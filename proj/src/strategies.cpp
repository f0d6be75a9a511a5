#include "qmetro/strategies.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "qmetro/errors.hpp"

namespace qmetro {

namespace {

void require_open_eta(double eta) {
  if (!(eta > 0.0 && eta < 1.0)) {
    throw DomainError("eta must lie in (0, 1), got " + std::to_string(eta));
  }
}

void require_n(std::size_t n) {
  if (n < 1) throw DomainError("N must be at least 1");
}

}  // namespace

std::string_view to_string(Scheme s) {
  switch (s) {
    case Scheme::sequential: return "i";
    case Scheme::parallel: return "ii";
    case Scheme::ancilla: return "iii";
    case Scheme::adaptive_bound: return "iv-bound";
    case Scheme::ancilla_free: return "knysh";
    case Scheme::universal: return "universal";
  }
  return "?";
}

Scheme parse_scheme(std::string_view name) {
  for (Scheme s : {Scheme::sequential, Scheme::parallel, Scheme::ancilla, Scheme::adaptive_bound,
                   Scheme::ancilla_free, Scheme::universal}) {
    if (to_string(s) == name) return s;
  }
  throw DomainError("unknown scheme '" + std::string(name) +
                    "' (expected i, ii, iii, iv-bound, knysh, universal)");
}

std::string_view to_string(Method m) {
  switch (m) {
    case Method::closed_form: return "closed-form";
    case Method::seesaw: return "seesaw";
    case Method::kraus_min: return "kraus-min";
    case Method::formula: return "formula";
  }
  return "?";
}

Method parse_method(std::string_view name) {
  for (Method m : {Method::closed_form, Method::seesaw, Method::kraus_min, Method::formula}) {
    if (to_string(m) == name) return m;
  }
  throw DomainError("unknown method '" + std::string(name) +
                    "' (expected closed-form, seesaw, kraus-min, formula)");
}

bool valid_combination(Scheme s, Method m) {
  switch (s) {
    case Scheme::sequential: return m == Method::closed_form || m == Method::seesaw;
    case Scheme::parallel: return m == Method::seesaw;
    case Scheme::ancilla: return m == Method::seesaw || m == Method::kraus_min;
    case Scheme::adaptive_bound:
    case Scheme::ancilla_free:
    case Scheme::universal: return m == Method::formula;
  }
  return false;
}

StrategyPoint make_point(NoiseModel model, double eta, std::size_t n, Scheme scheme,
                         Method method, double value) {
  if (!valid_combination(scheme, method)) {
    throw DomainError("scheme " + std::string(to_string(scheme)) + " has no method " +
                      std::string(to_string(method)));
  }
  return {model, eta, n, scheme, method, value, std::nullopt, true};
}

double sequential_closed_form(double eta, std::size_t n) {
  require_n(n);
  if (!(eta > 0.0 && eta <= 1.0)) {
    throw DomainError("eta must lie in (0, 1], got " + std::to_string(eta));
  }
  const double nn = static_cast<double>(n);
  if (eta == 1.0) return nn * nn;
  if (eta < std::exp(-1.0)) return nn * eta;
  if (eta <= std::exp(-1.0 / nn)) return nn / (std::numbers::e * std::log(1.0 / eta));
  return nn * nn * std::pow(eta, nn);
}

SequentialResult sequential_numeric(const ChannelFamily& ch, std::size_t n,
                                    const SeesawOptions& opts) {
  require_n(n);
  SequentialResult best{-1.0, 0, true};
  bool converged = true;
  ChannelFamily block = ch;
  for (std::size_t k = 1; k <= n; ++k) {
    if (k > 1) block = compress(compose(ch, block));
    const auto res = optimize_input(block, 1, opts);
    converged = converged && res.converged;
    const double score = static_cast<double>(n) / static_cast<double>(k) * res.qfi;
    if (score > best.value) best = {score, k, true};
  }
  best.converged = converged;
  return best;
}

StrategyPoint sequential_point(NoiseModel model, double eta, std::size_t n, Method method,
                               const StrategyOptions& opts) {
  if (method == Method::closed_form) {
    return make_point(model, eta, n, Scheme::sequential, method, sequential_closed_form(eta, n));
  }
  StrategyPoint p = make_point(model, eta, n, Scheme::sequential, method, 0.0);
  const auto res = sequential_numeric(make_channel(model, eta), n, opts.seesaw);
  p.value = res.value;
  p.best_n = res.best_n;
  p.converged = res.converged;
  return p;
}

StrategyPoint parallel_qfi(NoiseModel model, double eta, std::size_t n, bool ancilla,
                           Method method, const StrategyOptions& opts) {
  require_n(n);
  const Scheme scheme = ancilla ? Scheme::ancilla : Scheme::parallel;
  StrategyPoint p = make_point(model, eta, n, scheme, method, 0.0);
  const auto block = tensor_power(make_channel(model, eta), n, opts.seesaw.dim_cap);
  if (method == Method::kraus_min) {
    const auto rep = extended_channel_qfi(block, 0, opts.bounds);
    p.value = rep.value;
    p.converged = rep.converged;
    return p;
  }
  std::size_t da = 1;
  if (ancilla) da = opts.ancilla_dim ? opts.ancilla_dim : default_ancilla_dim(block);
  const auto res = optimize_input(block, da, opts.seesaw);
  p.value = res.qfi;
  p.converged = res.converged;
  return p;
}

StrategyPoint adaptive_bound_point(NoiseModel model, double eta, std::size_t n,
                                   const StrategyOptions& opts) {
  const auto rep = minimize_finite_adaptive(make_channel(model, eta), n, 0, opts.bounds);
  StrategyPoint p = make_point(model, eta, n, Scheme::adaptive_bound, Method::formula, rep.value);
  p.converged = rep.converged;
  return p;
}

double ancilla_free_bound(double eta, std::size_t n) {
  require_open_eta(eta);
  require_n(n);
  return static_cast<double>(n) * (eta / (1.0 - eta));
}

double universal_bound(double eta, std::size_t n) { return 4.0 * ancilla_free_bound(eta, n); }

std::vector<RatioPoint> ratio_curve(NoiseModel model, std::span<const double> eta_grid) {
  std::vector<RatioPoint> out;
  out.reserve(eta_grid.size());
  for (double eta : eta_grid) {
    require_open_eta(eta);
    const double parallel = eta / (1.0 - eta);
    const double sequential = 1.0 / (std::numbers::e * std::log(1.0 / eta));
    RatioPoint p{eta, parallel / sequential, std::nullopt};
    if (model == NoiseModel::amplitude_damping) p.ceiling = 4.0 * parallel / sequential;
    out.push_back(p);
  }
  return out;
}

std::vector<double> default_eta_grid() {
  std::vector<double> grid;
  for (int i = 1; i <= 99; ++i) grid.push_back(i / 100.0);
  grid.push_back(0.999);
  return grid;
}

std::vector<StrategyPoint> figure4_table(double eta, std::size_t n_max,
                                         const StrategyOptions& opts) {
  require_open_eta(eta);
  require_n(n_max);
  const NoiseModel ad = NoiseModel::amplitude_damping;
  std::vector<StrategyPoint> rows;
  for (std::size_t n = 1; n <= n_max; ++n) {
    rows.push_back(parallel_qfi(ad, eta, n, false, Method::seesaw, opts));
    rows.push_back(parallel_qfi(ad, eta, n, true, Method::kraus_min, opts));
    rows.push_back(make_point(ad, eta, n, Scheme::ancilla_free, Method::formula, ancilla_free_bound(eta, n)));
    rows.push_back(
        make_point(ad, eta, n, Scheme::universal, Method::formula, universal_bound(eta, n)));
  }
  return rows;
}

}  // namespace qmetro

#pragma once

// Scheme-level values: sequential (i), parallel (ii), passive ancilla (iii),
// the adaptive ceiling (iv) and the reference formulas they are compared to.

#include <cstddef>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "qmetro/bounds.hpp"
#include "qmetro/channels.hpp"
#include "qmetro/qfi.hpp"

namespace qmetro {

enum class Scheme { sequential, parallel, ancilla, adaptive_bound, ancilla_free, universal };
enum class Method { closed_form, seesaw, kraus_min, formula };

// "i", "ii", "iii", "iv-bound", "knysh", "universal"
std::string_view to_string(Scheme s);
Scheme parse_scheme(std::string_view name);
// "closed-form", "seesaw", "kraus-min", "formula"
std::string_view to_string(Method m);
Method parse_method(std::string_view name);

bool valid_combination(Scheme s, Method m);

struct StrategyPoint {
  NoiseModel model;
  double eta;
  std::size_t n;
  Scheme scheme;
  Method method;
  double value;
  std::optional<std::size_t> best_n;  // sequential numeric search only
  bool converged = true;              // false when an underlying solver stopped early
};

// Throws DomainError for a (scheme, method) pair outside the table.
StrategyPoint make_point(NoiseModel model, double eta, std::size_t n, Scheme scheme,
                         Method method, double value);

struct StrategyOptions {
  SeesawOptions seesaw;
  BoundOptions bounds;
  std::size_t ancilla_dim = 0;  // 0 = Kraus count of the N-probe channel
};

// Optimal sequential QFI with n treated as continuous:
//   eta < 1/e: N eta;  1/e <= eta <= e^{-1/N}: N / (e ln(1/eta));  else N^2 eta^N.
double sequential_closed_form(double eta, std::size_t n);

struct SequentialResult {
  double value;
  std::size_t best_n;
  bool converged;  // every block's see-saw converged
};

// max over integer n of (N/n) F(Lambda^n), F from the see-saw on one probe.
SequentialResult sequential_numeric(const ChannelFamily& ch, std::size_t n,
                                    const SeesawOptions& opts = {});

// Scheme (ii) without ancilla, (iii) with. Method seesaw or kraus-min (iii).
StrategyPoint parallel_qfi(NoiseModel model, double eta, std::size_t n, bool ancilla,
                           Method method = Method::seesaw, const StrategyOptions& opts = {});

StrategyPoint sequential_point(NoiseModel model, double eta, std::size_t n, Method method,
                               const StrategyOptions& opts = {});

// Adaptive ceiling from bounds::minimize_finite_adaptive.
StrategyPoint adaptive_bound_point(NoiseModel model, double eta, std::size_t n,
                                   const StrategyOptions& opts = {});

// N eta / (1 - eta) and 4 N eta / (1 - eta); eta must lie in (0, 1).
double ancilla_free_bound(double eta, std::size_t n);
double universal_bound(double eta, std::size_t n);

struct RatioPoint {
  double eta;
  double ratio;                  // e eta ln(1/eta) / (1 - eta)
  std::optional<double> ceiling; // amplitude damping: 4 * ratio
};

// Quotient of the asymptotic parallel bound N eta/(1-eta) and the continuous
// sequential optimum N/(e ln(1/eta)); independent of N.
std::vector<RatioPoint> ratio_curve(NoiseModel model, std::span<const double> eta_grid);

// 0.01, 0.02, ..., 0.99 and 0.999.
std::vector<double> default_eta_grid();

// Amplitude damping, N = 1..n_max: rows of (ii seesaw, iii kraus-min,
// ancilla-free ceiling, universal formula).
std::vector<StrategyPoint> figure4_table(double eta, std::size_t n_max,
                                         const StrategyOptions& opts = {});

}  // namespace qmetro

#pragma once

// Precision bounds from the freedom in choosing the Kraus representation.
//
// A representation is rotated locally by a Hermitian generator h:
//   Kt_k = K_k,   Ktdot_k = Kdot_k - i sum_l h_kl K_l
// and alpha = sum_k Ktdot_k^dagger Ktdot_k, beta = sum_k Ktdot_k^dagger K_k.
// A generator of size r + z pads the Kraus list with z zero operators.

#include <cstddef>
#include <string>
#include <string_view>

#include "qmetro/channels.hpp"
#include "qmetro/linalg.hpp"

namespace qmetro {

struct KrausGenerator {
  ComplexMatrix h;

  static KrausGenerator zero(std::size_t r) { return {ComplexMatrix(r, r)}; }
};

struct AlphaBeta {
  ComplexMatrix alpha;  // PSD
  ComplexMatrix beta;   // anti-Hermitian
};

namespace scheme_tag {
inline constexpr std::string_view asymptotic_beta0 = "asymptotic-beta0";
inline constexpr std::string_view finite_par = "finite-par";
inline constexpr std::string_view finite_adaptive = "finite-adaptive";
inline constexpr std::string_view extended_exact = "extended-exact";
inline constexpr std::string_view simulation = "simulation";
}  // namespace scheme_tag

struct BoundReport {
  std::string scheme;
  std::size_t n = 1;
  double value = 0.0;
  KrausGenerator generator;
  double residual_beta_norm = 0.0;  // ||beta|| at the returned generator
  bool converged = false;
  double grad_norm = 0.0;  // smoothed (epsilon-)subgradient norm, feasible directions only
  std::size_t pad = 0;     // zero Kraus operators in the reported generator
  int iterations = 0;
};

struct BoundOptions {
  double grad_tol = 1e-6;  // certificate threshold, relative to max(1, value)
  int max_iters = 50000;
  double constraint_tol = 1e-9;
  std::size_t kraus_cap = 64;
  std::size_t dim_cap = kDefaultDimensionCap;
};

// Rotated family: the same channel at the working point with derivatives
// Ktdot. Throws DimensionError when g is smaller than the Kraus count.
ChannelFamily rotate(const ChannelFamily& ch, const KrausGenerator& g);

AlphaBeta alpha_beta(const ChannelFamily& ch, const KrausGenerator& g);

// 4 [N ||alpha|| + N(N-1) ||beta||^2]
double finite_n_bound_parallel(const AlphaBeta& ab, std::size_t n);
double finite_n_bound_parallel(const ChannelFamily& ch, const KrausGenerator& g, std::size_t n);

// 4 [N ||alpha|| + N(N-1) ||beta|| (||alpha|| + ||beta|| + 1)]
double finite_n_bound_adaptive(const AlphaBeta& ab, std::size_t n);
double finite_n_bound_adaptive(const ChannelFamily& ch, const KrausGenerator& g, std::size_t n);

// Per-probe 4 min ||alpha|| over generators with beta = 0. Throws
// ConstraintError when no generator achieves beta = 0.
BoundReport minimize_beta0(const ChannelFamily& ch, std::size_t pad = 0,
                           const BoundOptions& opts = {});

// min over h of the finite-N parallel bound.
BoundReport minimize_finite_parallel(const ChannelFamily& ch, std::size_t n, std::size_t pad = 0,
                                     const BoundOptions& opts = {});

// Smallest adaptive bound among the generators from minimize_beta0 (when
// feasible), minimize_finite_parallel and h = 0. An upper bound on the true
// minimum, which is not a convex problem.
BoundReport minimize_finite_adaptive(const ChannelFamily& ch, std::size_t n, std::size_t pad = 0,
                                     const BoundOptions& opts = {});

// 4 min ||alpha|| without constraint: the exact QFI of ch ⊗ id.
// ResourceError past opts.kraus_cap or opts.dim_cap.
BoundReport extended_channel_qfi(const ChannelFamily& ch, std::size_t pad = 0,
                                 const BoundOptions& opts = {});

// N * F(sigma) for a user-supplied simulation resource family.
double simulation_bound(const StateFamily& sigma, std::size_t n);

}  // namespace qmetro

#pragma once

// Smoothed minimisation of convex max-eigenvalue objectives.
//
// lambda_max is replaced by t * log sum exp(lambda_i / t), which overshoots
// by at most t log n and has gradient V diag(softmax) V^dagger. L-BFGS with
// Armijo backtracking is run on a decreasing ladder of t.

#include <functional>
#include <span>
#include <vector>

#include "qmetro/linalg.hpp"

namespace qmetro::detail {

// Smoothed max of ascending eigenvalues; fills softmax weights.
double smooth_max(std::span<const double> eigenvalues, double t, std::vector<double>& weights);

// V diag(w) V^dagger
ComplexMatrix weighted_projector(const HermitianEigensystem& es, std::span<const double> w);

// Smoothed value at x for smoothing width t; writes the gradient.
using SmoothObjective = std::function<double(std::span<const double> x, double t,
                                             std::span<double> grad)>;
using ExactObjective = std::function<double(std::span<const double> x)>;

struct MinimizeSettings {
  int max_iters = 50000;  // L-BFGS iterations summed over all stages
  int memory = 12;
  double t_start = 1e-1;  // relative to the starting value
  double t_stop = 1e-8;   // relative to the current value
  double grad_tol = 1e-6;
};

struct MinimizeResult {
  std::vector<double> x;
  double value = 0.0;      // exact objective at x
  double grad_norm = 0.0;  // smoothed gradient norm at the final width
  int iterations = 0;
  bool converged = false;  // grad_norm <= grad_tol * max(1, value)
};

MinimizeResult minimize_smoothed(const SmoothObjective& smooth, const ExactObjective& exact,
                                 std::vector<double> x0, const MinimizeSettings& settings);

}  // namespace qmetro::detail

#pragma once

// Quantum Fisher information of differentiable state families and see-saw
// maximisation of the output QFI over input probe states.

#include <cstdint>
#include <span>
#include <vector>

#include "qmetro/channels.hpp"
#include "qmetro/linalg.hpp"

namespace qmetro {

// Pairs of eigenvalues with lambda_i + lambda_j at or below this cutoff are
// excluded from the SLD; it keeps pure and rank-deficient states exact.
constexpr double kSldCutoff = 1e-12;

// Throws DomainError unless rho is a unit-trace PSD Hermitian matrix and
// rho_dot is a traceless Hermitian matrix of the same size.
void validate(const StateFamily& f, double tol = kTraceTol);

// Symmetric logarithmic derivative: Hermitian L with
// rho_dot = (L rho + rho L) / 2 on the support of rho, zero off the support.
ComplexMatrix sld(const StateFamily& f);

// F = 2 sum_{ij} |<i|rho_dot|j>|^2 / (lambda_i + lambda_j) in the eigenbasis
// of rho, i.e. Tr(rho L^2).
double qfi_value(const StateFamily& f);

// 4 (<psi_dot|psi_dot> - |<psi|psi_dot>|^2) for a normalised pure family.
double qfi_pure(std::span<const cplx> psi, std::span<const cplx> psi_dot);

struct SeesawOptions {
  int restarts = 20;
  int max_iters = 2000;
  double tol = 1e-10;
  int patience = 5;
  std::uint64_t seed = 20140512;
  std::size_t dim_cap = kDefaultDimensionCap;
  // Worker threads for restarts; 0 picks std::thread::hardware_concurrency().
  unsigned workers = 0;
};

struct SeesawResult {
  double qfi = 0.0;
  ComplexVector optimal_input;  // on system ⊗ ancilla, system index major
  int iterations = 0;           // iterations of the winning restart
  int restarts_used = 0;
  bool converged = false;
  // QFI after each iteration of the winning restart; non-decreasing.
  std::vector<double> objective_trace;
};

// Number of Kraus operators of ch: an ancilla of this size purifies any
// input for the extended channel.
std::size_t default_ancilla_dim(const ChannelFamily& ch);

// Alternating maximisation of J(rho, L) = 2 Tr(rho_dot_out L) - Tr(rho_out L^2)
// over pure inputs of (ch ⊗ id_ancilla). ancilla_dim = 1 means no ancilla.
// Throws ResourceError when the extended dimension exceeds opts.dim_cap.
SeesawResult optimize_input(const ChannelFamily& ch, std::size_t ancilla_dim,
                            const SeesawOptions& opts = {});

// QFI of the output of (ch ⊗ id_ancilla) for a given pure input.
double output_qfi(const ChannelFamily& ch, std::size_t ancilla_dim,
                  std::span<const cplx> input);

}  // namespace qmetro

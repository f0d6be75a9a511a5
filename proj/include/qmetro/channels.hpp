#pragma once

// Phase-encoding noise channels in Kraus form, together with the derivative
// of every Kraus operator with respect to the phase at the working point.

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "qmetro/linalg.hpp"

namespace qmetro {

enum class NoiseModel { dephasing, erasure, amplitude_damping };

// CLI spellings: "dephasing", "erasure", "amplitude-damping".
std::string_view to_string(NoiseModel model);
NoiseModel parse_noise_model(std::string_view name);

constexpr std::size_t kDefaultDimensionCap = 4096;
constexpr double kTraceTol = 1e-10;

// Derivative pair of a state at the working point.
struct StateFamily {
  ComplexMatrix rho;
  ComplexMatrix rho_dot;
};

class ChannelFamily {
 public:
  // Validates shapes; kraus_dot[k] is the phase derivative of kraus[k].
  ChannelFamily(std::vector<ComplexMatrix> kraus, std::vector<ComplexMatrix> kraus_dot,
                std::string label, std::optional<double> eta = std::nullopt);

  std::size_t dim_in() const noexcept { return dim_in_; }
  std::size_t dim_out() const noexcept { return dim_out_; }
  std::size_t kraus_count() const noexcept { return kraus_.size(); }
  const std::vector<ComplexMatrix>& kraus() const noexcept { return kraus_; }
  const std::vector<ComplexMatrix>& kraus_dot() const noexcept { return kraus_dot_; }
  const std::string& label() const noexcept { return label_; }
  const std::optional<double>& eta() const noexcept { return eta_; }

  // max |sum_k K_k^dagger K_k - I|
  double trace_preservation_defect() const;
  // sum_k Kdot_k^dagger K_k, anti-Hermitian for a trace-preserving family.
  ComplexMatrix beta() const;

 private:
  std::size_t dim_in_ = 0;
  std::size_t dim_out_ = 0;
  std::vector<ComplexMatrix> kraus_;
  std::vector<ComplexMatrix> kraus_dot_;
  std::string label_;
  std::optional<double> eta_;
};

// diag(1, e^{i phi}) for dim 2; diag(1, e^{i phi}, 1) for the erasure space.
ComplexMatrix phase_unitary(double phi, std::size_t dim = 2);

// Noise Kraus operators are evaluated as K_k U_phi. The working point is
// phi = 0 unless stated; a non-zero phi exists for finite-difference checks.
ChannelFamily make_dephasing(double eta, double phi = 0.0);
ChannelFamily make_erasure(double eta, double phi = 0.0);
ChannelFamily make_amplitude_damping(double eta, double phi = 0.0);
ChannelFamily make_channel(NoiseModel model, double eta, double phi = 0.0);

// Parameter-independent identity channel on `dim` levels.
ChannelFamily identity_channel(std::size_t dim);

// outer o inner, Kraus operators K_out K_in with product-rule derivatives.
ChannelFamily compose(const ChannelFamily& outer, const ChannelFamily& inner);

// n-fold self composition, compressing the Kraus set after each step.
ChannelFamily compose_power(const ChannelFamily& ch, std::size_t n);

// a ⊗ b with Leibniz-rule derivatives.
ChannelFamily tensor_product(const ChannelFamily& a, const ChannelFamily& b);

// ch^{⊗n}; throws DomainError for n < 1 and ResourceError when the input or
// output dimension would exceed `dim_cap`.
ChannelFamily tensor_power(const ChannelFamily& ch, std::size_t n,
                           std::size_t dim_cap = kDefaultDimensionCap);

// ch ⊗ id_{ancilla_dim}.
ChannelFamily extend(const ChannelFamily& ch, std::size_t ancilla_dim);

// Equivalent Kraus set of minimal size: operators are remixed by the
// eigenvectors of the Gram matrix Tr(K_k^dagger K_l) and directions with
// relative weight below `tol` are dropped. A dropped operator vanishes at the
// working point, so the output state and its first derivative are unchanged.
ChannelFamily compress(const ChannelFamily& ch, double tol = 1e-14);

// Output state and its phase derivative. Rejects inputs that are not unit
// trace, Hermitian and positive semidefinite within kTraceTol.
StateFamily apply(const ChannelFamily& ch, const ComplexMatrix& rho);

// Same without validating rho; used on trusted intermediate states.
StateFamily apply_unchecked(const ChannelFamily& ch, const ComplexMatrix& rho);

}  // namespace qmetro

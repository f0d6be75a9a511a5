#include "qmetro/channels.hpp"

#include <cmath>
#include <string>

#include "qmetro/errors.hpp"

namespace qmetro {

namespace {

void require_eta(double eta) {
  if (!(eta > 0.0 && eta <= 1.0)) {
    throw DomainError("eta must lie in (0, 1], got " + std::to_string(eta));
  }
}

// K U_phi and K U_phi (i P1), where P1 projects on the phase-carrying level.
std::pair<ComplexMatrix, ComplexMatrix> encode(const ComplexMatrix& k, double phi) {
  const ComplexMatrix u = phase_unitary(phi, k.cols());
  ComplexMatrix ku = matmul(k, u);
  ComplexMatrix generator(k.cols(), k.cols());
  generator(1, 1) = cplx(0.0, 1.0);
  ComplexMatrix kdot = matmul(ku, generator);
  return {std::move(ku), std::move(kdot)};
}

ChannelFamily encoded_family(const std::vector<ComplexMatrix>& noise, double phi,
                             std::string label, double eta) {
  std::vector<ComplexMatrix> kraus;
  std::vector<ComplexMatrix> kraus_dot;
  for (const auto& k : noise) {
    auto [ku, kdot] = encode(k, phi);
    kraus.push_back(std::move(ku));
    kraus_dot.push_back(std::move(kdot));
  }
  return ChannelFamily(std::move(kraus), std::move(kraus_dot), std::move(label), eta);
}

}  // namespace

std::string_view to_string(NoiseModel model) {
  switch (model) {
    case NoiseModel::dephasing:
      return "dephasing";
    case NoiseModel::erasure:
      return "erasure";
    case NoiseModel::amplitude_damping:
      return "amplitude-damping";
  }
  return "unknown";
}

NoiseModel parse_noise_model(std::string_view name) {
  if (name == "dephasing") return NoiseModel::dephasing;
  if (name == "erasure") return NoiseModel::erasure;
  if (name == "amplitude-damping") return NoiseModel::amplitude_damping;
  throw DomainError("unknown noise model '" + std::string(name) +
                    "' (expected dephasing, erasure or amplitude-damping)");
}

ChannelFamily::ChannelFamily(std::vector<ComplexMatrix> kraus,
                             std::vector<ComplexMatrix> kraus_dot, std::string label,
                             std::optional<double> eta)
    : kraus_(std::move(kraus)),
      kraus_dot_(std::move(kraus_dot)),
      label_(std::move(label)),
      eta_(eta) {
  if (kraus_.empty()) {
    throw DimensionError("channel needs at least one Kraus operator");
  }
  if (kraus_.size() != kraus_dot_.size()) {
    throw DimensionError("kraus and kraus_dot lengths differ");
  }
  dim_out_ = kraus_.front().rows();
  dim_in_ = kraus_.front().cols();
  for (std::size_t k = 0; k < kraus_.size(); ++k) {
    for (const ComplexMatrix* m : {&kraus_[k], &kraus_dot_[k]}) {
      if (m->rows() != dim_out_ || m->cols() != dim_in_) {
        throw DimensionError("Kraus operator " + std::to_string(k) + " has shape " +
                             std::to_string(m->rows()) + "x" + std::to_string(m->cols()));
      }
    }
  }
}

double ChannelFamily::trace_preservation_defect() const {
  ComplexMatrix sum(dim_in_, dim_in_);
  for (const auto& k : kraus_) {
    sum += adjoint_matmul(k, k);
  }
  return max_abs(sum - ComplexMatrix::identity(dim_in_));
}

ComplexMatrix ChannelFamily::beta() const {
  ComplexMatrix b(dim_in_, dim_in_);
  for (std::size_t k = 0; k < kraus_.size(); ++k) {
    b += adjoint_matmul(kraus_dot_[k], kraus_[k]);
  }
  return b;
}

ComplexMatrix phase_unitary(double phi, std::size_t dim) {
  if (dim != 2 && dim != 3) {
    throw DimensionError("phase unitary is defined on 2 or 3 levels");
  }
  ComplexMatrix u = ComplexMatrix::identity(dim);
  u(1, 1) = std::polar(1.0, phi);
  return u;
}

ChannelFamily make_dephasing(double eta, double phi) {
  require_eta(eta);
  const double root = std::sqrt(eta);
  const double a = std::sqrt((1.0 + root) / 2.0);
  const double b = std::sqrt((1.0 - root) / 2.0);
  ComplexMatrix k0{{a, 0.0}, {0.0, a}};
  ComplexMatrix k1{{b, 0.0}, {0.0, -b}};
  return encoded_family({k0, k1}, phi, "dephasing", eta);
}

ChannelFamily make_erasure(double eta, double phi) {
  require_eta(eta);
  const double keep = std::sqrt(eta);
  const double lose = std::sqrt(1.0 - eta);
  ComplexMatrix k0(3, 3);
  k0(0, 0) = keep;
  k0(1, 1) = keep;
  ComplexMatrix k1(3, 3);
  k1(2, 2) = 1.0;
  ComplexMatrix k2(3, 3);
  k2(2, 0) = lose;
  ComplexMatrix k3(3, 3);
  k3(2, 1) = lose;
  return encoded_family({k0, k1, k2, k3}, phi, "erasure", eta);
}

ChannelFamily make_amplitude_damping(double eta, double phi) {
  require_eta(eta);
  ComplexMatrix k0{{1.0, 0.0}, {0.0, std::sqrt(eta)}};
  ComplexMatrix k1{{0.0, std::sqrt(1.0 - eta)}, {0.0, 0.0}};
  return encoded_family({k0, k1}, phi, "amplitude-damping", eta);
}

ChannelFamily make_channel(NoiseModel model, double eta, double phi) {
  switch (model) {
    case NoiseModel::dephasing:
      return make_dephasing(eta, phi);
    case NoiseModel::erasure:
      return make_erasure(eta, phi);
    case NoiseModel::amplitude_damping:
      return make_amplitude_damping(eta, phi);
  }
  throw DomainError("unknown noise model");
}

ChannelFamily identity_channel(std::size_t dim) {
  if (dim == 0) {
    throw DimensionError("identity channel needs dim >= 1");
  }
  return ChannelFamily({ComplexMatrix::identity(dim)}, {ComplexMatrix(dim, dim)}, "identity");
}

ChannelFamily compose(const ChannelFamily& outer, const ChannelFamily& inner) {
  if (inner.dim_out() != outer.dim_in()) {
    throw DimensionError("compose: inner output dimension " + std::to_string(inner.dim_out()) +
                         " != outer input dimension " + std::to_string(outer.dim_in()));
  }
  std::vector<ComplexMatrix> kraus;
  std::vector<ComplexMatrix> kraus_dot;
  kraus.reserve(outer.kraus_count() * inner.kraus_count());
  kraus_dot.reserve(kraus.capacity());
  for (std::size_t a = 0; a < outer.kraus_count(); ++a) {
    for (std::size_t b = 0; b < inner.kraus_count(); ++b) {
      kraus.push_back(matmul(outer.kraus()[a], inner.kraus()[b]));
      kraus_dot.push_back(matmul(outer.kraus_dot()[a], inner.kraus()[b]) +
                          matmul(outer.kraus()[a], inner.kraus_dot()[b]));
    }
  }
  std::optional<double> eta;
  std::string label;
  if (outer.label() == inner.label() && outer.eta() && inner.eta()) {
    eta = *outer.eta() * *inner.eta();
    label = outer.label();
  } else {
    label = outer.label() + "*" + inner.label();
  }
  return ChannelFamily(std::move(kraus), std::move(kraus_dot), std::move(label), eta);
}

ChannelFamily compose_power(const ChannelFamily& ch, std::size_t n) {
  if (n < 1) {
    throw DomainError("compose_power needs n >= 1");
  }
  if (ch.dim_in() != ch.dim_out()) {
    throw DimensionError("compose_power needs a channel with equal input and output spaces");
  }
  ChannelFamily acc = compress(ch);
  for (std::size_t i = 1; i < n; ++i) {
    acc = compress(compose(ch, acc));
  }
  return acc;
}

ChannelFamily tensor_product(const ChannelFamily& a, const ChannelFamily& b) {
  std::vector<ComplexMatrix> kraus;
  std::vector<ComplexMatrix> kraus_dot;
  kraus.reserve(a.kraus_count() * b.kraus_count());
  kraus_dot.reserve(kraus.capacity());
  for (std::size_t i = 0; i < a.kraus_count(); ++i) {
    for (std::size_t j = 0; j < b.kraus_count(); ++j) {
      kraus.push_back(tensor_product(a.kraus()[i], b.kraus()[j]));
      kraus_dot.push_back(tensor_product(a.kraus_dot()[i], b.kraus()[j]) +
                          tensor_product(a.kraus()[i], b.kraus_dot()[j]));
    }
  }
  std::optional<double> eta;
  if (a.eta() && b.eta() && *a.eta() == *b.eta()) {
    eta = a.eta();
  }
  return ChannelFamily(std::move(kraus), std::move(kraus_dot), a.label() + "(x)" + b.label(),
                       eta);
}

ChannelFamily tensor_power(const ChannelFamily& ch, std::size_t n, std::size_t dim_cap) {
  if (n < 1) {
    throw DomainError("tensor_power needs n >= 1");
  }
  std::size_t dim_in = 1;
  std::size_t dim_out = 1;
  for (std::size_t i = 0; i < n; ++i) {
    dim_in *= ch.dim_in();
    dim_out *= ch.dim_out();
    if (dim_in > dim_cap || dim_out > dim_cap) {
      throw ResourceError("tensor_power: dimension of " + std::to_string(n) +
                          " copies exceeds cap " + std::to_string(dim_cap));
    }
  }
  if (n == 1) {
    return ch;
  }
  ChannelFamily acc = ch;
  for (std::size_t i = 1; i < n; ++i) {
    acc = tensor_product(acc, ch);
  }
  return ChannelFamily(acc.kraus(), acc.kraus_dot(),
                       ch.label() + "^" + std::to_string(n), ch.eta());
}

ChannelFamily extend(const ChannelFamily& ch, std::size_t ancilla_dim) {
  if (ancilla_dim <= 1) {
    return ch;
  }
  return tensor_product(ch, identity_channel(ancilla_dim));
}

ChannelFamily compress(const ChannelFamily& ch, double tol) {
  const std::size_t r = ch.kraus_count();
  ComplexMatrix gram(r, r);
  for (std::size_t k = 0; k < r; ++k) {
    for (std::size_t l = k; l < r; ++l) {
      const cplx g = hs_inner(ch.kraus()[k], ch.kraus()[l]);
      gram(k, l) = g;
      gram(l, k) = std::conj(g);
    }
  }
  const auto es = hermitian_eigensystem(gram);
  const double top = std::max(es.eigenvalues.back(), 0.0);

  std::vector<ComplexMatrix> kraus;
  std::vector<ComplexMatrix> kraus_dot;
  // Largest weights first so the leading operators are the dominant ones.
  for (std::size_t j = r; j-- > 0;) {
    if (es.eigenvalues[j] <= tol * top) {
      continue;
    }
    ComplexMatrix k(ch.dim_out(), ch.dim_in());
    ComplexMatrix kd(ch.dim_out(), ch.dim_in());
    for (std::size_t l = 0; l < r; ++l) {
      const cplx w = es.eigenvectors(l, j);
      k.add_scaled(w, ch.kraus()[l]);
      kd.add_scaled(w, ch.kraus_dot()[l]);
    }
    kraus.push_back(std::move(k));
    kraus_dot.push_back(std::move(kd));
  }
  return ChannelFamily(std::move(kraus), std::move(kraus_dot), ch.label(), ch.eta());
}

StateFamily apply_unchecked(const ChannelFamily& ch, const ComplexMatrix& rho) {
  if (rho.rows() != ch.dim_in() || rho.cols() != ch.dim_in()) {
    throw DimensionError("apply: state is " + std::to_string(rho.rows()) + "x" +
                         std::to_string(rho.cols()) + ", channel input dimension is " +
                         std::to_string(ch.dim_in()));
  }
  StateFamily out{ComplexMatrix(ch.dim_out(), ch.dim_out()),
                  ComplexMatrix(ch.dim_out(), ch.dim_out())};
  for (std::size_t k = 0; k < ch.kraus_count(); ++k) {
    const ComplexMatrix k_rho = matmul(ch.kraus()[k], rho);
    out.rho += matmul_adjoint(k_rho, ch.kraus()[k]);
    const ComplexMatrix cross = matmul_adjoint(k_rho, ch.kraus_dot()[k]);
    out.rho_dot += cross;
    out.rho_dot += cross.adjoint();
  }
  out.rho = hermitian_part(out.rho);
  out.rho_dot = hermitian_part(out.rho_dot);
  return out;
}

StateFamily apply(const ChannelFamily& ch, const ComplexMatrix& rho) {
  if (rho.rows() != ch.dim_in() || rho.cols() != ch.dim_in()) {
    throw DimensionError("apply: state is " + std::to_string(rho.rows()) + "x" +
                         std::to_string(rho.cols()) + ", channel input dimension is " +
                         std::to_string(ch.dim_in()));
  }
  if (!is_hermitian(rho, kTraceTol)) {
    throw DomainError("apply: input state is not Hermitian");
  }
  if (std::abs(trace(rho) - 1.0) > kTraceTol) {
    throw DomainError("apply: input state does not have unit trace");
  }
  if (hermitian_eigenvalues(rho).front() < -kTraceTol) {
    throw DomainError("apply: input state is not positive semidefinite");
  }
  return apply_unchecked(ch, rho);
}

}  // namespace qmetro

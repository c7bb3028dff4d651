#include <algorithm>
#include <cmath>
#include <limits>

#include "headsim/tmm.hpp"

namespace headsim::tmm {
namespace {

// (1 - e^{-x}) / x, accurate as x -> 0.
Complex one_minus_exp_over(Complex x) {
  if (std::abs(x) < 1e-5) return 1.0 - x / 2.0 + x * x / 6.0;
  return (1.0 - std::exp(-x)) / x;
}

// ∫_0^d e^{-sz} dz
Complex exp_integral(Complex s, double d) { return d * one_minus_exp_over(s * d); }

Complex medium_eps(const dielectrics::TissueRecord& t, double f) {
  return dielectrics::complex_permittivity(t.dispersion, f);
}

}  // namespace

Complex wave_impedance(Complex eps) {
  if (eps == Complex{0.0, 0.0}) throw DomainError("wave_impedance: zero permittivity");
  return kFreeSpaceImpedance / std::sqrt(eps);
}

Complex propagation_constant(Complex eps, double frequency) {
  if (!(frequency > 0.0)) throw DomainError("propagation_constant: frequency must be positive");
  const double k0 = 2.0 * kPi * frequency / kSpeedOfLight;
  return Complex{0.0, k0} * std::sqrt(eps);
}

Complex LayerWave::e(double z) const {
  return forward * std::exp(-gamma * z) + backward * std::exp(-gamma * (thickness - z));
}

Complex LayerWave::h(double z) const {
  return (forward * std::exp(-gamma * z) - backward * std::exp(-gamma * (thickness - z))) / eta;
}

double PlaneWaveSolution::reflectance() const { return std::norm(gamma); }

double PlaneWaveSolution::transmittance() const {
  return std::norm(t) * (1.0 / eta_back).real() / (1.0 / eta_front).real();
}

double PlaneWaveSolution::absorptance() const {
  const double omega = 2.0 * kPi * frequency;
  double absorbed = 0.0;
  for (const auto& w : layers) {
    const double loss = -w.eps.imag();
    if (loss <= 0.0) continue;
    const double alpha = w.gamma.real();
    const double beta = w.gamma.imag();
    const double d = w.thickness;
    const double decay = exp_integral(Complex{2.0 * alpha, 0.0}, d).real();
    const Complex cross = w.forward * std::conj(w.backward) * std::exp(-std::conj(w.gamma) * d) *
                          exp_integral(Complex{0.0, 2.0 * beta}, d);
    const double e2 = (std::norm(w.forward) + std::norm(w.backward)) * decay + 2.0 * cross.real();
    absorbed += omega * kVacuumPermittivity * loss * e2;
  }
  return absorbed / (1.0 / eta_front).real();
}

PlaneWaveSolution solve_stack(const dielectrics::LayerStack& stack, double frequency) {
  if (!(frequency > 0.0)) throw DomainError("solve_stack: frequency must be positive");
  PlaneWaveSolution sol;
  sol.frequency = frequency;
  sol.eta_front = wave_impedance(medium_eps(stack.front(), frequency));
  sol.eta_back = wave_impedance(medium_eps(stack.back(), frequency));

  const std::size_t n = stack.size();
  sol.layers.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto& layer = stack.layers()[i];
    auto& w = sol.layers[i];
    w.eps = medium_eps(layer.tissue, frequency);
    w.eta = wave_impedance(w.eps);
    w.gamma = propagation_constant(w.eps, frequency);
    w.thickness = layer.thickness;
  }

  // Impedance of medium i, where 0 is the front medium and n+1 the back.
  auto eta_of = [&](std::size_t i) {
    if (i == 0) return sol.eta_front;
    if (i == n + 1) return sol.eta_back;
    return sol.layers[i - 1].eta;
  };
  auto interface_rho = [&](std::size_t i) {  // interface between media i and i+1
    const Complex a = eta_of(i);
    const Complex b = eta_of(i + 1);
    return (b - a) / (b + a);
  };

  // Backward sweep: local reflection at each layer's back face (back_reflection)
  // and front face (front_reflection), looking towards the back medium.
  std::vector<Complex> back_reflection(n), front_reflection(n + 1);
  front_reflection[n] = 0.0;  // nothing returns from the back medium
  for (std::size_t i = n; i-- > 0;) {
    const Complex rho = interface_rho(i + 1);
    const Complex r_next = front_reflection[i + 1];
    back_reflection[i] = (rho + r_next) / (1.0 + rho * r_next);
    const auto& w = sol.layers[i];
    front_reflection[i] = back_reflection[i] * std::exp(-2.0 * w.gamma * w.thickness);
  }

  const Complex rho0 = interface_rho(0);
  const Complex r1 = n > 0 ? front_reflection[0] : Complex{0.0, 0.0};
  sol.gamma = (rho0 + r1) / (1.0 + rho0 * r1);

  // Forward sweep: forward amplitude entering medium i+1 through interface i
  // is F·(1+ρ)/(1+ρ·r), avoiding division by (1 + r).
  Complex incident = 1.0;
  for (std::size_t i = 0; i < n; ++i) {
    const Complex rho = interface_rho(i);
    auto& w = sol.layers[i];
    w.forward = incident * (1.0 + rho) / (1.0 + rho * front_reflection[i]);
    const Complex at_back = w.forward * std::exp(-w.gamma * w.thickness);
    w.backward = back_reflection[i] * at_back;
    incident = at_back;
  }
  sol.t = incident * (1.0 + interface_rho(n));
  return sol;
}

FieldProfile FieldProfile::scaled(double factor) const {
  FieldProfile out = *this;
  for (auto& v : out.e) v *= factor;
  for (auto& v : out.power_envelope) v *= std::abs(factor);
  out.amplitude *= factor;
  return out;
}

FieldProfile field_profile(const PlaneWaveSolution& solution, const dielectrics::LayerStack& stack,
                           double dz) {
  if (!(dz > 0.0)) throw DomainError("field_profile: dz must be positive");
  if (stack.size() != solution.layers.size()) {
    throw DomainError("field_profile: solution does not belong to this stack");
  }
  if (stack.size() == 0) throw DomainError("field_profile: empty stack");
  if (dz > stack.thinnest_layer() / 4.0) {
    throw DomainError("field_profile: dz too coarse (must not exceed a quarter of the thinnest layer)");
  }

  const double total = stack.total_thickness();
  const auto intervals = static_cast<std::size_t>(std::ceil(total / dz * (1.0 - 1e-12)));
  FieldProfile p;
  p.frequency = solution.frequency;
  p.z.resize(intervals + 1);
  p.e.resize(intervals + 1);
  p.layer.resize(intervals + 1);
  p.power_envelope.resize(intervals + 1);

  const double free_space_admittance = 1.0 / kFreeSpaceImpedance;
  for (std::size_t k = 0; k <= intervals; ++k) {
    const double z = k == intervals ? total : total * static_cast<double>(k) / intervals;
    const std::size_t li = stack.layer_at(z);
    const auto& w = solution.layers[li];
    const double local = std::clamp(z - stack.edges()[li], 0.0, w.thickness);
    const Complex e = w.e(local);
    const Complex h = w.h(local);
    const double flux = 0.5 * (e * std::conj(h)).real();
    p.z[k] = z;
    p.e[k] = e;
    p.layer[k] = li;
    p.power_envelope[k] = std::sqrt(std::max(0.0, 2.0 * flux / free_space_admittance));
  }
  return p;
}

double return_loss(Complex gamma) {
  const double mag = std::abs(gamma);
  if (mag > 1.0) throw DomainError("return_loss: |gamma| > 1");
  if (mag == 0.0) return std::numeric_limits<double>::infinity();
  return -20.0 * std::log10(mag);
}

double vswr(Complex gamma) {
  const double mag = std::abs(gamma);
  if (mag >= 1.0) throw DomainError("vswr: |gamma| >= 1 (infinite VSWR)");
  return (1.0 + mag) / (1.0 - mag);
}

double transmission_group_delay(const dielectrics::LayerStack& stack, double frequency,
                                double relative_step) {
  const double df = frequency * relative_step;
  const Complex lo = solve_stack(stack, frequency - df).t;
  const Complex hi = solve_stack(stack, frequency + df).t;
  const double dphi = std::arg(hi / lo);
  return -dphi / (2.0 * kPi * 2.0 * df);
}

}  // namespace headsim::tmm

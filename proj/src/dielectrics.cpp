#include <cmath>

#include "headsim/dielectrics.hpp"

namespace headsim::dielectrics {
namespace {

void require(bool ok, const char* what) {
  if (!ok) throw DomainError(what);
}

struct Validator {
  void operator()(const StaticDielectric& s) const {
    require(std::isfinite(s.eps_r) && s.eps_r >= 1.0, "static eps_r must be >= 1");
    require(std::isfinite(s.sigma) && s.sigma >= 0.0, "static sigma must be >= 0");
  }
  void operator()(const ColeCole& c) const {
    require(std::isfinite(c.eps_inf) && c.eps_inf >= 1.0, "cole-cole eps_inf must be >= 1");
    require(std::isfinite(c.sigma_static) && c.sigma_static >= 0.0,
            "cole-cole sigma_static must be >= 0");
    for (const auto& p : c.poles) {
      require(std::isfinite(p.delta_eps) && p.delta_eps > 0.0, "cole-cole delta_eps must be > 0");
      require(std::isfinite(p.tau) && p.tau > 0.0, "cole-cole tau must be > 0");
      require(std::isfinite(p.alpha) && p.alpha >= 0.0 && p.alpha < 1.0,
              "cole-cole alpha must lie in [0, 1)");
    }
  }
};

}  // namespace

void validate(const DispersionSpec& spec) { std::visit(Validator{}, spec); }

Complex complex_permittivity(const DispersionSpec& spec, double frequency) {
  if (!(frequency > 0.0) || !std::isfinite(frequency)) {
    throw DomainError("complex_permittivity: frequency must be positive");
  }
  const double omega = 2.0 * kPi * frequency;
  if (const auto* s = std::get_if<StaticDielectric>(&spec)) {
    return {s->eps_r, -s->sigma / (omega * kVacuumPermittivity)};
  }
  const auto& cc = std::get<ColeCole>(spec);
  Complex eps{cc.eps_inf, -cc.sigma_static / (omega * kVacuumPermittivity)};
  for (const auto& p : cc.poles) {
    // (jωτ)^(1-α) on the principal branch: arg(jωτ) = π/2.
    const double order = 1.0 - p.alpha;
    const Complex frac = std::polar(std::pow(omega * p.tau, order), order * kPi / 2.0);
    eps += p.delta_eps / (1.0 + frac);
  }
  return eps;
}

double effective_conductivity(const DispersionSpec& spec, double frequency) {
  if (const auto* s = std::get_if<StaticDielectric>(&spec)) {
    if (!(frequency > 0.0)) throw DomainError("effective_conductivity: frequency must be positive");
    return s->sigma;
  }
  const double omega = 2.0 * kPi * frequency;
  return -omega * kVacuumPermittivity * complex_permittivity(spec, frequency).imag();
}

}  // namespace headsim::dielectrics

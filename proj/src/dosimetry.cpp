#include "headsim/dosimetry.hpp"

#include <cmath>

namespace headsim::dosimetry {
namespace {

struct LocalMedium {
  double sigma;
  double density;
  const std::string* name;
};

LocalMedium medium_at(const dielectrics::LayerStack& stack, double z, double frequency) {
  static const std::string air = dielectrics::free_space().name;
  if (stack.size() == 0 || z < 0.0 || z > stack.total_thickness()) return {0.0, 1.0, &air};
  const auto& t = stack.layers()[stack.layer_at(z)].tissue;
  const double sigma = dielectrics::effective_conductivity(t.dispersion, frequency);
  if (sigma > 0.0 && !(t.mass_density > 0.0)) {
    throw DomainError("sar_profile: tissue '" + t.name + "' has no usable mass density");
  }
  return {sigma, t.mass_density, &t.name};
}

double point_sar(double sigma, double e_peak, double density) {
  return sigma * (e_peak * e_peak) / (2.0 * density);
}

template <class Magnitude>
SarProfile build(const std::vector<double>& z, double frequency,
                 const dielectrics::LayerStack& stack, Magnitude magnitude) {
  if (!(frequency > 0.0)) throw DomainError("sar_profile: field profile has no frequency");
  SarProfile p;
  p.frequency = frequency;
  p.z = z;
  p.sar.reserve(z.size());
  p.tissue.reserve(z.size());
  for (std::size_t i = 0; i < z.size(); ++i) {
    const auto m = medium_at(stack, z[i], frequency);
    p.sar.push_back(m.sigma > 0.0 ? point_sar(m.sigma, magnitude(i), m.density) : 0.0);
    p.tissue.push_back(*m.name);
  }
  return p;
}

}  // namespace

SarProfile SarProfile::scaled_field(double factor) const {
  SarProfile p = *this;
  const double k2 = factor * factor;
  for (auto& s : p.sar) s *= k2;
  return p;
}

SarProfile sar_profile(const tmm::FieldProfile& field, const dielectrics::LayerStack& stack) {
  if (field.e.size() != field.z.size()) throw DomainError("sar_profile: ragged field profile");
  return build(field.z, field.frequency, stack,
               [&](std::size_t i) { return std::abs(field.e[i]); });
}

SarProfile sar_profile(const fdtd::EnvelopeProfile& field, const dielectrics::LayerStack& stack) {
  if (field.e_max.size() != field.z.size()) throw DomainError("sar_profile: ragged envelope");
  return build(field.z, field.frequency, stack, [&](std::size_t i) { return field.e_max[i]; });
}

PeakSar peak_sar(const SarProfile& profile) {
  if (profile.sar.empty()) throw DomainError("peak_sar: empty profile");
  PeakSar best{profile.sar[0], profile.z[0], 0};
  for (std::size_t i = 1; i < profile.sar.size(); ++i) {
    const bool higher = profile.sar[i] > best.value;
    const bool tie_shallower = profile.sar[i] == best.value && profile.z[i] < best.depth;
    if (higher || tie_shallower) best = {profile.sar[i], profile.z[i], i};
  }
  return best;
}

ComplianceReport compliance_check(const SarProfile& profile, double limit) {
  if (!(limit > 0.0) || !std::isfinite(limit)) {
    throw DomainError("compliance_check: limit must be positive");
  }
  ComplianceReport report;
  report.limit = limit;
  bool open = false;
  for (std::size_t i = 0; i < profile.sar.size(); ++i) {
    if (profile.sar[i] > limit) {
      if (!open) report.violations.push_back({profile.z[i], profile.z[i]});
      report.violations.back().end = profile.z[i];
      open = true;
    } else {
      open = false;
    }
  }
  return report;
}

}  // namespace headsim::dosimetry

#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "headsim/dielectrics.hpp"
#include "headsim/fdtd.hpp"
#include "headsim/tmm.hpp"

namespace headsim::dosimetry {

// Common occupational/public guideline values, W/kg.
inline constexpr double kSarLimit1g = 1.6;
inline constexpr double kSarLimit10g = 2.0;

/// Point SAR in the peak-amplitude convention: σ|E|²/(2ρ).
struct SarProfile {
  double frequency = 0.0;
  std::vector<double> z;            // m, depth from the front face
  std::vector<double> sar;          // W/kg
  std::vector<std::string> tissue;  // tissue name per sample ("Air" outside the stack)

  SarProfile scaled_field(double factor) const;  // sar·factor²
};

/// Samples outside [0, total thickness] report zero. Throws DomainError when
/// a lossy tissue has a non-positive density.
SarProfile sar_profile(const tmm::FieldProfile& field, const dielectrics::LayerStack& stack);
SarProfile sar_profile(const fdtd::EnvelopeProfile& field, const dielectrics::LayerStack& stack);

struct PeakSar {
  double value = 0.0;
  double depth = 0.0;
  std::size_t index = 0;
};

/// Maximum sample; ties resolve to the smallest depth. Throws DomainError
/// when the profile is empty.
PeakSar peak_sar(const SarProfile& profile);

struct Interval {
  double begin = 0.0;  // depth of the first violating sample
  double end = 0.0;    // depth of the last violating sample
};

struct ComplianceReport {
  double limit = 0.0;
  std::vector<Interval> violations;  // maximal runs of samples with sar > limit

  bool compliant() const noexcept { return violations.empty(); }
};

/// Throws DomainError for limit <= 0.
ComplianceReport compliance_check(const SarProfile& profile, double limit);

}  // namespace headsim::dosimetry

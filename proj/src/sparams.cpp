#include <algorithm>
#include <cmath>

#include "headsim/fdtd.hpp"
#include "headsim/spectral.hpp"

namespace headsim::fdtd {
namespace {

std::vector<double> difference(std::span<const double> a, std::span<const double> b) {
  std::vector<double> out(std::max(a.size(), b.size()), 0.0);
  for (std::size_t i = 0; i < a.size(); ++i) out[i] += a[i];
  for (std::size_t i = 0; i < b.size(); ++i) out[i] -= b[i];
  return out;
}

// Wavenumber of the Yee scheme at angular frequency ω for phase speed v.
double numerical_wavenumber(double omega, double v, double dt, double dz) {
  const double arg = dz / (v * dt) * std::sin(omega * dt / 2.0);
  return 2.0 / dz * std::asin(std::clamp(arg, -1.0, 1.0));
}

}  // namespace

std::size_t SParamResult::nearest_bin(double f) const {
  if (frequency.empty()) throw DomainError("nearest_bin: empty result");
  const auto it = std::lower_bound(frequency.begin(), frequency.end(), f);
  if (it == frequency.begin()) return 0;
  if (it == frequency.end()) return frequency.size() - 1;
  const auto i = static_cast<std::size_t>(std::distance(frequency.begin(), it));
  return (f - frequency[i - 1] <= frequency[i] - f) ? i - 1 : i;
}

SParamResult extract_sparams(const SimulationRun& reference, const SimulationRun& device,
                             double resolution) {
  if (!reference.grid.same_extents(device.grid)) {
    throw DomainError("extract_sparams: runs differ in grid extents or timestep");
  }
  if (!reference.source.same_pulse(device.source)) {
    throw DomainError("extract_sparams: runs used different sources");
  }
  if (!reference.grid.is_vacuum()) {
    throw DomainError("extract_sparams: reference run must be the vacuum grid");
  }
  if (!(resolution > 0.0)) throw DomainError("extract_sparams: resolution must be positive");

  const Grid1D& g = reference.grid;
  const double dt = reference.dt;
  const std::size_t len = std::max(reference.e_tx.size(), device.e_tx.size());
  const auto min_points = static_cast<std::size_t>(std::ceil(1.0 / (dt * resolution)));
  const std::size_t n = spectral::next_pow2(std::max(len, min_points));

  const auto incident = spectral::rfft(reference.e_tx, n);
  const auto reflected = spectral::rfft(difference(device.e_tx, reference.e_tx), n);
  const auto rx_dev = spectral::rfft(device.e_rx, n);
  const auto rx_ref = spectral::rfft(reference.e_rx, n);

  const double df = 1.0 / (static_cast<double>(n) * dt);
  const double f_max = 1.5 * reference.source.upper_band_edge();
  const auto last = std::min(incident.size() - 1, static_cast<std::size_t>(f_max / df));

  double peak = 0.0;
  for (std::size_t k = 1; k <= last; ++k) peak = std::max(peak, std::abs(incident[k]));
  const double threshold = peak * 0.31622776601683794;  // -10 dB

  // Distance from the Tx plane to the front face, traversed twice by the reflection.
  const double distance = g.stack_front - g.position(g.tx_index);
  const double v = kSpeedOfLight / std::sqrt(device.grid.eps_r[g.tx_index]);

  SParamResult r;
  r.frequency.reserve(last);
  for (std::size_t k = 1; k <= last; ++k) {
    const double f = static_cast<double>(k) * df;
    const double kn = numerical_wavenumber(2.0 * kPi * f, v, dt, g.dz);
    r.frequency.push_back(f);
    r.s11.push_back(reflected[k] / incident[k] * std::polar(1.0, 2.0 * kn * distance));
    r.s21.push_back(rx_dev[k] / rx_ref[k]);
    r.in_band.push_back(std::abs(incident[k]) >= threshold);
  }
  return r;
}

}  // namespace headsim::fdtd

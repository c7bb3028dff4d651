#include <cmath>

#include "headsim/fdtd.hpp"

namespace headsim::fdtd {
namespace {

constexpr double kTenDbAmplitude = 0.31622776601683794;  // 10^(-10/20)
constexpr double kSupportWidths = 6.0;                    // half-support in units of τ

// Magnitude of the continuous spectrum of the sine-modulated Gaussian, up to a
// constant: the positive- and negative-frequency Gaussian lobes subtract.
double spectrum(double f, double f0, double tau) {
  const double a = 2.0 * kPi * kPi * tau * tau;
  return std::exp(-a * (f - f0) * (f - f0)) - std::exp(-a * (f + f0) * (f + f0));
}

double spectral_peak(double f0, double tau) {
  // Golden-section search; the lobe is unimodal on (0, f0 + 1/τ].
  double lo = std::max(1e-9 * f0, f0 - 1.0 / tau);
  double hi = f0 + 1.0 / tau;
  const double g = (std::sqrt(5.0) - 1.0) / 2.0;
  for (int i = 0; i < 200; ++i) {
    const double a = hi - g * (hi - lo);
    const double b = lo + g * (hi - lo);
    if (spectrum(a, f0, tau) < spectrum(b, f0, tau)) lo = a; else hi = b;
  }
  return 0.5 * (lo + hi);
}

struct Edges {
  double lower;
  double upper;
};

Edges band_edges(double fc, double tau) {
  const double peak_f = spectral_peak(fc, tau);
  const double target = kTenDbAmplitude * spectrum(peak_f, fc, tau);
  double lo = peak_f;
  double hi = peak_f + 10.0 / tau;
  double below = 0.0;
  double above = peak_f;
  for (int i = 0; i < 100; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (spectrum(mid, fc, tau) > target) lo = mid; else hi = mid;
    const double low_mid = 0.5 * (below + above);
    if (spectrum(low_mid, fc, tau) > target) above = low_mid; else below = low_mid;
  }
  return {0.5 * (below + above), 0.5 * (lo + hi)};
}

double pulse_width_for(double fc, double upper) {
  // Single-lobe estimate, then bisection on the exact two-lobe spectrum.
  const double tau0 =
      std::sqrt(std::log(1.0 / kTenDbAmplitude) / (2.0 * kPi * kPi)) / (upper - fc);
  double lo = tau0 / 8.0;  // wider band, edge above target
  double hi = tau0 * 8.0;
  for (int i = 0; i < 100; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (band_edges(fc, mid).upper > upper) lo = mid; else hi = mid;
  }
  return 0.5 * (lo + hi);
}

struct PulseShape {
  double carrier;
  double tau;
};

// The negative-frequency lobe lifts the lower edge of wide bands, so the
// carrier is lowered until both -10 dB edges land on the nominal band.
PulseShape fit_pulse(double f0, double bandwidth) {
  const double lower = f0 - bandwidth / 2.0;
  const double upper = f0 + bandwidth / 2.0;
  double hi = f0;
  double lo = 0.5 * (lower + f0);
  if (band_edges(hi, pulse_width_for(hi, upper)).lower <= lower) {
    return {hi, pulse_width_for(hi, upper)};
  }
  if (band_edges(lo, pulse_width_for(lo, upper)).lower > lower) {
    return {lo, pulse_width_for(lo, upper)};
  }
  for (int i = 0; i < 60; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (band_edges(mid, pulse_width_for(mid, upper)).lower > lower) hi = mid; else lo = mid;
  }
  const double fc = 0.5 * (lo + hi);
  return {fc, pulse_width_for(fc, upper)};
}

double pulse(double t, double t0, double tau, double f0, double amplitude) {
  const double x = t - t0;
  return amplitude * std::exp(-x * x / (2.0 * tau * tau)) * std::sin(2.0 * kPi * f0 * x);
}

}  // namespace

std::string_view to_string(SourceKind kind) {
  switch (kind) {
    case SourceKind::PatchLike: return "patch-like";
    case SourceKind::VivaldiLike: return "vivaldi-like";
    case SourceKind::Custom: return "custom";
  }
  return "custom";
}

SourceKind parse_source_kind(std::string_view name) {
  if (name == "patch-like") return SourceKind::PatchLike;
  if (name == "vivaldi-like") return SourceKind::VivaldiLike;
  if (name == "custom") return SourceKind::Custom;
  throw DomainError("unknown source preset '" + std::string(name) + "'");
}

PresetBand preset_band(SourceKind kind) {
  switch (kind) {
    case SourceKind::PatchLike: return {2.45e9, 0.5e9};
    case SourceKind::VivaldiLike: return {2.75e9, 4.5e9};
    case SourceKind::Custom: break;
  }
  throw DomainError("custom sources have no preset band");
}

double SourceWaveform::value_at(double t) const {
  const double half = peak_time;
  if (t < 0.0 || t > 2.0 * half) return 0.0;
  return pulse(t, peak_time, pulse_width, carrier_frequency, amplitude);
}

SourceWaveform SourceWaveform::resampled(double new_dt) const {
  return synthesize_source(kind, center_frequency, bandwidth, amplitude, new_dt);
}

bool SourceWaveform::same_pulse(const SourceWaveform& o) const {
  return kind == o.kind && center_frequency == o.center_frequency && bandwidth == o.bandwidth &&
         amplitude == o.amplitude && dt == o.dt && samples.size() == o.samples.size();
}

SourceWaveform synthesize_source(SourceKind kind, double center_frequency, double bandwidth,
                                 double amplitude, double dt) {
  if (!(bandwidth > 0.0) || !(center_frequency > bandwidth / 2.0)) {
    throw DomainError("synthesize_source: band must satisfy f0 > bandwidth/2 > 0 (band reaches DC)");
  }
  if (!(amplitude >= 0.0) || !std::isfinite(amplitude)) {
    throw DomainError("synthesize_source: amplitude must be finite and non-negative");
  }
  const double upper = center_frequency + bandwidth / 2.0;
  if (!(dt > 0.0) || dt > 1.0 / (4.0 * upper)) {
    throw DomainError("synthesize_source: dt must be positive and at most 1/(4·upper band edge)");
  }

  SourceWaveform w;
  w.kind = kind;
  w.center_frequency = center_frequency;
  w.bandwidth = bandwidth;
  w.amplitude = amplitude;
  w.dt = dt;
  const auto shape = fit_pulse(center_frequency, bandwidth);
  w.carrier_frequency = shape.carrier;
  w.pulse_width = shape.tau;

  const auto half = static_cast<std::size_t>(std::ceil(kSupportWidths * w.pulse_width / dt));
  w.peak_time = static_cast<double>(half) * dt;
  w.samples.assign(2 * half + 1, 0.0);
  for (std::size_t j = 1; j <= half; ++j) {
    const double v =
        pulse(static_cast<double>(j) * dt, 0.0, w.pulse_width, w.carrier_frequency, amplitude);
    w.samples[half + j] = v;
    w.samples[half - j] = -v;
  }
  return w;
}

SourceWaveform preset_source(SourceKind kind, double amplitude, double dt) {
  const auto band = preset_band(kind);
  return synthesize_source(kind, band.center_frequency, band.bandwidth, amplitude, dt);
}

}  // namespace headsim::fdtd

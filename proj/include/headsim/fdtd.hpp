#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "headsim/common.hpp"
#include "headsim/dielectrics.hpp"

namespace headsim::fdtd {

// ---------------------------------------------------------------------------
// Excitation

enum class SourceKind { PatchLike, VivaldiLike, Custom };

std::string_view to_string(SourceKind kind);
/// Accepts "patch-like", "vivaldi-like", "custom". Throws DomainError otherwise.
SourceKind parse_source_kind(std::string_view name);

struct PresetBand {
  double center_frequency;
  double bandwidth;
};
/// Nominal band of a preset: patch-like 2.45 GHz / 0.5 GHz, vivaldi-like
/// 2.75 GHz / 4.5 GHz (0.5 to 5 GHz).
PresetBand preset_band(SourceKind kind);

/// Sine-modulated Gaussian pulse
///   s(t) = A·exp(-(t-t0)²/(2τ²))·sin(2πfc(t-t0)),
/// sampled at k·dt with t0 on a sample so the series is odd about its
/// midpoint and carries no DC. The carrier fc and width τ are tuned so the
/// -10 dB edges of the continuous spectrum sit at f0 ± bandwidth/2; for
/// narrow bands fc = f0.
struct SourceWaveform {
  SourceKind kind = SourceKind::Custom;
  double center_frequency = 0.0;  // Hz, nominal band centre
  double carrier_frequency = 0.0; // Hz
  double bandwidth = 0.0;         // Hz, -10 dB two-sided (nominal)
  double amplitude = 0.0;         // V/m
  double dt = 0.0;                // s
  double pulse_width = 0.0;       // τ, s
  double peak_time = 0.0;         // t0, s
  std::vector<double> samples;

  double upper_band_edge() const noexcept { return center_frequency + bandwidth / 2; }
  double lower_band_edge() const noexcept { return center_frequency - bandwidth / 2; }
  double duration() const noexcept { return static_cast<double>(samples.size()) * dt; }
  /// Continuous-time value; zero outside the sampled support.
  double value_at(double t) const;
  /// Same pulse re-sampled at a different timestep.
  SourceWaveform resampled(double new_dt) const;
  /// True when both describe the same pulse at the same timestep.
  bool same_pulse(const SourceWaveform& other) const;
};

/// Throws DomainError when the band reaches DC (f0 <= bandwidth/2), when
/// amplitude is negative, or when dt cannot resolve the band.
SourceWaveform synthesize_source(SourceKind kind, double center_frequency, double bandwidth,
                                 double amplitude, double dt);
SourceWaveform preset_source(SourceKind kind, double amplitude, double dt);

// ---------------------------------------------------------------------------
// Discretization

enum class ResolutionRule { Wavelength, LayerFloor, Override };
enum class InterfaceTreatment {
  Average,  // cells straddling an interface take the volume-averaged ε and σ
  Snap,     // interfaces move to the nearest cell edge
};

std::string_view to_string(ResolutionRule rule);

struct DiscretizationOptions {
  double cells_per_wavelength = 20.0;
  int min_cells_per_layer = 2;
  std::optional<double> dz;  // must still satisfy both resolution rules
  double courant = 0.99;
  std::size_t margin_cells = 16;
  double rx_offset = 10e-3;  // Rx probe distance beyond the stack's back face
  InterfaceTreatment interfaces = InterfaceTreatment::Average;
};

/// Yee grid: E at nodes k·dz, H at (k+½)·dz. Node 0 and node size()-1 carry
/// first-order Mur absorbing terminations. Nodes below source_index form the
/// scattered-field region of the total-field/scattered-field source.
struct Grid1D {
  double dz = 0.0;
  double dt = 0.0;
  std::vector<double> eps_r;
  std::vector<double> sigma;
  std::vector<double> mass_density;
  std::size_t source_index = 0;
  std::size_t tx_index = 0;
  std::size_t rx_index = 0;
  double stack_front = 0.0;  // m, position of the front face
  double stack_back = 0.0;   // m
  double standoff = 0.0;     // m, source plane to front face as realized
  double min_wavelength = 0.0;
  double wavelength_limit = 0.0;
  double layer_limit = 0.0;
  ResolutionRule bound_by = ResolutionRule::Wavelength;

  std::size_t size() const noexcept { return eps_r.size(); }
  double position(std::size_t k) const noexcept { return static_cast<double>(k) * dz; }
  double courant() const noexcept { return kSpeedOfLight * dt / dz; }
  /// Round trip across the whole grid at the local phase velocity.
  double two_way_transit_time() const;
  bool same_extents(const Grid1D& other) const;
  bool is_vacuum() const;
};

/// Throws DomainError for negative standoff, a layer thinner than
/// min_cells_per_layer cells, or a dz override that violates the rules.
Grid1D discretize(const dielectrics::LayerStack& stack, const SourceWaveform& source,
                  double standoff, const DiscretizationOptions& options = {});

/// The same grid with every cell set to vacuum.
Grid1D vacuum_reference(const Grid1D& grid);

// ---------------------------------------------------------------------------
// Time stepping

struct GateWindow {
  double begin = 0.0;
  double end = 0.0;
};

struct EnvelopeProfile {
  double frequency = 0.0;       // source centre frequency, for dosimetry
  std::vector<double> z;        // m, depth from the front face
  std::vector<double> e_max;    // V/m
};

struct SimulationRun {
  Grid1D grid;
  double dt = 0.0;
  double duration = 0.0;
  std::size_t steps = 0;
  SourceWaveform source;
  std::vector<double> e_tx;   // total field at the source (Tx) plane
  std::vector<double> e_rx;   // total field at the Rx probe
  std::vector<double> e_inc;  // incident field at the Tx plane
  std::vector<double> envelope;  // max |E| per node over the run
  std::vector<double> energy;    // J/m², one entry per step
  double injected_energy = 0.0;
  double peak_energy = 0.0;
  double source_end_time = 0.0;  // incident pulse has fully crossed the Tx plane
  // Earliest arrival of a boundary return at each probe. Recorded, not applied:
  // the Mur terminations sit in the homogeneous end media.
  GateWindow tx_gate;
  GateWindow rx_gate;

  double late_time_energy_ratio() const;
  EnvelopeProfile envelope_profile() const;
};

/// 3 × grid.two_way_transit_time().
double minimum_duration(const Grid1D& grid);

/// Throws DomainError when the source timestep differs from grid.dt, when the
/// Courant number exceeds 0.99 or when duration < minimum_duration(grid).
SimulationRun run(const Grid1D& grid, const SourceWaveform& source, double duration);

/// Steps every grid in lockstep until each has injected its source and its
/// energy has fallen below threshold·peak; all runs share one duration.
/// Throws NumericalError if that does not happen before max_duration.
std::vector<SimulationRun> run_until_settled(std::span<const Grid1D> grids,
                                             const SourceWaveform& source,
                                             double threshold = 1e-6,
                                             double max_duration = 200e-9);

// ---------------------------------------------------------------------------
// Post-processing

struct SParamResult {
  std::vector<double> frequency;  // Hz, FFT bin centres up to 1.5× the upper band edge
  std::vector<Complex> s11;       // referenced at the front face of the stack
  std::vector<Complex> s21;       // Rx(device)/Rx(reference)
  std::vector<bool> in_band;      // incident spectrum within 10 dB of its peak

  std::size_t nearest_bin(double f) const;
};

/// Spectral division against a vacuum reference run:
///   s11 = FFT(e_tx(device) - e_tx(ref)) / FFT(e_tx(ref)), shifted to the front face;
///   s21 = FFT(e_rx(device)) / FFT(e_rx(ref)).
/// Throws DomainError when the runs differ in extents, dt or source, or when
/// the reference grid is not vacuum.
SParamResult extract_sparams(const SimulationRun& reference, const SimulationRun& device,
                             double resolution = 5e6);

/// Lag of the normalized cross-correlation maximum, refined by a three-point
/// parabola. Positive when rx lags tx. Throws DomainError for zero-energy input.
double propagation_delay(std::span<const double> tx, std::span<const double> rx, double dt);

}  // namespace headsim::fdtd

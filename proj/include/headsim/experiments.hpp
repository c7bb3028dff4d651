#pragma once

#include <cstddef>
#include <optional>
#include <string_view>
#include <variant>
#include <vector>

#include "headsim/dielectrics.hpp"
#include "headsim/dosimetry.hpp"
#include "headsim/fdtd.hpp"
#include "headsim/tmm.hpp"

namespace headsim::experiments {

inline constexpr double kPatchAmplitudeRatio = 4.5;
inline constexpr double kMinFrequency = 0.5e9;
inline constexpr double kMaxFrequency = 5.0e9;

struct ExperimentOptions {
  double vivaldi_amplitude = 1.0;  // V/m
  double profile_dz = 0.05e-3;     // m, tmm sampling (capped at thinnest layer / 4)
  double standoff = 10e-3;         // m
  fdtd::DiscretizationOptions grid;
  std::optional<double> duration;  // s; unset runs until the fields settle
  double settle_threshold = 1e-6;
};

/// Source amplitude of a preset: vivaldi-like uses `vivaldi_amplitude`,
/// patch-like 4.5 times that.
double preset_amplitude(fdtd::SourceKind preset, double vivaldi_amplitude);

struct PenetrationReport {
  fdtd::SourceKind preset = fdtd::SourceKind::VivaldiLike;
  double amplitude = 1.0;
  std::vector<double> frequencies;  // Hz
  std::vector<tmm::FieldProfile> fields;
  std::vector<dosimetry::SarProfile> sar;
};

/// Head stack from `db`, or an explicit stack. Throws DomainError for a
/// frequency outside [0.5, 5] GHz.
PenetrationReport penetration_experiment(const dielectrics::TissueDatabase& db,
                                         fdtd::SourceKind preset,
                                         const std::vector<double>& frequencies,
                                         const ExperimentOptions& options = {});
PenetrationReport penetration_experiment(const dielectrics::LayerStack& stack,
                                         fdtd::SourceKind preset,
                                         const std::vector<double>& frequencies,
                                         const ExperimentOptions& options = {});

struct TumorSpec {
  double radius = 5e-3;                 // m; 0 inserts nothing
  std::optional<double> center_depth;   // m; default: back face of the dura
  bool host_matched = false;            // keep host tissues inside the slab
  std::optional<dielectrics::TissueRecord> tissue;  // default: db "Tumor"
};

/// Stack with the tumor slab inserted as specified.
dielectrics::LayerStack tumor_stack(const dielectrics::TissueDatabase& db, const TumorSpec& tumor);

struct RunSummary {
  double dz = 0.0;
  double dt = 0.0;
  double duration = 0.0;
  std::size_t steps = 0;
  fdtd::ResolutionRule bound_by = fdtd::ResolutionRule::Wavelength;
  double standoff = 0.0;
};

struct DifferentialReport {
  fdtd::SourceKind preset = fdtd::SourceKind::VivaldiLike;
  double amplitude = 1.0;
  double center_frequency = 0.0;
  TumorSpec tumor;
  RunSummary run;

  fdtd::SimulationRun reference;
  fdtd::SimulationRun baseline;
  fdtd::SimulationRun with_tumor;
  fdtd::SParamResult baseline_sparams;
  fdtd::SParamResult tumor_sparams;
  double baseline_delay = 0.0;  // cross-correlation, incident Tx vs Rx
  double tumor_delay = 0.0;
  double baseline_group_delay = 0.0;  // tmm at band centre
  double tumor_group_delay = 0.0;
  tmm::FieldProfile baseline_field;
  tmm::FieldProfile tumor_field;
  dosimetry::SarProfile baseline_sar;
  dosimetry::SarProfile tumor_sar;

  std::vector<double> delta_s11_db;  // per bin: 20log|s11 tumor| - 20log|s11 baseline|
  double delta_delay = 0.0;
  double delta_group_delay = 0.0;
  std::vector<double> delta_field;   // |E tumor| - |E baseline| per depth sample
  std::vector<double> delta_sar;

  /// Largest |Δ|s11|| over in-band bins, dB.
  double max_in_band_delta_s11_db() const;
};

/// Throws DomainError when the database lacks the tumor record (unless a
/// tissue override or host-matched slab is given).
DifferentialReport tumor_experiment(const dielectrics::TissueDatabase& db,
                                    fdtd::SourceKind preset, const TumorSpec& tumor = {},
                                    const ExperimentOptions& options = {});

enum class SweepAxis { Frequency, TumorRadius, TumorDepth, TumorSigma, Preset };

std::string_view to_string(SweepAxis axis);
/// Accepts "frequency", "tumor_radius", "tumor_depth", "tumor_sigma", "preset".
SweepAxis parse_sweep_axis(std::string_view name);

/// Frequency in Hz, radius and depth in m, sigma in S/m, or a preset.
using SweepValue = std::variant<double, fdtd::SourceKind>;
using Report = std::variant<PenetrationReport, DifferentialReport>;

struct SweepBase {
  fdtd::SourceKind preset = fdtd::SourceKind::VivaldiLike;
  std::vector<double> frequencies{2.45e9, 4.5e9};  // used by the preset axis
  TumorSpec tumor;
  ExperimentOptions options;
};

/// One report per value, in input order. The frequency and preset axes yield
/// penetration reports; tumor axes yield differential reports.
std::vector<Report> sweep(const dielectrics::TissueDatabase& db, SweepAxis axis,
                          const std::vector<SweepValue>& values, const SweepBase& base = {});

}  // namespace headsim::experiments

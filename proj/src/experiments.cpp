#include "headsim/experiments.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <future>

namespace headsim::experiments {
namespace {

void check_frequency(double f) {
  if (!(f >= kMinFrequency && f <= kMaxFrequency)) {
    throw DomainError("frequency outside the 0.5-5 GHz band: " + std::to_string(f) + " Hz");
  }
}

double profile_spacing(const ExperimentOptions& options,
                       std::initializer_list<const dielectrics::LayerStack*> stacks) {
  if (!(options.profile_dz > 0.0)) throw DomainError("profile spacing must be positive");
  double dz = options.profile_dz;
  for (const auto* s : stacks) {
    if (s->size() > 0) dz = std::min(dz, s->thinnest_layer() / 4.0);
  }
  return dz;
}

tmm::FieldProfile scaled_profile(const dielectrics::LayerStack& stack, double f, double dz,
                                 double amplitude) {
  return tmm::field_profile(tmm::solve_stack(stack, f), stack, dz).scaled(amplitude);
}

double to_db(Complex x) { return 20.0 * std::log10(std::abs(x)); }

}  // namespace

double preset_amplitude(fdtd::SourceKind preset, double vivaldi_amplitude) {
  if (!(vivaldi_amplitude >= 0.0)) throw DomainError("source amplitude must be non-negative");
  return preset == fdtd::SourceKind::PatchLike ? kPatchAmplitudeRatio * vivaldi_amplitude
                                               : vivaldi_amplitude;
}

PenetrationReport penetration_experiment(const dielectrics::TissueDatabase& db,
                                         fdtd::SourceKind preset,
                                         const std::vector<double>& frequencies,
                                         const ExperimentOptions& options) {
  return penetration_experiment(dielectrics::build_head_stack(db), preset, frequencies, options);
}

PenetrationReport penetration_experiment(const dielectrics::LayerStack& stack,
                                         fdtd::SourceKind preset,
                                         const std::vector<double>& frequencies,
                                         const ExperimentOptions& options) {
  for (double f : frequencies) check_frequency(f);
  PenetrationReport r;
  r.preset = preset;
  r.amplitude = preset_amplitude(preset, options.vivaldi_amplitude);
  r.frequencies = frequencies;
  const double dz = profile_spacing(options, {&stack});
  for (double f : frequencies) {
    r.fields.push_back(scaled_profile(stack, f, dz, r.amplitude));
    r.sar.push_back(dosimetry::sar_profile(r.fields.back(), stack));
  }
  return r;
}

dielectrics::LayerStack tumor_stack(const dielectrics::TissueDatabase& db, const TumorSpec& tumor) {
  auto head = dielectrics::build_head_stack(db);
  if (!(tumor.radius >= 0.0)) throw DomainError("tumor radius must be non-negative");
  if (tumor.radius == 0.0) return head;
  dielectrics::Inclusion inc;
  inc.center_depth = tumor.center_depth.value_or(dielectrics::layer_end_depth(head, "Dura Mater"));
  inc.thickness = 2.0 * tumor.radius;
  if (!tumor.host_matched) {
    inc.tissue = tumor.tissue ? *tumor.tissue : db.at(dielectrics::kTumorTissue);
  }
  return dielectrics::insert_inclusion(head, inc);
}

double DifferentialReport::max_in_band_delta_s11_db() const {
  double best = 0.0;
  for (std::size_t i = 0; i < delta_s11_db.size(); ++i) {
    if (baseline_sparams.in_band[i]) best = std::max(best, std::abs(delta_s11_db[i]));
  }
  return best;
}

DifferentialReport tumor_experiment(const dielectrics::TissueDatabase& db,
                                    fdtd::SourceKind preset, const TumorSpec& tumor,
                                    const ExperimentOptions& options) {
  const auto base_stack = dielectrics::build_head_stack(db);
  const auto tumor_layers = tumor_stack(db, tumor);

  DifferentialReport r;
  r.preset = preset;
  r.tumor = tumor;
  r.amplitude = preset_amplitude(preset, options.vivaldi_amplitude);
  const auto band = fdtd::preset_band(preset);
  r.center_frequency = band.center_frequency;

  // Both grids share the finer of the two spacings so their extents match.
  const double f_hi = band.center_frequency + band.bandwidth / 2;
  const auto probe = fdtd::preset_source(preset, r.amplitude, 1.0 / (8.0 * f_hi));
  auto base_grid = fdtd::discretize(base_stack, probe, options.standoff, options.grid);
  auto tumor_grid = fdtd::discretize(tumor_layers, probe, options.standoff, options.grid);
  if (tumor_grid.dz != base_grid.dz) {
    auto shared = options.grid;
    shared.dz = std::min(base_grid.dz, tumor_grid.dz);
    const auto rule = (base_grid.dz <= tumor_grid.dz ? base_grid : tumor_grid).bound_by;
    base_grid = fdtd::discretize(base_stack, probe, options.standoff, shared);
    tumor_grid = fdtd::discretize(tumor_layers, probe, options.standoff, shared);
    base_grid.bound_by = tumor_grid.bound_by = rule;
  }
  if (!base_grid.same_extents(tumor_grid)) {
    throw NumericalError("tumor_experiment: baseline and tumor grids differ in extent");
  }
  const auto source = fdtd::preset_source(preset, r.amplitude, base_grid.dt);
  const std::array<fdtd::Grid1D, 3> grids{fdtd::vacuum_reference(base_grid), base_grid, tumor_grid};

  std::vector<fdtd::SimulationRun> runs;
  if (options.duration) {
    for (const auto& g : grids) runs.push_back(fdtd::run(g, source, *options.duration));
  } else {
    runs = fdtd::run_until_settled(grids, source, options.settle_threshold);
  }
  r.reference = std::move(runs[0]);
  r.baseline = std::move(runs[1]);
  r.with_tumor = std::move(runs[2]);
  r.run = {base_grid.dz, base_grid.dt, r.baseline.duration, r.baseline.steps,
           base_grid.bound_by, base_grid.standoff};

  r.baseline_sparams = fdtd::extract_sparams(r.reference, r.baseline);
  r.tumor_sparams = fdtd::extract_sparams(r.reference, r.with_tumor);
  r.delta_s11_db.resize(r.baseline_sparams.frequency.size());
  for (std::size_t i = 0; i < r.delta_s11_db.size(); ++i) {
    r.delta_s11_db[i] = to_db(r.tumor_sparams.s11[i]) - to_db(r.baseline_sparams.s11[i]);
  }

  r.baseline_delay = fdtd::propagation_delay(r.baseline.e_inc, r.baseline.e_rx, r.baseline.dt);
  r.tumor_delay = fdtd::propagation_delay(r.with_tumor.e_inc, r.with_tumor.e_rx, r.with_tumor.dt);
  r.delta_delay = r.tumor_delay - r.baseline_delay;

  const double f0 = r.center_frequency;
  r.baseline_group_delay = tmm::transmission_group_delay(base_stack, f0);
  r.tumor_group_delay = tmm::transmission_group_delay(tumor_layers, f0);
  r.delta_group_delay = r.tumor_group_delay - r.baseline_group_delay;

  const double dz = profile_spacing(options, {&base_stack, &tumor_layers});
  r.baseline_field = scaled_profile(base_stack, f0, dz, r.amplitude);
  r.tumor_field = scaled_profile(tumor_layers, f0, dz, r.amplitude);
  r.baseline_sar = dosimetry::sar_profile(r.baseline_field, base_stack);
  r.tumor_sar = dosimetry::sar_profile(r.tumor_field, tumor_layers);
  const std::size_t n = std::min(r.baseline_field.z.size(), r.tumor_field.z.size());
  r.delta_field.resize(n);
  r.delta_sar.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    r.delta_field[i] = std::abs(r.tumor_field.e[i]) - std::abs(r.baseline_field.e[i]);
    r.delta_sar[i] = r.tumor_sar.sar[i] - r.baseline_sar.sar[i];
  }
  return r;
}

std::string_view to_string(SweepAxis axis) {
  switch (axis) {
    case SweepAxis::Frequency: return "frequency";
    case SweepAxis::TumorRadius: return "tumor_radius";
    case SweepAxis::TumorDepth: return "tumor_depth";
    case SweepAxis::TumorSigma: return "tumor_sigma";
    case SweepAxis::Preset: return "preset";
  }
  return "frequency";
}

SweepAxis parse_sweep_axis(std::string_view name) {
  for (auto a : {SweepAxis::Frequency, SweepAxis::TumorRadius, SweepAxis::TumorDepth,
                 SweepAxis::TumorSigma, SweepAxis::Preset}) {
    if (to_string(a) == name) return a;
  }
  throw DomainError("unknown sweep axis '" + std::string(name) + "'");
}

std::vector<Report> sweep(const dielectrics::TissueDatabase& db, SweepAxis axis,
                          const std::vector<SweepValue>& values, const SweepBase& base) {
  const bool wants_preset = axis == SweepAxis::Preset;
  for (const auto& v : values) {
    if (std::holds_alternative<fdtd::SourceKind>(v) != wants_preset) {
      throw DomainError(std::string("sweep value has the wrong type for axis ") +
                        std::string(to_string(axis)));
    }
    if (axis == SweepAxis::Frequency) check_frequency(std::get<double>(v));
  }

  auto job = [&db, axis, &base](SweepValue v) -> Report {
    switch (axis) {
      case SweepAxis::Frequency:
        return penetration_experiment(db, base.preset, {std::get<double>(v)}, base.options);
      case SweepAxis::Preset:
        return penetration_experiment(db, std::get<fdtd::SourceKind>(v), base.frequencies,
                                      base.options);
      default: break;
    }
    TumorSpec t = base.tumor;
    const double x = std::get<double>(v);
    if (axis == SweepAxis::TumorRadius) {
      t.radius = x;
    } else if (axis == SweepAxis::TumorDepth) {
      t.center_depth = x;
    } else {
      auto tissue = t.tissue ? *t.tissue : db.at(dielectrics::kTumorTissue);
      auto* s = std::get_if<dielectrics::StaticDielectric>(&tissue.dispersion);
      if (!s) throw DomainError("tumor_sigma sweeps need a static tumor tissue");
      s->sigma = x;
      t.tissue = tissue;
    }
    return tumor_experiment(db, base.preset, t, base.options);
  };

  std::vector<std::future<Report>> pending;
  pending.reserve(values.size());
  for (const auto& v : values) pending.push_back(std::async(std::launch::async, job, v));
  std::vector<Report> reports;
  reports.reserve(values.size());
  for (auto& p : pending) reports.push_back(p.get());
  return reports;
}

}  // namespace headsim::experiments

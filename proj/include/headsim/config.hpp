#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "headsim/dielectrics.hpp"
#include "headsim/experiments.hpp"
#include "headsim/fdtd.hpp"

namespace headsim::config {

enum class ExperimentKind { Penetration, Detection, Sweep };

std::string_view to_string(ExperimentKind kind);

struct TumorConfig {
  double radius_mm = 5.0;
  std::optional<double> center_depth_mm;
  std::optional<double> eps_r;
  std::optional<double> sigma_spm;
  std::optional<double> density_kgm3;
  bool host_matched = false;

  bool operator==(const TumorConfig&) const = default;
};

struct GridConfig {
  std::optional<double> dz_mm;
  std::optional<double> duration_ns;
  double cells_per_wavelength = 20.0;
  double standoff_mm = 10.0;

  bool operator==(const GridConfig&) const = default;
};

struct SweepConfig {
  experiments::SweepAxis axis = experiments::SweepAxis::Frequency;
  // Units follow the axis: GHz, mm, mm, S/m; preset names for "preset".
  std::vector<double> values;
  std::vector<fdtd::SourceKind> presets;

  bool operator==(const SweepConfig&) const = default;
};

/// Validated run configuration. Quantities keep the units of their keys.
struct RunConfig {
  ExperimentKind experiment = ExperimentKind::Penetration;
  std::optional<std::filesystem::path> tissue_db;
  fdtd::SourceKind preset = fdtd::SourceKind::VivaldiLike;
  std::vector<double> frequencies_ghz{2.45, 4.5};
  std::optional<TumorConfig> tumor;
  std::filesystem::path output_dir = "headsim-out";
  GridConfig grid;
  double sar_limit_wkg = 2.0;
  double vivaldi_amplitude_vpm = 1.0;
  std::optional<SweepConfig> sweep;

  bool operator==(const RunConfig&) const = default;

  std::vector<double> frequencies_hz() const;
};

/// Parses and validates a JSON document. Relative paths resolve against
/// `base_dir`. Throws ConfigError naming the offending key.
RunConfig parse_config(std::string_view document, const std::filesystem::path& base_dir = {});
/// Throws IoError when the file cannot be read.
RunConfig load_config_file(const std::filesystem::path& path);
/// Canonical JSON form; parse_config(emit_config(c)) == c.
std::string emit_config(const RunConfig& config);

/// Tissue database named by the config, else by $HEADSIM_TISSUE_DB, else the
/// built-in table.
dielectrics::TissueDatabase resolve_tissue_db(const RunConfig& config);

experiments::ExperimentOptions experiment_options(const RunConfig& config);
experiments::TumorSpec tumor_spec(const RunConfig& config, const dielectrics::TissueDatabase& db);
std::vector<experiments::SweepValue> sweep_values(const SweepConfig& sweep);

}  // namespace headsim::config

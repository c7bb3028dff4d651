#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "headsim/dosimetry.hpp"
#include "headsim/experiments.hpp"
#include "headsim/fdtd.hpp"
#include "headsim/tmm.hpp"

namespace headsim::report {

std::string sha256_hex(std::string_view data);

std::string probes_csv(const fdtd::SimulationRun& run);          // time_s,e_tx_Vpm,e_rx_Vpm
std::string envelope_csv(const fdtd::EnvelopeProfile& profile);  // depth_m,e_max_Vpm
std::string field_csv(const tmm::FieldProfile& profile);
std::string sar_csv(const dosimetry::SarProfile& profile);       // depth_m,sar_Wkg,tissue_name
std::string compliance_csv(const dosimetry::ComplianceReport& report);
std::string sparams_csv(const experiments::DifferentialReport& report);
std::string differential_profile_csv(const experiments::DifferentialReport& report);
std::string delay_csv(const experiments::DifferentialReport& report);

struct ManifestEntry {
  std::string file;
  std::size_t bytes = 0;
  std::string sha256;
};

/// Collects files in a hidden sibling directory and moves it into place on
/// commit(); an uncommitted staging directory is removed on destruction.
class StagedDirectory {
 public:
  explicit StagedDirectory(std::filesystem::path target);
  ~StagedDirectory();
  StagedDirectory(const StagedDirectory&) = delete;
  StagedDirectory& operator=(const StagedDirectory&) = delete;

  /// `name` may contain '/' separators. Throws IoError on failure.
  void write(const std::string& name, std::string_view contents);
  const std::vector<ManifestEntry>& entries() const noexcept { return entries_; }
  /// Writes manifest.json (run parameters plus checksums) and swaps the
  /// staging directory into place.
  void commit(const std::string& parameters_json);

 private:
  std::filesystem::path target_;
  std::filesystem::path staging_;
  std::vector<ManifestEntry> entries_;
  bool committed_ = false;
};

/// `parameters_json` is embedded in the manifest verbatim.
void write_penetration(const experiments::PenetrationReport& report, double sar_limit,
                       const std::filesystem::path& dir, const std::string& parameters_json);
void write_differential(const experiments::DifferentialReport& report, double sar_limit,
                        const std::filesystem::path& dir, const std::string& parameters_json);
void write_sweep(const std::vector<experiments::Report>& reports,
                 experiments::SweepAxis axis, double sar_limit,
                 const std::filesystem::path& dir, const std::string& parameters_json);

}  // namespace headsim::report

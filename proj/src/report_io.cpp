#include "headsim/report_io.hpp"

#include <atomic>
#include <cmath>
#include <fstream>

#include <fmt/format.h>
#include <json.hpp>
#include <openssl/evp.h>
#include <unistd.h>

namespace headsim::report {
namespace {

using nlohmann::ordered_json;

std::string num(double v) { return fmt::format("{:.17g}", v); }

std::string ghz_label(double f) { return fmt::format("{:.6g}GHz", f / 1e9); }

double db(Complex x) { return 20.0 * std::log10(std::abs(x)); }

std::string quoted(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::filesystem::path sibling(const std::filesystem::path& target, std::string_view tag) {
  static std::atomic<unsigned> counter{0};
  const auto name = fmt::format(".{}.{}-{}-{}", target.filename().string(), tag,
                                static_cast<long>(::getpid()), counter++);
  return target.parent_path() / name;
}

void add_penetration(StagedDirectory& out, const std::string& prefix,
                     const experiments::PenetrationReport& r, double sar_limit) {
  for (std::size_t i = 0; i < r.frequencies.size(); ++i) {
    const auto label = ghz_label(r.frequencies[i]);
    out.write(prefix + "field_" + label + ".csv", field_csv(r.fields[i]));
    out.write(prefix + "sar_" + label + ".csv", sar_csv(r.sar[i]));
    out.write(prefix + "compliance_" + label + ".csv",
              compliance_csv(dosimetry::compliance_check(r.sar[i], sar_limit)));
  }
}

void add_differential(StagedDirectory& out, const std::string& prefix,
                      const experiments::DifferentialReport& r, double sar_limit) {
  out.write(prefix + "sparams.csv", sparams_csv(r));
  out.write(prefix + "delay.csv", delay_csv(r));
  out.write(prefix + "probes_reference.csv", probes_csv(r.reference));
  out.write(prefix + "probes_baseline.csv", probes_csv(r.baseline));
  out.write(prefix + "probes_tumor.csv", probes_csv(r.with_tumor));
  out.write(prefix + "envelope_baseline.csv", envelope_csv(r.baseline.envelope_profile()));
  out.write(prefix + "envelope_tumor.csv", envelope_csv(r.with_tumor.envelope_profile()));
  out.write(prefix + "field_baseline.csv", field_csv(r.baseline_field));
  out.write(prefix + "field_tumor.csv", field_csv(r.tumor_field));
  out.write(prefix + "sar_baseline.csv", sar_csv(r.baseline_sar));
  out.write(prefix + "sar_tumor.csv", sar_csv(r.tumor_sar));
  out.write(prefix + "profile_delta.csv", differential_profile_csv(r));
  out.write(prefix + "compliance_baseline.csv",
            compliance_csv(dosimetry::compliance_check(r.baseline_sar, sar_limit)));
  out.write(prefix + "compliance_tumor.csv",
            compliance_csv(dosimetry::compliance_check(r.tumor_sar, sar_limit)));
}

ordered_json differential_summary(const experiments::DifferentialReport& r) {
  ordered_json j;
  j["preset"] = std::string(fdtd::to_string(r.preset));
  j["source_amplitude_vpm"] = r.amplitude;
  j["center_frequency_hz"] = r.center_frequency;
  j["grid"] = {{"dz_m", r.run.dz},
               {"dt_s", r.run.dt},
               {"duration_s", r.run.duration},
               {"steps", r.run.steps},
               {"resolution_rule", std::string(fdtd::to_string(r.run.bound_by))},
               {"standoff_m", r.run.standoff},
               {"cells", r.baseline.grid.size()}};
  j["max_in_band_delta_s11_db"] = r.max_in_band_delta_s11_db();
  j["delta_delay_s"] = r.delta_delay;
  j["delta_group_delay_s"] = r.delta_group_delay;
  return j;
}

ordered_json penetration_summary(const experiments::PenetrationReport& r) {
  ordered_json j;
  j["preset"] = std::string(fdtd::to_string(r.preset));
  j["source_amplitude_vpm"] = r.amplitude;
  j["frequencies_hz"] = r.frequencies;
  if (!r.fields.empty() && r.fields.front().z.size() > 1) {
    const auto& z = r.fields.front().z;
    j["profile"] = {{"depth_begin_m", z.front()}, {"depth_end_m", z.back()},
                    {"samples", z.size()}};
  }
  ordered_json peaks = ordered_json::array();
  for (const auto& s : r.sar) {
    const auto p = dosimetry::peak_sar(s);
    peaks.push_back({{"frequency_hz", s.frequency}, {"peak_sar_wkg", p.value},
                     {"depth_m", p.depth}});
  }
  j["peak_sar"] = peaks;
  return j;
}

std::string parameters_with(const std::string& parameters_json, const ordered_json& summary) {
  ordered_json j;
  j["config"] = ordered_json::parse(parameters_json);
  j["results"] = summary;
  return j.dump(2);
}

}  // namespace

std::string sha256_hex(std::string_view data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
    throw NumericalError("sha256 digest failed");
  }
  std::string hex;
  hex.reserve(2 * len);
  for (unsigned int i = 0; i < len; ++i) hex += fmt::format("{:02x}", digest[i]);
  return hex;
}

std::string probes_csv(const fdtd::SimulationRun& run) {
  std::string s = "time_s,e_tx_Vpm,e_rx_Vpm\n";
  for (std::size_t i = 0; i < run.e_tx.size(); ++i) {
    s += fmt::format("{},{},{}\n", num(static_cast<double>(i) * run.dt), num(run.e_tx[i]),
                     num(run.e_rx[i]));
  }
  return s;
}

std::string envelope_csv(const fdtd::EnvelopeProfile& p) {
  std::string s = "depth_m,e_max_Vpm\n";
  for (std::size_t i = 0; i < p.z.size(); ++i) s += num(p.z[i]) + "," + num(p.e_max[i]) + "\n";
  return s;
}

std::string field_csv(const tmm::FieldProfile& p) {
  std::string s = "depth_m,e_re_Vpm,e_im_Vpm,e_abs_Vpm,power_envelope_Vpm\n";
  for (std::size_t i = 0; i < p.z.size(); ++i) {
    s += fmt::format("{},{},{},{},{}\n", num(p.z[i]), num(p.e[i].real()), num(p.e[i].imag()),
                     num(std::abs(p.e[i])), num(p.power_envelope[i]));
  }
  return s;
}

std::string sar_csv(const dosimetry::SarProfile& p) {
  std::string s = "depth_m,sar_Wkg,tissue_name\n";
  for (std::size_t i = 0; i < p.z.size(); ++i) {
    s += fmt::format("{},{},{}\n", num(p.z[i]), num(p.sar[i]), quoted(p.tissue[i]));
  }
  return s;
}

std::string compliance_csv(const dosimetry::ComplianceReport& r) {
  std::string s = "limit_Wkg,begin_m,end_m\n";
  for (const auto& v : r.violations) {
    s += fmt::format("{},{},{}\n", num(r.limit), num(v.begin), num(v.end));
  }
  return s;
}

std::string sparams_csv(const experiments::DifferentialReport& r) {
  const auto& b = r.baseline_sparams;
  const auto& t = r.tumor_sparams;
  std::string s =
      "frequency_hz,in_band,s11_baseline_dB,s11_tumor_dB,delta_s11_dB,s21_baseline_dB,"
      "s21_tumor_dB\n";
  for (std::size_t i = 0; i < b.frequency.size(); ++i) {
    s += fmt::format("{},{},{},{},{},{},{}\n", num(b.frequency[i]), b.in_band[i] ? 1 : 0,
                     num(db(b.s11[i])), num(db(t.s11[i])), num(r.delta_s11_db[i]),
                     num(db(b.s21[i])), num(db(t.s21[i])));
  }
  return s;
}

std::string differential_profile_csv(const experiments::DifferentialReport& r) {
  std::string s =
      "depth_m,e_baseline_Vpm,e_tumor_Vpm,delta_e_Vpm,sar_baseline_Wkg,sar_tumor_Wkg,"
      "delta_sar_Wkg\n";
  for (std::size_t i = 0; i < r.delta_field.size(); ++i) {
    s += fmt::format("{},{},{},{},{},{},{}\n", num(r.baseline_field.z[i]),
                     num(std::abs(r.baseline_field.e[i])), num(std::abs(r.tumor_field.e[i])),
                     num(r.delta_field[i]), num(r.baseline_sar.sar[i]), num(r.tumor_sar.sar[i]),
                     num(r.delta_sar[i]));
  }
  return s;
}

std::string delay_csv(const experiments::DifferentialReport& r) {
  std::string s = "metric,baseline_s,tumor_s,delta_s\n";
  s += fmt::format("cross_correlation,{},{},{}\n", num(r.baseline_delay), num(r.tumor_delay),
                   num(r.delta_delay));
  s += fmt::format("group_delay,{},{},{}\n", num(r.baseline_group_delay),
                   num(r.tumor_group_delay), num(r.delta_group_delay));
  return s;
}

StagedDirectory::StagedDirectory(std::filesystem::path target) : target_(std::move(target)) {
  if (target_.filename().empty()) target_ = target_.parent_path();
  std::error_code ec;
  const auto parent = target_.parent_path();
  if (!parent.empty()) std::filesystem::create_directories(parent, ec);
  if (ec) throw IoError(parent.string(), "cannot create output parent directory");
  staging_ = sibling(target_, "tmp");
  std::filesystem::create_directories(staging_, ec);
  if (ec) throw IoError(staging_.string(), "cannot create staging directory");
}

StagedDirectory::~StagedDirectory() {
  if (!committed_) {
    std::error_code ec;
    std::filesystem::remove_all(staging_, ec);
  }
}

void StagedDirectory::write(const std::string& name, std::string_view contents) {
  const auto path = staging_ / name;
  std::error_code ec;
  std::filesystem::create_directories(path.parent_path(), ec);
  if (ec) throw IoError(path.parent_path().string(), "cannot create directory");
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
  out.close();
  if (!out) throw IoError(path.string(), "cannot write file");
  entries_.push_back({name, contents.size(), sha256_hex(contents)});
}

void StagedDirectory::commit(const std::string& parameters_json) {
  ordered_json manifest;
  manifest["parameters"] = ordered_json::parse(parameters_json);
  ordered_json files = ordered_json::array();
  for (const auto& e : entries_) {
    files.push_back({{"file", e.file}, {"bytes", e.bytes}, {"sha256", e.sha256}});
  }
  manifest["files"] = files;
  const std::string text = manifest.dump(2) + "\n";
  {
    std::ofstream out(staging_ / "manifest.json", std::ios::binary | std::ios::trunc);
    out << text;
    out.close();
    if (!out) throw IoError((staging_ / "manifest.json").string(), "cannot write manifest");
  }

  std::error_code ec;
  std::filesystem::path backup;
  if (std::filesystem::exists(target_)) {
    backup = sibling(target_, "old");
    std::filesystem::rename(target_, backup, ec);
    if (ec) throw IoError(target_.string(), "cannot move previous output aside");
  }
  std::filesystem::rename(staging_, target_, ec);
  if (ec) {
    if (!backup.empty()) std::filesystem::rename(backup, target_, ec);
    throw IoError(target_.string(), "cannot move output into place");
  }
  committed_ = true;
  if (!backup.empty()) std::filesystem::remove_all(backup, ec);
}

void write_penetration(const experiments::PenetrationReport& report, double sar_limit,
                       const std::filesystem::path& dir, const std::string& parameters_json) {
  StagedDirectory out(dir);
  add_penetration(out, "", report, sar_limit);
  out.commit(parameters_with(parameters_json, penetration_summary(report)));
}

void write_differential(const experiments::DifferentialReport& report, double sar_limit,
                        const std::filesystem::path& dir, const std::string& parameters_json) {
  StagedDirectory out(dir);
  add_differential(out, "", report, sar_limit);
  out.commit(parameters_with(parameters_json, differential_summary(report)));
}

void write_sweep(const std::vector<experiments::Report>& reports, experiments::SweepAxis axis,
                 double sar_limit, const std::filesystem::path& dir,
                 const std::string& parameters_json) {
  StagedDirectory out(dir);
  ordered_json summary = ordered_json::array();
  for (std::size_t i = 0; i < reports.size(); ++i) {
    const auto prefix = fmt::format("{:03d}_{}/", i, experiments::to_string(axis));
    if (const auto* p = std::get_if<experiments::PenetrationReport>(&reports[i])) {
      add_penetration(out, prefix, *p, sar_limit);
      summary.push_back(penetration_summary(*p));
    } else {
      const auto& d = std::get<experiments::DifferentialReport>(reports[i]);
      add_differential(out, prefix, d, sar_limit);
      summary.push_back(differential_summary(d));
    }
  }
  out.commit(parameters_with(parameters_json, summary));
}

}  // namespace headsim::report

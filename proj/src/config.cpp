#include "headsim/config.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <numeric>
#include <sstream>

#include <json.hpp>

namespace headsim::config {
namespace {

using nlohmann::json;
using nlohmann::ordered_json;

std::string join(const std::string& path, const std::string& key) {
  return path.empty() ? key : path + "." + key;
}

std::string index(const std::string& path, std::size_t i) {
  return path + "[" + std::to_string(i) + "]";
}

void check_keys(const json& obj, const std::string& path,
                std::initializer_list<const char*> allowed) {
  if (!obj.is_object()) throw ConfigError(path, "expected an object");
  for (const auto& [key, value] : obj.items()) {
    bool known = false;
    for (const char* a : allowed) known = known || key == a;
    if (!known) throw ConfigError(join(path, key), "unknown key");
  }
}

double as_number(const json& j, const std::string& path) {
  if (!j.is_number()) throw ConfigError(path, "expected a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) throw ConfigError(path, "must be finite");
  return v;
}

std::string as_string(const json& j, const std::string& path) {
  if (!j.is_string()) throw ConfigError(path, "expected a string");
  return j.get<std::string>();
}

bool as_bool(const json& j, const std::string& path) {
  if (!j.is_boolean()) throw ConfigError(path, "expected true or false");
  return j.get<bool>();
}

void require(bool ok, const std::string& path, const std::string& message) {
  if (!ok) throw ConfigError(path, message);
}

ExperimentKind parse_experiment(const std::string& s, const std::string& path) {
  for (auto k : {ExperimentKind::Penetration, ExperimentKind::Detection, ExperimentKind::Sweep}) {
    if (to_string(k) == s) return k;
  }
  throw ConfigError(path, "expected \"penetration\", \"detection\" or \"sweep\", got \"" + s + "\"");
}

fdtd::SourceKind parse_preset(const json& j, const std::string& path) {
  const auto s = as_string(j, path);
  if (s == "patch-like") return fdtd::SourceKind::PatchLike;
  if (s == "vivaldi-like") return fdtd::SourceKind::VivaldiLike;
  throw ConfigError(path, "expected \"patch-like\" or \"vivaldi-like\", got \"" + s + "\"");
}

void check_frequency_ghz(double f, const std::string& path) {
  require(f >= experiments::kMinFrequency / 1e9 && f <= experiments::kMaxFrequency / 1e9, path,
          "frequency outside the 0.5-5 GHz band");
}

double default_center_depth_mm() {
  const auto& t = dielectrics::kHeadLayerThickness;
  return std::accumulate(t.begin(), t.begin() + 4, 0.0) * 1e3;
}

void check_slab(double center_mm, double radius_mm, const std::string& path) {
  const double depth_mm = dielectrics::kHeadModelDepth * 1e3;
  require(center_mm - radius_mm >= 0.0 && center_mm + radius_mm <= depth_mm, path,
          "tumor slab must lie within the 0-50 mm head model");
}

TumorConfig parse_tumor(const json& j, const std::string& path) {
  check_keys(j, path,
             {"radius_mm", "center_depth_mm", "eps_r", "sigma_spm", "density_kgm3", "host_matched"});
  TumorConfig t;
  if (j.contains("radius_mm")) t.radius_mm = as_number(j["radius_mm"], join(path, "radius_mm"));
  require(t.radius_mm >= 0.0, join(path, "radius_mm"), "must be >= 0");
  if (j.contains("center_depth_mm")) {
    t.center_depth_mm = as_number(j["center_depth_mm"], join(path, "center_depth_mm"));
  }
  if (j.contains("eps_r")) {
    t.eps_r = as_number(j["eps_r"], join(path, "eps_r"));
    require(*t.eps_r >= 1.0, join(path, "eps_r"), "must be >= 1");
  }
  if (j.contains("sigma_spm")) {
    t.sigma_spm = as_number(j["sigma_spm"], join(path, "sigma_spm"));
    require(*t.sigma_spm >= 0.0, join(path, "sigma_spm"), "must be >= 0");
  }
  if (j.contains("density_kgm3")) {
    t.density_kgm3 = as_number(j["density_kgm3"], join(path, "density_kgm3"));
    require(*t.density_kgm3 > 0.0, join(path, "density_kgm3"), "must be > 0");
  }
  if (j.contains("host_matched")) t.host_matched = as_bool(j["host_matched"], join(path, "host_matched"));
  const double center = t.center_depth_mm.value_or(default_center_depth_mm());
  check_slab(center, t.radius_mm,
             join(path, t.center_depth_mm ? "center_depth_mm" : "radius_mm"));
  return t;
}

GridConfig parse_grid(const json& j, const std::string& path) {
  check_keys(j, path, {"dz_mm", "duration_ns", "cells_per_wavelength", "standoff_mm"});
  GridConfig g;
  if (j.contains("dz_mm")) {
    g.dz_mm = as_number(j["dz_mm"], join(path, "dz_mm"));
    require(*g.dz_mm > 0.0, join(path, "dz_mm"), "must be > 0");
  }
  if (j.contains("duration_ns")) {
    g.duration_ns = as_number(j["duration_ns"], join(path, "duration_ns"));
    require(*g.duration_ns > 0.0, join(path, "duration_ns"), "must be > 0");
  }
  if (j.contains("cells_per_wavelength")) {
    g.cells_per_wavelength = as_number(j["cells_per_wavelength"], join(path, "cells_per_wavelength"));
  }
  require(g.cells_per_wavelength >= 20.0, join(path, "cells_per_wavelength"), "must be >= 20");
  if (j.contains("standoff_mm")) g.standoff_mm = as_number(j["standoff_mm"], join(path, "standoff_mm"));
  require(g.standoff_mm >= 0.0, join(path, "standoff_mm"), "must be >= 0");
  return g;
}

SweepConfig parse_sweep(const json& j, const std::string& path, const TumorConfig& tumor) {
  check_keys(j, path, {"axis", "values"});
  SweepConfig s;
  if (!j.contains("axis")) throw ConfigError(join(path, "axis"), "missing required key");
  const auto axis_name = as_string(j["axis"], join(path, "axis"));
  try {
    s.axis = experiments::parse_sweep_axis(axis_name);
  } catch (const DomainError&) {
    throw ConfigError(join(path, "axis"), "unknown sweep axis \"" + axis_name + "\"");
  }
  const std::string vpath = join(path, "values");
  if (!j.contains("values")) throw ConfigError(vpath, "missing required key");
  const auto& values = j["values"];
  require(values.is_array() && !values.empty(), vpath, "expected a non-empty array");
  for (std::size_t i = 0; i < values.size(); ++i) {
    const std::string p = index(vpath, i);
    if (s.axis == experiments::SweepAxis::Preset) {
      s.presets.push_back(parse_preset(values[i], p));
      continue;
    }
    const double v = as_number(values[i], p);
    switch (s.axis) {
      case experiments::SweepAxis::Frequency: check_frequency_ghz(v, p); break;
      case experiments::SweepAxis::TumorRadius:
        require(v >= 0.0, p, "must be >= 0");
        check_slab(tumor.center_depth_mm.value_or(default_center_depth_mm()), v, p);
        break;
      case experiments::SweepAxis::TumorDepth: check_slab(v, tumor.radius_mm, p); break;
      case experiments::SweepAxis::TumorSigma: require(v >= 0.0, p, "must be >= 0"); break;
      case experiments::SweepAxis::Preset: break;
    }
    s.values.push_back(v);
  }
  return s;
}

}  // namespace

std::string_view to_string(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::Penetration: return "penetration";
    case ExperimentKind::Detection: return "detection";
    case ExperimentKind::Sweep: return "sweep";
  }
  return "penetration";
}

std::vector<double> RunConfig::frequencies_hz() const {
  std::vector<double> out;
  out.reserve(frequencies_ghz.size());
  for (double f : frequencies_ghz) out.push_back(f * 1e9);
  return out;
}

RunConfig parse_config(std::string_view document, const std::filesystem::path& base_dir) {
  json j;
  try {
    j = json::parse(document);
  } catch (const json::parse_error& e) {
    throw ConfigError("", std::string("malformed JSON: ") + e.what());
  }
  check_keys(j, "",
             {"experiment", "tissue_db", "preset", "frequencies_ghz", "tumor", "output_dir", "grid",
              "sar_limit_wkg", "vivaldi_amplitude_vpm", "sweep"});

  RunConfig c;
  if (!j.contains("experiment")) throw ConfigError("experiment", "missing required key");
  c.experiment = parse_experiment(as_string(j["experiment"], "experiment"), "experiment");

  if (j.contains("tissue_db")) {
    std::filesystem::path p = as_string(j["tissue_db"], "tissue_db");
    require(!p.empty(), "tissue_db", "must not be empty");
    if (p.is_relative() && !base_dir.empty()) p = base_dir / p;
    p = p.lexically_normal();
    require(std::filesystem::is_regular_file(p), "tissue_db", "file not found: " + p.string());
    c.tissue_db = p;
  }
  if (j.contains("preset")) c.preset = parse_preset(j["preset"], "preset");
  if (j.contains("frequencies_ghz")) {
    const auto& f = j["frequencies_ghz"];
    require(f.is_array() && !f.empty(), "frequencies_ghz", "expected a non-empty array");
    c.frequencies_ghz.clear();
    for (std::size_t i = 0; i < f.size(); ++i) {
      const std::string p = index("frequencies_ghz", i);
      c.frequencies_ghz.push_back(as_number(f[i], p));
      check_frequency_ghz(c.frequencies_ghz.back(), p);
    }
  }
  if (j.contains("tumor")) {
    require(c.experiment != ExperimentKind::Penetration, "tumor",
            "only detection and sweep experiments take a tumor");
    c.tumor = parse_tumor(j["tumor"], "tumor");
  }
  if (j.contains("output_dir")) {
    c.output_dir = as_string(j["output_dir"], "output_dir");
    require(!c.output_dir.empty(), "output_dir", "must not be empty");
  }
  if (j.contains("grid")) c.grid = parse_grid(j["grid"], "grid");
  if (j.contains("sar_limit_wkg")) c.sar_limit_wkg = as_number(j["sar_limit_wkg"], "sar_limit_wkg");
  require(c.sar_limit_wkg > 0.0, "sar_limit_wkg", "must be > 0");
  if (j.contains("vivaldi_amplitude_vpm")) {
    c.vivaldi_amplitude_vpm = as_number(j["vivaldi_amplitude_vpm"], "vivaldi_amplitude_vpm");
  }
  require(c.vivaldi_amplitude_vpm >= 0.0, "vivaldi_amplitude_vpm", "must be >= 0");

  if (c.experiment == ExperimentKind::Sweep) {
    if (!j.contains("sweep")) throw ConfigError("sweep", "missing required key for a sweep");
    c.sweep = parse_sweep(j["sweep"], "sweep", c.tumor.value_or(TumorConfig{}));
  } else if (j.contains("sweep")) {
    throw ConfigError("sweep", "only allowed when experiment is \"sweep\"");
  }
  return c;
}

RunConfig load_config_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError(path.string(), "cannot open config file");
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) throw IoError(path.string(), "cannot read config file");
  return parse_config(ss.str(), path.parent_path());
}

std::string emit_config(const RunConfig& c) {
  ordered_json j;
  j["experiment"] = std::string(to_string(c.experiment));
  if (c.tissue_db) j["tissue_db"] = c.tissue_db->string();
  j["preset"] = std::string(fdtd::to_string(c.preset));
  j["frequencies_ghz"] = c.frequencies_ghz;
  if (c.tumor) {
    ordered_json t;
    t["radius_mm"] = c.tumor->radius_mm;
    if (c.tumor->center_depth_mm) t["center_depth_mm"] = *c.tumor->center_depth_mm;
    if (c.tumor->eps_r) t["eps_r"] = *c.tumor->eps_r;
    if (c.tumor->sigma_spm) t["sigma_spm"] = *c.tumor->sigma_spm;
    if (c.tumor->density_kgm3) t["density_kgm3"] = *c.tumor->density_kgm3;
    t["host_matched"] = c.tumor->host_matched;
    j["tumor"] = t;
  }
  j["output_dir"] = c.output_dir.string();
  ordered_json g;
  if (c.grid.dz_mm) g["dz_mm"] = *c.grid.dz_mm;
  if (c.grid.duration_ns) g["duration_ns"] = *c.grid.duration_ns;
  g["cells_per_wavelength"] = c.grid.cells_per_wavelength;
  g["standoff_mm"] = c.grid.standoff_mm;
  j["grid"] = g;
  j["sar_limit_wkg"] = c.sar_limit_wkg;
  j["vivaldi_amplitude_vpm"] = c.vivaldi_amplitude_vpm;
  if (c.sweep) {
    ordered_json s;
    s["axis"] = std::string(experiments::to_string(c.sweep->axis));
    if (c.sweep->axis == experiments::SweepAxis::Preset) {
      s["values"] = ordered_json::array();
      for (auto p : c.sweep->presets) s["values"].push_back(std::string(fdtd::to_string(p)));
    } else {
      s["values"] = c.sweep->values;
    }
    j["sweep"] = s;
  }
  return j.dump(2) + "\n";
}

dielectrics::TissueDatabase resolve_tissue_db(const RunConfig& config) {
  if (config.tissue_db) return dielectrics::load_tissue_db_file(*config.tissue_db);
  if (const char* env = std::getenv("HEADSIM_TISSUE_DB"); env && *env) {
    return dielectrics::load_tissue_db_file(env);
  }
  return dielectrics::default_tissue_db();
}

experiments::ExperimentOptions experiment_options(const RunConfig& c) {
  experiments::ExperimentOptions o;
  o.vivaldi_amplitude = c.vivaldi_amplitude_vpm;
  o.standoff = c.grid.standoff_mm * 1e-3;
  o.grid.cells_per_wavelength = c.grid.cells_per_wavelength;
  if (c.grid.dz_mm) o.grid.dz = *c.grid.dz_mm * 1e-3;
  if (c.grid.duration_ns) o.duration = *c.grid.duration_ns * 1e-9;
  return o;
}

experiments::TumorSpec tumor_spec(const RunConfig& c, const dielectrics::TissueDatabase& db) {
  const TumorConfig t = c.tumor.value_or(TumorConfig{});
  experiments::TumorSpec spec;
  spec.radius = t.radius_mm * 1e-3;
  if (t.center_depth_mm) spec.center_depth = *t.center_depth_mm * 1e-3;
  spec.host_matched = t.host_matched;
  if (!t.eps_r && !t.sigma_spm && !t.density_kgm3) return spec;

  dielectrics::TissueRecord rec;
  if (const auto* found = db.find(dielectrics::kTumorTissue)) {
    rec = *found;
  } else {
    require(t.eps_r && t.sigma_spm, "tumor",
            "the tissue database has no Tumor record; give eps_r and sigma_spm");
    rec.name = std::string(dielectrics::kTumorTissue);
    rec.mass_density = 1045.0;
  }
  auto* s = std::get_if<dielectrics::StaticDielectric>(&rec.dispersion);
  if (!s && (t.eps_r || t.sigma_spm)) {
    throw ConfigError("tumor", "eps_r/sigma_spm overrides need a static Tumor record");
  }
  if (t.eps_r) s->eps_r = *t.eps_r;
  if (t.sigma_spm) s->sigma = *t.sigma_spm;
  if (t.density_kgm3) rec.mass_density = *t.density_kgm3;
  spec.tissue = rec;
  return spec;
}

std::vector<experiments::SweepValue> sweep_values(const SweepConfig& s) {
  std::vector<experiments::SweepValue> out;
  if (s.axis == experiments::SweepAxis::Preset) {
    for (auto p : s.presets) out.emplace_back(p);
    return out;
  }
  const double scale = s.axis == experiments::SweepAxis::Frequency  ? 1e9
                       : s.axis == experiments::SweepAxis::TumorSigma ? 1.0
                                                                      : 1e-3;
  for (double v : s.values) out.emplace_back(v * scale);
  return out;
}

}  // namespace headsim::config

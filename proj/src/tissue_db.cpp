#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <json.hpp>

#include "headsim/dielectrics.hpp"

namespace headsim::dielectrics {
namespace {

using nlohmann::json;

const char* const kDefaultDocument =
#include "default_tissues.inc"
    ;

// Mass densities (kg/m³) used when a record omits "density".
const std::map<std::string, double, std::less<>>& default_densities() {
  static const std::map<std::string, double, std::less<>> table = {
      {"Skin", 1109.0}, {"Fat", 911.0},          {"Skull", 1908.0},
      {"Dura Mater", 1174.0}, {"CSF", 1007.0},   {"Gray Matter", 1045.0},
      {"White Matter", 1041.0}, {"Tumor", 1045.0},
  };
  return table;
}

void check_keys(const json& obj, const std::string& path, std::initializer_list<const char*> allowed) {
  if (!obj.is_object()) throw ConfigError(path, "expected an object");
  for (const auto& [key, value] : obj.items()) {
    bool known = false;
    for (const char* a : allowed) known = known || key == a;
    if (!known) throw ConfigError(path.empty() ? key : path + "." + key, "unknown key");
  }
}

double number(const json& obj, const std::string& path, const char* key) {
  const auto it = obj.find(key);
  if (it == obj.end()) throw ConfigError(path + "." + key, "missing required key");
  if (!it->is_number()) throw ConfigError(path + "." + key, "expected a number");
  const double v = it->get<double>();
  if (!std::isfinite(v)) throw ConfigError(path + "." + key, "must be finite");
  return v;
}

void require(bool ok, const std::string& path, const char* message) {
  if (!ok) throw ConfigError(path, message);
}

TissueRecord parse_record(const json& j, const std::string& path) {
  if (!j.is_object()) throw ConfigError(path, "expected an object");
  const auto name_it = j.find("name");
  if (name_it == j.end() || !name_it->is_string() || name_it->get<std::string>().empty()) {
    throw ConfigError(path + ".name", "expected a non-empty string");
  }
  const auto model_it = j.find("model");
  if (model_it == j.end() || !model_it->is_string()) {
    throw ConfigError(path + ".model", "expected \"static\" or \"cole-cole\"");
  }

  TissueRecord rec;
  rec.name = name_it->get<std::string>();
  const std::string model = model_it->get<std::string>();
  if (model == "static") {
    check_keys(j, path, {"name", "model", "eps_r", "sigma", "density", "outer_radius_mm"});
    StaticDielectric s{number(j, path, "eps_r"), number(j, path, "sigma")};
    require(s.eps_r >= 1.0, path + ".eps_r", "must be >= 1");
    require(s.sigma >= 0.0, path + ".sigma", "must be >= 0");
    rec.dispersion = s;
  } else if (model == "cole-cole") {
    check_keys(j, path,
               {"name", "model", "eps_inf", "poles", "sigma_static", "density", "outer_radius_mm"});
    ColeCole cc;
    cc.eps_inf = number(j, path, "eps_inf");
    cc.sigma_static = number(j, path, "sigma_static");
    require(cc.eps_inf >= 1.0, path + ".eps_inf", "must be >= 1");
    require(cc.sigma_static >= 0.0, path + ".sigma_static", "must be >= 0");
    const auto poles = j.find("poles");
    if (poles != j.end()) {
      if (!poles->is_array()) throw ConfigError(path + ".poles", "expected an array");
      for (std::size_t i = 0; i < poles->size(); ++i) {
        const std::string pp = path + ".poles[" + std::to_string(i) + "]";
        const json& pj = (*poles)[i];
        check_keys(pj, pp, {"delta_eps", "tau", "alpha"});
        ColeColePole p{number(pj, pp, "delta_eps"), number(pj, pp, "tau"), number(pj, pp, "alpha")};
        require(p.delta_eps > 0.0, pp + ".delta_eps", "must be > 0");
        require(p.tau > 0.0, pp + ".tau", "must be > 0");
        require(p.alpha >= 0.0 && p.alpha < 1.0, pp + ".alpha", "must lie in [0, 1)");
        cc.poles.push_back(p);
      }
    }
    rec.dispersion = std::move(cc);
  } else {
    throw ConfigError(path + ".model", "expected \"static\" or \"cole-cole\"");
  }

  if (j.contains("density")) {
    rec.mass_density = number(j, path, "density");
    require(rec.mass_density > 0.0, path + ".density", "must be > 0");
  } else {
    const auto& table = default_densities();
    const auto it = table.find(rec.name);
    if (it == table.end()) throw ConfigError(path + ".density", "missing required key");
    rec.mass_density = it->second;
  }
  if (j.contains("outer_radius_mm")) {
    rec.outer_radius_mm = number(j, path, "outer_radius_mm");
    require(*rec.outer_radius_mm > 0.0, path + ".outer_radius_mm", "must be > 0");
  }
  return rec;
}

}  // namespace

TissueDatabase::TissueDatabase(std::vector<TissueRecord> records) : records_(std::move(records)) {
  std::set<std::string, std::less<>> seen;
  for (std::size_t i = 0; i < records_.size(); ++i) {
    const auto& r = records_[i];
    if (!seen.insert(r.name).second) {
      throw ConfigError("tissues[" + std::to_string(i) + "].name", "duplicate tissue '" + r.name + "'");
    }
    if (!(r.mass_density > 0.0)) {
      throw ConfigError("tissues[" + std::to_string(i) + "].density", "must be > 0");
    }
    validate(r.dispersion);
  }
}

const TissueRecord* TissueDatabase::find(std::string_view name) const noexcept {
  for (const auto& r : records_) {
    if (r.name == name) return &r;
  }
  return nullptr;
}

const TissueRecord& TissueDatabase::at(std::string_view name) const {
  if (const auto* r = find(name)) return *r;
  throw DomainError("tissue database has no record named '" + std::string(name) + "'");
}

TissueDatabase load_tissue_db(std::string_view document) {
  if (document.find_first_not_of(" \t\r\n") == std::string_view::npos) return {};
  json root;
  try {
    root = json::parse(document);
  } catch (const json::parse_error& e) {
    throw ConfigError("", std::string("tissue database is not valid JSON: ") + e.what());
  }
  check_keys(root, "", {"tissues"});
  const auto it = root.find("tissues");
  if (it == root.end()) return {};
  if (!it->is_array()) throw ConfigError("tissues", "expected an array");

  std::vector<TissueRecord> records;
  for (std::size_t i = 0; i < it->size(); ++i) {
    records.push_back(parse_record((*it)[i], "tissues[" + std::to_string(i) + "]"));
  }
  return TissueDatabase(std::move(records));
}

TissueDatabase load_tissue_db_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError(path.string(), "cannot open tissue database");
  std::ostringstream buf;
  buf << in.rdbuf();
  return load_tissue_db(buf.str());
}

std::string dump_tissue_db(const TissueDatabase& db) {
  json arr = json::array();
  for (const auto& r : db.records()) {
    json j;
    j["name"] = r.name;
    if (const auto* s = std::get_if<StaticDielectric>(&r.dispersion)) {
      j["model"] = "static";
      j["eps_r"] = s->eps_r;
      j["sigma"] = s->sigma;
    } else {
      const auto& cc = std::get<ColeCole>(r.dispersion);
      j["model"] = "cole-cole";
      j["eps_inf"] = cc.eps_inf;
      j["sigma_static"] = cc.sigma_static;
      json poles = json::array();
      for (const auto& p : cc.poles) {
        poles.push_back({{"delta_eps", p.delta_eps}, {"tau", p.tau}, {"alpha", p.alpha}});
      }
      j["poles"] = std::move(poles);
    }
    j["density"] = r.mass_density;
    if (r.outer_radius_mm) j["outer_radius_mm"] = *r.outer_radius_mm;
    arr.push_back(std::move(j));
  }
  return json{{"tissues", std::move(arr)}}.dump(2) + "\n";
}

const TissueDatabase& default_tissue_db() {
  static const TissueDatabase db = load_tissue_db(kDefaultDocument);
  return db;
}

}  // namespace headsim::dielectrics

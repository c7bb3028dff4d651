// Acceptance suite: one PASS/FAIL line per criterion.
//   usage: headsim_acceptance [path-to-headsim-binary]

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "headsim/cli.hpp"
#include "headsim/dosimetry.hpp"
#include "headsim/experiments.hpp"
#include "headsim/fdtd.hpp"
#include "headsim/tmm.hpp"
#include "oracles.hpp"

using namespace headsim;
using namespace headsim::dielectrics;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

struct Criterion {
  int id;
  const char* name;
  double budget_s;
  std::function<Outcome()> body;
};

std::string g_cli_binary;

// The seven head tissues, as tabulated (eps_r, sigma S/m at 1 GHz).
struct Row {
  const char* name;
  double eps_r;
  double sigma;
};
constexpr Row kTable[] = {
    {"Skin", 40.93, 0.89},       {"Fat", 5.44, 0.05},          {"Skull", 12.36, 0.15},
    {"Dura Mater", 44.201, 0.99}, {"CSF", 68.43, 2.45},         {"Gray Matter", 52.28, 0.98},
    {"White Matter", 38.57, 0.62},
};

Outcome fresnel_oracle() {
  const auto& skin = default_tissue_db().at("Skin");
  const auto sol = tmm::solve_stack(LayerStack({}, free_space(), skin), 1e9);
  const auto expected = oracle::fresnel(1.0, oracle::static_eps(40.93, 0.89, 1e9));
  const double rel = std::abs(sol.gamma - expected) / std::abs(expected);
  return {rel <= 1e-12 && std::abs(std::abs(sol.gamma) - 0.742) < 5e-4,
          fmt::format("|gamma|={:.6f} oracle={:.6f} rel_err={:.2e}", std::abs(sol.gamma),
                      std::abs(expected), rel)};
}

Outcome power_balance() {
  oracle::StackGenerator gen(0xC0FFEE);
  gen.d_min = 1e-5;
  gen.d_max = 40e-3;
  double worst = 0.0, worst_lossless = 0.0, min_a = INFINITY;
  int stacks = 0;
  for (int trial = 0; trial < 256; ++trial, ++stacks) {
    const bool lossless = trial % 8 == 0;
    const auto stack = gen.stack(1 + trial % 7, lossless);
    for (int k = 0; k < 8; ++k) {
      const double f = 0.5e9 + k * (4.5e9 / 7);
      const auto sol = tmm::solve_stack(stack, f);
      const double A = sol.absorptance();
      worst = std::max(worst, std::abs(sol.reflectance() + sol.transmittance() + A - 1.0));
      min_a = std::min(min_a, A);
      if (lossless) worst_lossless = std::max(worst_lossless, std::abs(A));
    }
  }
  return {worst <= 1e-10 && worst_lossless <= 1e-10 && min_a >= 0.0,
          fmt::format("{} stacks x 8 f: max|R+T+A-1|={:.2e} max|A|lossless={:.2e} min A={:.3e}",
                      stacks, worst, worst_lossless, min_a)};
}

Outcome attenuation_oracle() {
  const auto gm = default_tissue_db().at("Gray Matter");
  const double f0 = 1e9;
  const auto probe = fdtd::synthesize_source(fdtd::SourceKind::Custom, f0, 0.1e9, 1.0, 1e-12);
  fdtd::DiscretizationOptions opt;
  opt.cells_per_wavelength = 40;
  const LayerStack half_space({{gm, 100e-3}}, free_space(), gm);
  const auto g = fdtd::discretize(half_space, probe, 10e-3, opt);
  const auto src = probe.resampled(g.dt);
  const fdtd::Grid1D grids[] = {g};
  const auto run = fdtd::run_until_settled(grids, src)[0];
  const auto env = run.envelope_profile();

  // Least-squares slope of ln(e_max) over 10..90 mm of tissue.
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int n = 0;
  for (std::size_t i = 0; i < env.z.size(); ++i) {
    if (env.z[i] < 10e-3 || env.z[i] > 90e-3) continue;
    const double y = std::log(env.e_max[i]);
    sx += env.z[i]; sy += y; sxx += env.z[i] * env.z[i]; sxy += env.z[i] * y;
    ++n;
  }
  const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  const double alpha_fdtd = -slope;
  const double alpha = oracle::attenuation(complex_permittivity(gm.dispersion, f0), f0);
  const double rel = std::abs(alpha_fdtd - alpha) / alpha;
  return {rel <= 0.03, fmt::format("alpha_fdtd={:.3f} Np/m analytic={:.3f} Np/m rel_err={:.2f}% ({} cells fitted)",
                                   alpha_fdtd, alpha, 100 * rel, n)};
}

Outcome cross_solver() {
  oracle::StackGenerator gen(4242);
  gen.eps_max = 70.0;
  gen.sigma_max = 2.5;
  gen.d_min = 1e-3;
  fdtd::DiscretizationOptions opt;
  opt.cells_per_wavelength = 80;
  double worst11 = 0.0, worst21 = 0.0;
  std::size_t bins = 0;
  for (int trial = 0; trial < 32; ++trial) {
    const auto stack = gen.stack(3);
    const auto probe = fdtd::preset_source(fdtd::SourceKind::VivaldiLike, 1.0, 1e-12);
    const auto g = fdtd::discretize(stack, probe, 10e-3, opt);
    const auto src = fdtd::preset_source(fdtd::SourceKind::VivaldiLike, 1.0, g.dt);
    const fdtd::Grid1D grids[] = {fdtd::vacuum_reference(g), g};
    const auto runs = fdtd::run_until_settled(grids, src);
    const auto sp = fdtd::extract_sparams(runs[0], runs[1]);
    for (std::size_t k = 0; k < sp.frequency.size(); ++k) {
      if (!sp.in_band[k]) continue;
      const auto sol = tmm::solve_stack(stack, sp.frequency[k]);
      const double m11 = std::abs(sol.gamma), m21 = std::abs(sol.t);
      worst11 = std::max(worst11, std::abs(std::abs(sp.s11[k]) - m11) / std::max(m11, 0.1));
      worst21 = std::max(worst21, std::abs(std::abs(sp.s21[k]) - m21) / std::max(m21, 0.1));
      ++bins;
    }
  }
  return {worst11 <= 0.02 && worst21 <= 0.02 && bins > 0,
          fmt::format("32 stacks, {} in-band bins: max err |s11|={:.2f}% |s21|={:.2f}% "
                      "(relative, floor 0.1)", bins, 100 * worst11, 100 * worst21)};
}

std::string run_tissues_cli() {
  if (g_cli_binary.empty()) {
    std::ostringstream out, err;
    cli::run({"tissues"}, out, err);
    return out.str();
  }
  const auto tmp = fs::temp_directory_path() / "headsim-acceptance-tissues.txt";
  const auto cmd = fmt::format("\"{}\" tissues > \"{}\"", g_cli_binary, tmp.string());
  if (std::system(cmd.c_str()) != 0) return {};
  std::ifstream in(tmp);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Outcome table_fidelity() {
  const auto text = run_tissues_cli();
  std::istringstream lines(text);
  std::string line;
  std::getline(lines, line);  // header
  int matched = 0;
  std::vector<std::string> misses;
  for (const auto& row : kTable) {
    if (!std::getline(lines, line)) break;
    std::istringstream fields(line);
    std::string name, eps, sigma;
    std::getline(fields, name, ',');
    std::getline(fields, eps, ',');
    std::getline(fields, sigma, ',');
    const auto& rec = default_tissue_db().at(row.name);
    const bool cli_ok = name == row.name && std::stod(eps) == row.eps_r && std::stod(sigma) == row.sigma;
    const bool api_ok = complex_permittivity(rec.dispersion, 1e9).real() == row.eps_r &&
                        effective_conductivity(rec.dispersion, 1e9) == row.sigma &&
                        complex_permittivity(rec.dispersion, 1e9).imag() ==
                            -row.sigma / (2 * kPi * 1e9 * kVacuumPermittivity);
    if (cli_ok && api_ok) matched += 2; else misses.push_back(row.name);
  }
  const bool extra = static_cast<bool>(std::getline(lines, line));
  return {matched == 14 && !extra,
          fmt::format("{}/14 values exact via CLI and complex_permittivity{}", matched,
                      misses.empty() ? "" : fmt::format(" (mismatch: {})", fmt::join(misses, ", ")))};
}

Outcome penetration_trend() {
  const auto r = experiments::penetration_experiment(default_tissue_db(),
                                                     fdtd::SourceKind::VivaldiLike, {2.45e9, 4.5e9});
  const auto& z = r.fields[0].z;
  std::size_t i10 = 0;
  for (std::size_t i = 0; i < z.size(); ++i) {
    if (std::abs(z[i] - 10e-3) < std::abs(z[i10] - 10e-3)) i10 = i;
  }
  const double e245 = std::abs(r.fields[0].e[i10]);
  const double e45 = std::abs(r.fields[1].e[i10]);
  bool monotone = z.front() == 0.0 && std::abs(z.back() - 50e-3) < 1e-12;
  for (const auto& f : r.fields) {
    for (std::size_t i = 1; i < f.z.size(); ++i) monotone = monotone && f.power_envelope[i] < f.power_envelope[i - 1];
  }
  return {e45 < e245 && monotone,
          fmt::format("|E(10 mm)| 2.45 GHz={:.4f} 4.5 GHz={:.4f} V/m; envelopes strictly decreasing "
                      "over 0-50 mm: {}", e245, e45, monotone ? "yes" : "no")};
}

Outcome sar_trend() {
  const auto& db = dielectrics::default_tissue_db();
  const auto head = build_head_stack(db);
  struct Peak {
    double tmm_value, tmm_depth, fdtd_value, fdtd_depth;
  };
  auto peaks = [&](fdtd::SourceKind kind) {
    const auto band = fdtd::preset_band(kind);
    const auto pen = experiments::penetration_experiment(db, kind, {band.center_frequency});
    const auto pt = dosimetry::peak_sar(pen.sar[0]);
    const double amp = experiments::preset_amplitude(kind, 1.0);
    const auto probe = fdtd::preset_source(kind, amp, 1e-12);
    const auto g = fdtd::discretize(head, probe, 10e-3);
    const fdtd::Grid1D grids[] = {g};
    const auto run = fdtd::run_until_settled(grids, probe.resampled(g.dt))[0];
    const auto pf = dosimetry::peak_sar(dosimetry::sar_profile(run.envelope_profile(), head));
    return Peak{pt.value, pt.depth, pf.value, pf.depth};
  };
  const auto patch = peaks(fdtd::SourceKind::PatchLike);
  const auto viv = peaks(fdtd::SourceKind::VivaldiLike);
  const bool shallow = patch.tmm_depth <= 10e-3 && viv.tmm_depth <= 10e-3 &&
                       patch.fdtd_depth <= 10e-3 && viv.fdtd_depth <= 10e-3;
  const bool ordered = patch.tmm_value > viv.tmm_value && patch.fdtd_value > viv.fdtd_value;
  return {shallow && ordered,
          fmt::format("peak SAR tmm patch={:.4g} W/kg @ {:.2f} mm, vivaldi={:.4g} @ {:.2f} mm; "
                      "fdtd patch={:.4g} @ {:.2f} mm, vivaldi={:.4g} @ {:.2f} mm",
                      patch.tmm_value, patch.tmm_depth * 1e3, viv.tmm_value, viv.tmm_depth * 1e3,
                      patch.fdtd_value, patch.fdtd_depth * 1e3, viv.fdtd_value,
                      viv.fdtd_depth * 1e3)};
}

double max_relative(const std::vector<double>& delta, const std::vector<double>& base) {
  double worst = 0.0;
  for (std::size_t i = 0; i < delta.size(); ++i) {
    if (base[i] != 0.0) worst = std::max(worst, std::abs(delta[i]) / std::abs(base[i]));
    else if (delta[i] != 0.0) worst = INFINITY;
  }
  return worst;
}

Outcome tumor_detectability() {
  const auto& db = default_tissue_db();
  const auto r = experiments::tumor_experiment(db, fdtd::SourceKind::VivaldiLike);
  const double ds11 = r.max_in_band_delta_s11_db();
  const bool delay_ok = std::abs(r.delta_delay) > 0.1 * r.run.dt;

  experiments::TumorSpec null_spec;
  null_spec.host_matched = true;
  const auto n = experiments::tumor_experiment(db, fdtd::SourceKind::VivaldiLike, null_spec);
  double null_s11 = 0.0;
  for (std::size_t i = 0; i < n.delta_s11_db.size(); ++i) {
    if (!n.baseline_sparams.in_band[i]) continue;
    // dB difference converted to a relative magnitude change.
    null_s11 = std::max(null_s11, std::abs(std::pow(10.0, n.delta_s11_db[i] / 20.0) - 1.0));
  }
  std::vector<double> base_e;
  for (const auto& e : n.baseline_field.e) base_e.push_back(std::abs(e));
  const double null_field = max_relative(n.delta_field, base_e);
  const double null_sar = max_relative(n.delta_sar, n.baseline_sar.sar);
  const double null_delay = std::abs(n.delta_delay) / n.baseline_delay;
  const double null_worst = std::max({null_s11, null_field, null_sar, null_delay});
  return {ds11 >= 0.5 && delay_ok && null_worst < 1e-6,
          fmt::format("max in-band d|s11|={:.2f} dB, d(delay)={:.1f} ps (0.1 dt={:.3f} ps, "
                      "group-delay oracle {:.1f} ps); null contrast max rel delta={:.1e}",
                      ds11, r.delta_delay * 1e12, 0.1 * r.run.dt * 1e12,
                      r.delta_group_delay * 1e12, null_worst)};
}

Outcome dosimetry_oracle() {
  const auto& db = default_tissue_db();
  const auto head = build_head_stack(db);
  double worst = 0.0, worst_scale = 0.0;
  std::size_t samples = 0;
  for (double f : {0.5e9, 1e9, 2.45e9, 4.5e9, 5e9}) {
    const auto field = tmm::field_profile(tmm::solve_stack(head, f), head, 0.05e-3);
    const auto sar = dosimetry::sar_profile(field, head);
    for (std::size_t i = 0; i < field.z.size(); ++i, ++samples) {
      double sigma = 0.0, rho = 1.0;
      for (std::size_t l = 0; l < head.size(); ++l) {
        const bool last = l + 1 == head.size();
        if (field.z[i] >= head.edges()[l] && (field.z[i] < head.edges()[l + 1] || last)) {
          sigma = std::get<StaticDielectric>(head.layers()[l].tissue.dispersion).sigma;
          rho = head.layers()[l].tissue.mass_density;
          break;
        }
      }
      const double expected = oracle::point_sar(sigma, std::abs(field.e[i]), rho);
      if (expected != sar.sar[i]) worst = std::max(worst, std::abs(expected - sar.sar[i]) / expected);
    }
    for (double k : {0.1, 2.0, 4.5, 31.0}) {
      const auto scaled = dosimetry::sar_profile(field.scaled(k), head);
      for (std::size_t i = 0; i < sar.sar.size(); ++i) {
        const double expect = k * k * sar.sar[i];
        if (expect != scaled.sar[i]) {
          worst_scale = std::max(worst_scale, std::abs(scaled.sar[i] - expect) / expect);
        }
      }
    }
  }
  return {worst <= 1e-15 && worst_scale <= 1e-12,
          fmt::format("{} samples: max rel diff vs recomputation={:.1e}; k^2 scaling max rel err={:.1e}",
                      samples, worst, worst_scale)};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int detect_into(const fs::path& cfg, const fs::path& out) {
  if (g_cli_binary.empty()) {
    std::ostringstream o, e;
    return cli::run({"detect", "--config", cfg.string(), "--out", out.string()}, o, e);
  }
  const auto cmd = fmt::format("\"{}\" detect --config \"{}\" --out \"{}\" > /dev/null", g_cli_binary,
                               cfg.string(), out.string());
  return std::system(cmd.c_str());
}

Outcome determinism() {
  const auto dir = fs::temp_directory_path() / "headsim-acceptance-determinism";
  fs::remove_all(dir);
  fs::create_directories(dir);
  const auto cfg = dir / "detect.json";
  std::ofstream(cfg) << R"({"experiment": "detection", "preset": "patch-like"})";
  if (detect_into(cfg, dir / "a") != 0 || detect_into(cfg, dir / "b") != 0) {
    return {false, "detect failed"};
  }
  int csvs = 0, identical = 0;
  for (const auto& e : fs::directory_iterator(dir / "a")) {
    if (e.path().extension() != ".csv") continue;
    ++csvs;
    if (slurp(e.path()) == slurp(dir / "b" / e.path().filename())) ++identical;
  }
  fs::remove_all(dir);
  return {csvs > 0 && identical == csvs,
          fmt::format("{}/{} CSV files byte-identical across two runs", identical, csvs)};
}

}  // namespace

int main(int argc, char** argv) {
  if (argc > 1) g_cli_binary = argv[1];
  const std::vector<Criterion> criteria = {
      {1, "Fresnel oracle", 1.0, fresnel_oracle},
      {2, "power balance", 10.0, power_balance},
      {3, "attenuation oracle", 30.0, attenuation_oracle},
      {4, "cross-solver equivalence", 300.0, cross_solver},
      {5, "tissue table fidelity", 10.0, table_fidelity},
      {6, "penetration trend", 10.0, penetration_trend},
      {7, "SAR trend", 60.0, sar_trend},
      {8, "tumor detectability", 60.0, tumor_detectability},
      {9, "dosimetry oracle", 10.0, dosimetry_oracle},
      {10, "determinism", 120.0, determinism},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.body();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool in_time = secs <= c.budget_s;
    if (!in_time) o.detail += fmt::format("; over the {:.0f} s budget", c.budget_s);
    const bool pass = o.pass && in_time;
    failed += pass ? 0 : 1;
    std::printf("%s  criterion %2d  %-26s %s  [%.2f s]\n", pass ? "PASS" : "FAIL", c.id, c.name,
                o.detail.c_str(), secs);
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}

#include "headsim/cli.hpp"

#include <algorithm>
#include <iostream>
#include <optional>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "headsim/config.hpp"
#include "headsim/experiments.hpp"
#include "headsim/report_io.hpp"

namespace headsim::cli {
namespace {

std::string escape(std::string s) {
  std::replace(s.begin(), s.end(), '"', '\'');
  std::replace(s.begin(), s.end(), '\n', ' ');
  return s;
}

struct Options {
  std::string config_path;
  std::string db_path;
  std::string out_dir;
  bool all = false;
};

config::RunConfig load(const Options& o, std::optional<config::ExperimentKind> expected) {
  config::RunConfig c;
  if (!o.config_path.empty()) {
    c = config::load_config_file(o.config_path);
  } else if (expected) {
    if (*expected == config::ExperimentKind::Sweep) {
      throw ConfigError("sweep", "the sweep subcommand needs --config with a sweep section");
    }
    c.experiment = *expected;
  }
  if (expected && c.experiment != *expected) {
    throw ConfigError("experiment", fmt::format("config describes a {} experiment",
                                                config::to_string(c.experiment)));
  }
  if (!o.db_path.empty()) c.tissue_db = o.db_path;
  if (!o.out_dir.empty()) c.output_dir = o.out_dir;
  return c;
}

int penetrate(const Options& o, std::ostream& out) {
  const auto c = load(o, config::ExperimentKind::Penetration);
  const auto db = config::resolve_tissue_db(c);
  const auto r = experiments::penetration_experiment(db, c.preset, c.frequencies_hz(),
                                                     config::experiment_options(c));
  report::write_penetration(r, c.sar_limit_wkg, c.output_dir, config::emit_config(c));
  out << fmt::format("penetration: wrote {}\n", c.output_dir.string());
  return kExitOk;
}

int detect(const Options& o, std::ostream& out) {
  const auto c = load(o, config::ExperimentKind::Detection);
  const auto db = config::resolve_tissue_db(c);
  const auto r = experiments::tumor_experiment(db, c.preset, config::tumor_spec(c, db),
                                               config::experiment_options(c));
  report::write_differential(r, c.sar_limit_wkg, c.output_dir, config::emit_config(c));
  out << fmt::format("detection: max in-band delta |s11| {:.3f} dB, delta delay {:.3e} s; wrote {}\n",
                     r.max_in_band_delta_s11_db(), r.delta_delay, c.output_dir.string());
  return kExitOk;
}

int sweep(const Options& o, std::ostream& out) {
  const auto c = load(o, config::ExperimentKind::Sweep);
  const auto db = config::resolve_tissue_db(c);
  experiments::SweepBase base;
  base.preset = c.preset;
  base.frequencies = c.frequencies_hz();
  base.tumor = config::tumor_spec(c, db);
  base.options = config::experiment_options(c);
  const auto reports =
      experiments::sweep(db, c.sweep->axis, config::sweep_values(*c.sweep), base);
  report::write_sweep(reports, c.sweep->axis, c.sar_limit_wkg, c.output_dir,
                      config::emit_config(c));
  out << fmt::format("sweep: {} reports; wrote {}\n", reports.size(), c.output_dir.string());
  return kExitOk;
}

int tissues(const Options& o, std::ostream& out) {
  config::RunConfig c;
  if (!o.db_path.empty()) c.tissue_db = o.db_path;
  const auto db = config::resolve_tissue_db(c);
  std::vector<const dielectrics::TissueRecord*> rows;
  if (o.all) {
    for (const auto& r : db.records()) rows.push_back(&r);
  } else {
    for (auto name : dielectrics::kHeadTissues) rows.push_back(&db.at(name));
  }
  out << "name,eps_r,sigma_Spm,density_kgm3\n";
  for (const auto* r : rows) {
    const double eps = dielectrics::complex_permittivity(r->dispersion, 1e9).real();
    const double sigma = dielectrics::effective_conductivity(r->dispersion, 1e9);
    out << fmt::format("{},{},{},{}\n", r->name, eps, sigma, r->mass_density);
  }
  return kExitOk;
}

int validate(const Options& o, std::ostream& out) {
  const auto c = load(o, std::nullopt);
  out << config::emit_config(c);
  return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Plane-wave and FDTD simulation of microwave propagation through a layered head"};
  app.name("headsim");
  app.require_subcommand(1);
  Options o;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--db", o.db_path, "tissue database (overrides $HEADSIM_TISSUE_DB)");
  };
  auto* pen = app.add_subcommand("penetrate", "field and SAR profiles versus depth");
  auto* det = app.add_subcommand("detect", "baseline versus tumor differential run");
  auto* swp = app.add_subcommand("sweep", "one report per value of a swept parameter");
  for (auto* sub : {pen, det, swp}) {
    sub->add_option("--config", o.config_path, "JSON run configuration");
    sub->add_option("--out", o.out_dir, "output directory (overrides output_dir)");
    add_common(sub);
  }
  auto* tis = app.add_subcommand("tissues", "print the tissue database");
  add_common(tis);
  tis->add_flag("--all", o.all, "include every record, not just the head layers");
  auto* val = app.add_subcommand("validate", "check a configuration without running it");
  val->add_option("--config", o.config_path, "JSON run configuration")->required();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << fmt::format("error kind=usage msg=\"{}\"\n", escape(e.what()));
    return kExitConfig;
  }

  try {
    if (pen->parsed()) return penetrate(o, out);
    if (det->parsed()) return detect(o, out);
    if (swp->parsed()) return sweep(o, out);
    if (tis->parsed()) return tissues(o, out);
    return validate(o, out);
  } catch (const ConfigError& e) {
    err << fmt::format("error kind=config key=\"{}\" msg=\"{}\"\n", escape(e.key_path()),
                       escape(e.what()));
    return kExitConfig;
  } catch (const IoError& e) {
    err << fmt::format("error kind=io path=\"{}\" msg=\"{}\"\n", escape(e.path()),
                       escape(e.what()));
    return kExitIo;
  } catch (const std::exception& e) {
    err << fmt::format("error kind=runtime msg=\"{}\"\n", escape(e.what()));
    return kExitRuntime;
  }
}

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + (argc > 0 ? 1 : 0), argv + argc);
  return run(args, std::cout, std::cerr);
}

}  // namespace headsim::cli

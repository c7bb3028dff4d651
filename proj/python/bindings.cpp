#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "headsim/config.hpp"
#include "headsim/dosimetry.hpp"
#include "headsim/experiments.hpp"
#include "headsim/fdtd.hpp"
#include "headsim/tmm.hpp"

namespace py = pybind11;
using namespace headsim;

namespace {

fdtd::SourceKind preset_of(const std::string& name) { return fdtd::parse_source_kind(name); }

py::dict tumor_summary(const experiments::DifferentialReport& r) {
  py::dict d;
  d["preset"] = std::string(fdtd::to_string(r.preset));
  d["frequency"] = r.baseline_sparams.frequency;
  d["in_band"] = r.baseline_sparams.in_band;
  d["s11_baseline"] = r.baseline_sparams.s11;
  d["s11_tumor"] = r.tumor_sparams.s11;
  d["s21_baseline"] = r.baseline_sparams.s21;
  d["s21_tumor"] = r.tumor_sparams.s21;
  d["delta_s11_db"] = r.delta_s11_db;
  d["max_in_band_delta_s11_db"] = r.max_in_band_delta_s11_db();
  d["baseline_delay"] = r.baseline_delay;
  d["tumor_delay"] = r.tumor_delay;
  d["delta_delay"] = r.delta_delay;
  d["delta_group_delay"] = r.delta_group_delay;
  d["dz"] = r.run.dz;
  d["dt"] = r.run.dt;
  d["steps"] = r.run.steps;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "headsim core bindings";

  py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<IoError>(m, "IoError", PyExc_OSError);
  py::register_exception<NumericalError>(m, "NumericalError", PyExc_ArithmeticError);

  py::class_<dielectrics::StaticDielectric>(m, "StaticDielectric")
      .def(py::init<double, double>(), py::arg("eps_r"), py::arg("sigma"))
      .def_readwrite("eps_r", &dielectrics::StaticDielectric::eps_r)
      .def_readwrite("sigma", &dielectrics::StaticDielectric::sigma);

  py::class_<dielectrics::ColeColePole>(m, "ColeColePole")
      .def(py::init<double, double, double>(), py::arg("delta_eps"), py::arg("tau"),
           py::arg("alpha"))
      .def_readwrite("delta_eps", &dielectrics::ColeColePole::delta_eps)
      .def_readwrite("tau", &dielectrics::ColeColePole::tau)
      .def_readwrite("alpha", &dielectrics::ColeColePole::alpha);

  py::class_<dielectrics::ColeCole>(m, "ColeCole")
      .def(py::init<double, std::vector<dielectrics::ColeColePole>, double>(), py::arg("eps_inf"),
           py::arg("poles"), py::arg("sigma_static"))
      .def_readwrite("eps_inf", &dielectrics::ColeCole::eps_inf)
      .def_readwrite("poles", &dielectrics::ColeCole::poles)
      .def_readwrite("sigma_static", &dielectrics::ColeCole::sigma_static);

  m.def("complex_permittivity",
        py::overload_cast<const dielectrics::DispersionSpec&, double>(&dielectrics::complex_permittivity),
        py::arg("model"), py::arg("frequency"));

  py::class_<dielectrics::TissueRecord>(m, "TissueRecord")
      .def(py::init([](std::string name, dielectrics::DispersionSpec d, double rho) {
             return dielectrics::TissueRecord{std::move(name), std::move(d), rho, std::nullopt};
           }),
           py::arg("name"), py::arg("dispersion"), py::arg("mass_density"))
      .def_readonly("name", &dielectrics::TissueRecord::name)
      .def_readonly("dispersion", &dielectrics::TissueRecord::dispersion)
      .def_readonly("mass_density", &dielectrics::TissueRecord::mass_density)
      .def("permittivity", [](const dielectrics::TissueRecord& t, double f) {
        return dielectrics::complex_permittivity(t.dispersion, f);
      });
  m.def("free_space", &dielectrics::free_space);

  m.def("default_tissue_db", [] { return dielectrics::default_tissue_db().records(); });
  m.def("load_tissue_db",
        [](const std::string& path) { return dielectrics::load_tissue_db_file(path).records(); },
        py::arg("path"));

  py::class_<dielectrics::Layer>(m, "Layer")
      .def(py::init<dielectrics::TissueRecord, double>(), py::arg("tissue"), py::arg("thickness"))
      .def_readonly("tissue", &dielectrics::Layer::tissue)
      .def_readonly("thickness", &dielectrics::Layer::thickness);

  py::class_<dielectrics::LayerStack>(m, "LayerStack")
      .def(py::init<std::vector<dielectrics::Layer>, dielectrics::TissueRecord, dielectrics::TissueRecord>(),
           py::arg("layers"), py::arg("front") = dielectrics::free_space(),
           py::arg("back") = dielectrics::free_space())
      .def_property_readonly("layers", &dielectrics::LayerStack::layers)
      .def_property_readonly("edges", &dielectrics::LayerStack::edges)
      .def_property_readonly("total_thickness", &dielectrics::LayerStack::total_thickness)
      .def("layer_at", &dielectrics::LayerStack::layer_at)
      .def("reversed", &dielectrics::LayerStack::reversed);
  m.def("build_head_stack", [] { return dielectrics::build_head_stack(dielectrics::default_tissue_db()); });

  py::class_<tmm::PlaneWaveSolution>(m, "PlaneWaveSolution")
      .def_readonly("frequency", &tmm::PlaneWaveSolution::frequency)
      .def_readonly("gamma", &tmm::PlaneWaveSolution::gamma)
      .def_readonly("t", &tmm::PlaneWaveSolution::t)
      .def_property_readonly("reflectance", &tmm::PlaneWaveSolution::reflectance)
      .def_property_readonly("transmittance", &tmm::PlaneWaveSolution::transmittance)
      .def_property_readonly("absorptance", &tmm::PlaneWaveSolution::absorptance);
  m.def("solve_stack", &tmm::solve_stack, py::arg("stack"), py::arg("frequency"));
  m.def("return_loss", &tmm::return_loss);
  m.def("vswr", &tmm::vswr);

  py::class_<tmm::FieldProfile>(m, "FieldProfile")
      .def_readonly("frequency", &tmm::FieldProfile::frequency)
      .def_readonly("z", &tmm::FieldProfile::z)
      .def_readonly("e", &tmm::FieldProfile::e)
      .def_readonly("power_envelope", &tmm::FieldProfile::power_envelope)
      .def("scaled", &tmm::FieldProfile::scaled);
  m.def("field_profile", &tmm::field_profile, py::arg("solution"), py::arg("stack"), py::arg("dz"));

  py::class_<dosimetry::SarProfile>(m, "SarProfile")
      .def_readonly("z", &dosimetry::SarProfile::z)
      .def_readonly("sar", &dosimetry::SarProfile::sar)
      .def_readonly("tissue", &dosimetry::SarProfile::tissue);
  m.def("sar_profile",
        py::overload_cast<const tmm::FieldProfile&, const dielectrics::LayerStack&>(&dosimetry::sar_profile));
  m.def("peak_sar", [](const dosimetry::SarProfile& p) {
    const auto peak = dosimetry::peak_sar(p);
    return py::make_tuple(peak.value, peak.depth);
  });

  m.def("synthesize_source",
        [](const std::string& preset, double amplitude, double dt) {
          return fdtd::preset_source(preset_of(preset), amplitude, dt).samples;
        },
        py::arg("preset"), py::arg("amplitude"), py::arg("dt"));
  m.def("propagation_delay",
        [](const std::vector<double>& tx, const std::vector<double>& rx, double dt) {
          return fdtd::propagation_delay(tx, rx, dt);
        },
        py::arg("tx"), py::arg("rx"), py::arg("dt"));

  m.def("penetration_experiment",
        [](const std::string& preset, const std::vector<double>& frequencies) {
          const auto r = experiments::penetration_experiment(dielectrics::default_tissue_db(),
                                                             preset_of(preset), frequencies);
          return py::make_tuple(r.fields, r.sar);
        },
        py::arg("preset"), py::arg("frequencies"));
  m.def("tumor_experiment",
        [](const std::string& preset, bool host_matched) {
          experiments::TumorSpec spec;
          spec.host_matched = host_matched;
          return tumor_summary(
              experiments::tumor_experiment(dielectrics::default_tissue_db(), preset_of(preset), spec));
        },
        py::arg("preset") = "vivaldi-like", py::arg("host_matched") = false);

  m.def("parse_config", [](const std::string& doc) {
    return config::emit_config(config::parse_config(doc));
  }, "Validate a JSON run configuration and return its canonical form.");
}

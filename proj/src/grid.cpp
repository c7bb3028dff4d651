#include <algorithm>
#include <cmath>
#include <limits>

#include "headsim/fdtd.hpp"

namespace headsim::fdtd {
namespace {

struct Medium {
  double eps_r;
  double sigma;
  double density;
  bool operator==(const Medium&) const = default;
};

// FDTD media are non-dispersive: Cole-Cole tissues are frozen at the source
// centre frequency.
Medium frozen(const dielectrics::TissueRecord& t, double f0) {
  if (const auto* s = std::get_if<dielectrics::StaticDielectric>(&t.dispersion)) {
    return {s->eps_r, s->sigma, t.mass_density};
  }
  const Complex eps = dielectrics::complex_permittivity(t.dispersion, f0);
  return {eps.real(), dielectrics::effective_conductivity(t.dispersion, f0), t.mass_density};
}

double wavelength(const dielectrics::TissueRecord& t, double f) {
  const double n = std::sqrt(dielectrics::complex_permittivity(t.dispersion, f)).real();
  return kSpeedOfLight / (f * n);
}

struct Segment {
  double begin;
  double end;
  Medium medium;
};

}  // namespace

std::string_view to_string(ResolutionRule rule) {
  switch (rule) {
    case ResolutionRule::Wavelength: return "wavelength";
    case ResolutionRule::LayerFloor: return "layer-floor";
    case ResolutionRule::Override: return "override";
  }
  return "wavelength";
}

double Grid1D::two_way_transit_time() const {
  double optical = 0.0;
  for (double e : eps_r) optical += std::sqrt(e);
  return 2.0 * optical * dz / kSpeedOfLight;
}

bool Grid1D::same_extents(const Grid1D& o) const {
  return size() == o.size() && dz == o.dz && dt == o.dt && source_index == o.source_index &&
         tx_index == o.tx_index && rx_index == o.rx_index && stack_front == o.stack_front;
}

bool Grid1D::is_vacuum() const {
  return std::all_of(eps_r.begin(), eps_r.end(), [](double e) { return e == 1.0; }) &&
         std::all_of(sigma.begin(), sigma.end(), [](double s) { return s == 0.0; });
}

Grid1D vacuum_reference(const Grid1D& grid) {
  Grid1D g = grid;
  const double air = dielectrics::free_space().mass_density;
  std::fill(g.eps_r.begin(), g.eps_r.end(), 1.0);
  std::fill(g.sigma.begin(), g.sigma.end(), 0.0);
  std::fill(g.mass_density.begin(), g.mass_density.end(), air);
  return g;
}

Grid1D discretize(const dielectrics::LayerStack& stack, const SourceWaveform& source,
                  double standoff, const DiscretizationOptions& opt) {
  if (!(standoff >= 0.0) || !std::isfinite(standoff)) {
    throw DomainError("discretize: standoff must be non-negative");
  }
  if (!(opt.courant > 0.0) || opt.courant > 0.99) {
    throw DomainError("discretize: Courant number must lie in (0, 0.99]");
  }
  if (!(opt.cells_per_wavelength >= 20.0)) {
    throw DomainError("discretize: at least 20 cells per wavelength are required");
  }
  if (opt.min_cells_per_layer < 2) throw DomainError("discretize: layers need at least 2 cells");

  const double f_hi = source.upper_band_edge();
  const double f0 = source.center_frequency;

  Grid1D g;
  g.min_wavelength = std::min(wavelength(stack.front(), f_hi), wavelength(stack.back(), f_hi));
  for (const auto& layer : stack.layers()) {
    g.min_wavelength = std::min(g.min_wavelength, wavelength(layer.tissue, f_hi));
  }
  g.wavelength_limit = g.min_wavelength / opt.cells_per_wavelength;
  g.layer_limit = stack.size() == 0 ? std::numeric_limits<double>::infinity()
                                    : stack.thinnest_layer() / opt.min_cells_per_layer;
  const double required = std::min(g.wavelength_limit, g.layer_limit);
  if (opt.dz) {
    if (!(*opt.dz > 0.0) || *opt.dz > required * (1.0 + 1e-12)) {
      throw DomainError("discretize: dz override is coarser than the resolution rules allow");
    }
    g.dz = *opt.dz;
    g.bound_by = ResolutionRule::Override;
  } else {
    g.dz = required;
    g.bound_by = g.layer_limit < g.wavelength_limit ? ResolutionRule::LayerFloor
                                                    : ResolutionRule::Wavelength;
  }
  g.dt = opt.courant * g.dz / kSpeedOfLight;

  const double dz = g.dz;
  const std::size_t margin = std::max<std::size_t>(opt.margin_cells, 4);
  g.source_index = margin;
  g.tx_index = margin;
  const double standoff_cells = std::round(standoff / dz);
  g.stack_front = (static_cast<double>(g.source_index) + standoff_cells + 0.5) * dz;
  g.standoff = g.stack_front - g.position(g.source_index);

  // Interface positions along the grid.
  std::vector<double> edges;
  edges.reserve(stack.size() + 1);
  for (double e : stack.edges()) {
    double pos = g.stack_front + e;
    if (opt.interfaces == InterfaceTreatment::Snap) pos = (std::round(pos / dz - 0.5) + 0.5) * dz;
    edges.push_back(pos);
  }
  g.stack_back = edges.back();
  for (std::size_t i = 0; i < stack.size(); ++i) {
    if (edges[i + 1] - edges[i] < opt.min_cells_per_layer * dz * (1.0 - 1e-9)) {
      throw DomainError("discretize: layer '" + stack.layers()[i].tissue.name +
                        "' is thinner than the minimum cell count at this dz");
    }
  }

  g.rx_index = static_cast<std::size_t>(std::llround((g.stack_back + opt.rx_offset) / dz));
  g.rx_index = std::max(g.rx_index, static_cast<std::size_t>(std::ceil(g.stack_back / dz)));
  const std::size_t n = g.rx_index + margin + 1;

  const double inf = std::numeric_limits<double>::infinity();
  std::vector<Segment> segments;
  segments.push_back({-inf, edges.front(), frozen(stack.front(), f0)});
  for (std::size_t i = 0; i < stack.size(); ++i) {
    segments.push_back({edges[i], edges[i + 1], frozen(stack.layers()[i].tissue, f0)});
  }
  segments.push_back({edges.back(), inf, frozen(stack.back(), f0)});

  g.eps_r.resize(n);
  g.sigma.resize(n);
  g.mass_density.resize(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double lo = (static_cast<double>(k) - 0.5) * dz;
    const double hi = (static_cast<double>(k) + 0.5) * dz;
    Medium sum{0.0, 0.0, 0.0};
    const Medium* uniform = nullptr;
    bool mixed = false;
    double weight = 0.0;
    for (const auto& s : segments) {
      const double overlap = std::min(hi, s.end) - std::max(lo, s.begin);
      if (overlap <= 0.0) continue;
      if (!uniform) uniform = &s.medium; else mixed = mixed || !(*uniform == s.medium);
      sum.eps_r += overlap * s.medium.eps_r;
      sum.sigma += overlap * s.medium.sigma;
      sum.density += overlap * s.medium.density;
      weight += overlap;
    }
    const Medium m = mixed ? Medium{sum.eps_r / weight, sum.sigma / weight, sum.density / weight}
                           : *uniform;
    g.eps_r[k] = m.eps_r;
    g.sigma[k] = m.sigma;
    g.mass_density[k] = m.density;
  }
  return g;
}

}  // namespace headsim::fdtd

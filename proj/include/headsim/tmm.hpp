#pragma once

#include <cstddef>
#include <vector>

#include "headsim/common.hpp"
#include "headsim/dielectrics.hpp"

namespace headsim::tmm {

/// η = η₀/√ε on the branch with Re√ε >= 0. Throws DomainError for ε = 0.
Complex wave_impedance(Complex eps);

/// γ = α + jβ = j(ω/c)√ε; α >= 0 for passive media.
Complex propagation_constant(Complex eps, double frequency);

/// Plane-wave amplitudes inside one layer. With local depth z' in [0, d]:
///   E(z') = forward·e^{-γz'} + backward·e^{-γ(d-z')}
/// so both terms stay bounded however lossy or thick the layer is.
struct LayerWave {
  Complex forward;   // forward amplitude at the layer's front face
  Complex backward;  // backward amplitude at the layer's back face
  Complex gamma;     // propagation constant, 1/m
  Complex eta;       // wave impedance, Ω
  Complex eps;       // complex relative permittivity
  double thickness = 0.0;

  Complex e(double local_z) const;
  Complex h(double local_z) const;
};

/// Normal-incidence solution for a unit-amplitude plane wave arriving from
/// the front medium. S11 is referenced at the front interface.
struct PlaneWaveSolution {
  double frequency = 0.0;
  Complex gamma;  // reflection coefficient
  Complex t;      // field transmission coefficient into the back medium
  Complex eta_front;
  Complex eta_back;
  std::vector<LayerWave> layers;

  double reflectance() const;
  double transmittance() const;
  /// Absorbed fraction from the volume integral of ½ωε₀ε''|E|² over every
  /// layer. Computed independently of reflectance/transmittance, so
  /// R + T + A = 1 is a genuine check of the solution.
  double absorptance() const;
};

PlaneWaveSolution solve_stack(const dielectrics::LayerStack& stack, double frequency);

struct FieldProfile {
  double frequency = 0.0;
  std::vector<double> z;             // m, depth from the front face
  std::vector<Complex> e;            // V/m for unit incident amplitude (times `amplitude`)
  std::vector<std::size_t> layer;    // index into the stack
  // Amplitude of a free-space plane wave carrying the same time-averaged
  // power flux as the field at z. Non-increasing in depth for passive stacks.
  std::vector<double> power_envelope;
  double amplitude = 1.0;            // incident amplitude the samples are scaled by

  FieldProfile scaled(double factor) const;
};

/// Samples the field on a uniform grid spanning [0, total thickness]. The
/// effective spacing is total/ceil(total/dz). Throws DomainError when dz is
/// not positive or exceeds a quarter of the thinnest layer.
FieldProfile field_profile(const PlaneWaveSolution& solution,
                           const dielectrics::LayerStack& stack, double dz);

/// -20·log10|Γ|; +infinity for Γ = 0. Throws DomainError for |Γ| > 1.
double return_loss(Complex gamma);

/// (1+|Γ|)/(1-|Γ|). Throws DomainError for |Γ| >= 1.
double vswr(Complex gamma);

/// -d(arg t)/dω by central difference, seconds.
double transmission_group_delay(const dielectrics::LayerStack& stack, double frequency,
                                double relative_step = 1e-4);

}  // namespace headsim::tmm

#pragma once

// Independent reference implementations used only by the tests.

#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include "headsim/dielectrics.hpp"

namespace oracle {

using cd = std::complex<double>;
inline constexpr double c0 = 299792458.0;
inline constexpr double e0 = 8.8541878128e-12;
inline constexpr double pi = 3.14159265358979323846;

inline cd static_eps(double eps_r, double sigma, double f) {
  return {eps_r, -sigma / (2 * pi * f * e0)};
}

// Principal refractive index n' - j n'' with n', n'' >= 0, from the
// textbook closed form rather than std::sqrt.
inline cd refractive_index(cd eps) {
  const double mag = std::abs(eps);
  const double n_re = std::sqrt((mag + eps.real()) / 2);
  const double n_im = std::sqrt((mag - eps.real()) / 2);
  return {n_re, eps.imag() <= 0 ? -n_im : n_im};
}

inline double attenuation(cd eps, double f) {
  return 2 * pi * f / c0 * std::abs(refractive_index(eps).imag());
}

inline cd fresnel(cd eps1, cd eps2) {
  const cd n1 = refractive_index(eps1), n2 = refractive_index(eps2);
  return (n1 - n2) / (n1 + n2);
}

struct Slab {
  cd eps;
  double d;
};

struct Scattering {
  cd gamma;
  cd t;
};

// Classical characteristic (ABCD) matrix product for normal incidence.
inline Scattering characteristic_matrix(const std::vector<Slab>& slabs, cd eps_front, cd eps_back,
                                        double f) {
  const double k0 = 2 * pi * f / c0;
  const double eta0 = 376.730313668;
  cd m11 = 1, m12 = 0, m21 = 0, m22 = 1;
  for (const auto& s : slabs) {
    const cd n = refractive_index(s.eps);
    const cd eta = eta0 / n;
    const cd delta = k0 * n * s.d;
    const cd a = std::cos(delta), b = cd(0, 1) * eta * std::sin(delta);
    const cd c = cd(0, 1) * std::sin(delta) / eta, d = std::cos(delta);
    const cd n11 = m11 * a + m12 * c, n12 = m11 * b + m12 * d;
    const cd n21 = m21 * a + m22 * c, n22 = m21 * b + m22 * d;
    m11 = n11; m12 = n12; m21 = n21; m22 = n22;
  }
  const cd eta_f = eta0 / refractive_index(eps_front);
  const cd eta_b = eta0 / refractive_index(eps_back);
  const cd B = m11 + m12 / eta_b;
  const cd C = m21 + m22 / eta_b;
  const cd t = 2.0 / (B + eta_f * C);
  return {t * B - 1.0, t};
}

inline double point_sar(double sigma, double e, double rho) { return sigma * e * e / (2 * rho); }

// Property-test generator: tissue-like static layers.
struct StackGenerator {
  std::mt19937_64 rng;
  double eps_max = 80.0;
  double sigma_max = 3.0;
  double d_min = 0.5e-3;
  double d_max = 15e-3;

  explicit StackGenerator(std::uint64_t seed) : rng(seed) {}

  double uniform(double a, double b) { return std::uniform_real_distribution<double>(a, b)(rng); }

  headsim::dielectrics::TissueRecord tissue(int i, bool lossless = false) {
    headsim::dielectrics::TissueRecord t;
    t.name = "T" + std::to_string(i);
    t.dispersion = headsim::dielectrics::StaticDielectric{uniform(1.0, eps_max),
                                                          lossless ? 0.0 : uniform(0.0, sigma_max)};
    t.mass_density = uniform(900.0, 2000.0);
    return t;
  }

  headsim::dielectrics::LayerStack stack(int layers, bool lossless = false) {
    std::vector<headsim::dielectrics::Layer> out;
    for (int i = 0; i < layers; ++i) out.push_back({tissue(i, lossless), uniform(d_min, d_max)});
    return headsim::dielectrics::LayerStack(out);
  }
};

inline std::vector<Slab> slabs_of(const headsim::dielectrics::LayerStack& s, double f) {
  std::vector<Slab> out;
  for (const auto& l : s.layers()) {
    out.push_back({headsim::dielectrics::complex_permittivity(l.tissue.dispersion, f), l.thickness});
  }
  return out;
}

}  // namespace oracle

#include <doctest.h>

#include <cmath>

#include "headsim/tmm.hpp"
#include "../oracles.hpp"

using namespace headsim;
using namespace headsim::dielectrics;

namespace {

LayerStack single(const TissueRecord& t, double d) { return LayerStack({{t, d}}); }

TissueRecord record(const char* name, double eps, double sigma) {
  TissueRecord r;
  r.name = name;
  r.dispersion = StaticDielectric{eps, sigma};
  r.mass_density = 1000.0;
  return r;
}

}  // namespace

TEST_CASE("air to skin half-space matches Fresnel") {
  const auto& skin = default_tissue_db().at("Skin");
  const LayerStack interface({}, free_space(), skin);
  const auto sol = tmm::solve_stack(interface, 1e9);
  const auto expected = oracle::fresnel(1.0, oracle::static_eps(40.93, 0.89, 1e9));
  CHECK(std::abs(sol.gamma - expected) <= 1e-12 * std::abs(expected));
  CHECK(std::abs(sol.gamma) == doctest::Approx(0.741977).epsilon(1e-6));
  CHECK(tmm::return_loss(sol.gamma) == doctest::Approx(2.5923).epsilon(1e-4));
  CHECK(tmm::vswr(sol.gamma) == doctest::Approx(6.751).epsilon(1e-3));
}

TEST_CASE("solver agrees with the characteristic-matrix oracle") {
  oracle::StackGenerator gen(11);
  gen.d_max = 8e-3;
  for (int trial = 0; trial < 64; ++trial) {
    const auto stack = gen.stack(1 + trial % 4);
    for (double f : {0.5e9, 1.7e9, 3.3e9, 5e9}) {
      const auto sol = tmm::solve_stack(stack, f);
      const auto ref = oracle::characteristic_matrix(oracle::slabs_of(stack, f), 1.0, 1.0, f);
      CHECK(std::abs(sol.gamma - ref.gamma) <= 1e-9);
      CHECK(std::abs(sol.t - ref.t) <= 1e-9 * std::max(1.0, std::abs(ref.t)));
    }
  }
}

TEST_CASE("power balance and passivity over random stacks") {
  oracle::StackGenerator gen(2024);
  for (int trial = 0; trial < 128; ++trial) {
    const bool lossless = trial % 4 == 0;
    const auto stack = gen.stack(1 + trial % 5, lossless);
    const double f = gen.uniform(0.5e9, 5e9);
    const auto sol = tmm::solve_stack(stack, f);
    const double R = sol.reflectance(), T = sol.transmittance(), A = sol.absorptance();
    CHECK(std::abs(R + T + A - 1.0) <= 1e-10);
    CHECK(std::abs(sol.gamma) <= 1.0);
    if (lossless) CHECK(std::abs(A) <= 1e-10); else CHECK(A > 0.0);
  }
}

TEST_CASE("structural invariances") {
  oracle::StackGenerator gen(5);
  for (int trial = 0; trial < 32; ++trial) {
    const auto base = gen.stack(3);
    const double f = gen.uniform(0.5e9, 5e9);
    const auto ref = tmm::solve_stack(base, f);

    // A vanishing layer changes nothing.
    auto layers = base.layers();
    layers.insert(layers.begin() + 1, {gen.tissue(9), 1e-15});
    const auto thin = tmm::solve_stack(LayerStack(layers), f);
    CHECK(std::abs(thin.gamma - ref.gamma) <= 1e-9);
    CHECK(std::abs(thin.t - ref.t) <= 1e-9);

    // Splitting a layer into two of the same tissue.
    auto split = base.layers();
    const auto middle = split[1];
    split[1].thickness = middle.thickness * 0.3;
    split.insert(split.begin() + 2, {middle.tissue, middle.thickness * 0.7});
    const auto merged = tmm::solve_stack(LayerStack(split), f);
    CHECK(std::abs(merged.gamma - ref.gamma) <= 1e-12);
    CHECK(std::abs(merged.t - ref.t) <= 1e-12);

    // Reciprocity of transmitted power.
    const auto rev = tmm::solve_stack(base.reversed(), f);
    CHECK(std::abs(rev.transmittance() - ref.transmittance()) <= 1e-10);
  }
}

TEST_CASE("|gamma| <= 1 across a random passive sweep") {
  oracle::StackGenerator gen(77);
  gen.d_min = 1e-5;
  gen.d_max = 60e-3;
  int checked = 0;
  for (int trial = 0; trial < 256; ++trial) {
    const auto stack = gen.stack(1 + trial % 7);
    const auto sol = tmm::solve_stack(stack, gen.uniform(0.5e9, 5e9));
    CHECK(std::abs(sol.gamma) <= 1.0);
    CHECK(std::isfinite(std::abs(sol.t)));
    ++checked;
  }
  CHECK(checked == 256);
}

TEST_CASE("a thick lossy layer is solved without overflow") {
  const auto csf = default_tissue_db().at("CSF");
  const auto sol = tmm::solve_stack(single(csf, 2.0), 5e9);  // 2 m of CSF
  CHECK(std::isfinite(sol.gamma.real()));
  CHECK(std::abs(sol.t) < 1e-30);
  CHECK(std::abs(sol.reflectance() + sol.transmittance() + sol.absorptance() - 1.0) <= 1e-10);
}

TEST_CASE("attenuation constant of gray matter") {
  const auto& gm = default_tissue_db().at("Gray Matter");
  const Complex eps = complex_permittivity(gm.dispersion, 1e9);
  const double alpha = tmm::propagation_constant(eps, 1e9).real();
  CHECK(alpha == doctest::Approx(oracle::attenuation(eps, 1e9)).epsilon(1e-12));
  CHECK(alpha == doctest::Approx(25.18503).epsilon(1e-6));
  CHECK(tmm::propagation_constant(1.0, 1e9).real() == 0.0);
}

TEST_CASE("frozen head-stack reflection values") {
  const auto head = build_head_stack(default_tissue_db());
  CHECK(std::abs(tmm::solve_stack(head, 1e9).gamma) == doctest::Approx(0.6612055).epsilon(1e-6));
  CHECK(std::abs(tmm::solve_stack(head, 2.45e9).gamma) == doctest::Approx(0.4535846).epsilon(1e-6));
  CHECK(std::abs(tmm::solve_stack(head, 4.5e9).gamma) == doctest::Approx(0.8448442).epsilon(1e-6));
}

TEST_CASE("field profile is continuous and consistent with the boundary values") {
  const auto head = build_head_stack(default_tissue_db());
  const auto sol = tmm::solve_stack(head, 2.45e9);
  const auto p = tmm::field_profile(sol, head, 0.05e-3);
  CHECK(p.z.front() == 0.0);
  CHECK(p.z.back() == doctest::Approx(50e-3).epsilon(1e-12));
  CHECK(std::abs(p.e.front() - (1.0 + sol.gamma)) <= 1e-12);
  CHECK(std::abs(p.e.back() - sol.t) <= 1e-10);
  for (std::size_t i = 1; i < p.z.size(); ++i) {
    CHECK(std::abs(p.e[i] - p.e[i - 1]) < 0.05);
    CHECK(p.power_envelope[i] <= p.power_envelope[i - 1] * (1 + 1e-12));
  }
  CHECK(std::abs(p.e[200]) == doctest::Approx(0.249882).epsilon(1e-5));  // 10 mm

  const auto scaled = p.scaled(3.0);
  CHECK(scaled.amplitude == 3.0);
  CHECK(std::abs(scaled.e[17] - 3.0 * p.e[17]) <= 1e-15);
  CHECK_THROWS_AS(tmm::field_profile(sol, head, 0.1e-3), DomainError);
  CHECK_THROWS_AS(tmm::field_profile(sol, head, 0.0), DomainError);
}

TEST_CASE("return loss and VSWR") {
  CHECK(std::isinf(tmm::return_loss(0.0)));
  CHECK(tmm::return_loss(0.1) == doctest::Approx(20.0));
  CHECK(tmm::vswr(0.0) == 1.0);
  CHECK(tmm::vswr(0.5) == doctest::Approx(3.0));
  CHECK_THROWS_AS(tmm::return_loss(1.01), DomainError);
  CHECK_THROWS_AS(tmm::vswr(1.0), DomainError);
}

TEST_CASE("group delay of a lossless slab") {
  const auto glass = record("G", 4.0, 0.0);
  const auto sol_delay = tmm::transmission_group_delay(single(record("V", 1.0, 0.0), 30e-3), 2e9);
  CHECK(sol_delay == doctest::Approx(30e-3 / oracle::c0).epsilon(1e-6));
  CHECK(tmm::transmission_group_delay(single(glass, 30e-3), 2e9) > 30e-3 / oracle::c0);
}

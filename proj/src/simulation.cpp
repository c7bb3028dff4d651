#include <algorithm>
#include <cmath>
#include <memory>

#include "headsim/fdtd.hpp"

namespace headsim::fdtd {
namespace {

constexpr std::size_t kAuxSourceOffset = 4;  // aux node that maps onto the Tx plane
constexpr std::size_t kAuxTail = 32;

double mur_coefficient(double eps_r, double dt, double dz) {
  const double v = kSpeedOfLight / std::sqrt(eps_r);
  return (v * dt - dz) / (v * dt + dz);
}

// One grid's state while stepping. Fields use Ĥ = η₀·H so both share V/m:
//   Ĥ[k+½] -= S (E[k+1] - E[k]),  E[k] = ca E[k] - cb (Ĥ[k+½] - Ĥ[k-½]).
// The incident wave comes from an auxiliary 1-D line of the front medium
// with identical dz/dt, so the TF/SF split is exact on the discrete grid.
class Simulator {
 public:
  Simulator(const Grid1D& grid, const SourceWaveform& source) : g_(grid) {
    if (grid.size() < 2 * kAuxSourceOffset || grid.source_index < 2) {
      throw DomainError("run: grid too small");
    }
    if (source.dt != grid.dt) throw DomainError("run: source timestep differs from grid dt");
    if (grid.courant() > 0.99 * (1.0 + 1e-12)) {
      throw DomainError("run: Courant number exceeds the 0.99 stability bound");
    }
    const std::size_t n = grid.size();
    s_ = grid.courant();
    e_.assign(n, 0.0);
    h_.assign(n - 1, 0.0);
    ca_.resize(n);
    cb_.resize(n);
    for (std::size_t k = 0; k < n; ++k) {
      std::tie(ca_[k], cb_[k]) = coefficients(grid.eps_r[k], grid.sigma[k]);
    }
    const std::size_t si = grid.source_index;
    std::tie(aux_ca_, aux_cb_) = coefficients(grid.eps_r[si], grid.sigma[si]);
    aux_e_.assign(kAuxSourceOffset + kAuxTail, 0.0);
    aux_h_.assign(aux_e_.size() - 1, 0.0);
    mur_left_ = mur_coefficient(grid.eps_r.front(), grid.dt, grid.dz);
    mur_right_ = mur_coefficient(grid.eps_r.back(), grid.dt, grid.dz);
    mur_aux_ = mur_coefficient(grid.eps_r[si], grid.dt, grid.dz);
    front_admittance_ = std::sqrt(grid.eps_r[si]) / kFreeSpaceImpedance;
    aux_e_[0] = source.samples.empty() ? 0.0 : source.samples.front();

    run_.grid = grid;
    run_.dt = grid.dt;
    run_.source = source;
    run_.envelope.assign(n, 0.0);
    const double front_speed = kSpeedOfLight / std::sqrt(grid.eps_r[si]);
    run_.source_end_time =
        source.duration() + static_cast<double>(kAuxSourceOffset + 1) * grid.dz / front_speed;

    const double to_front = grid.stack_front - grid.position(si);
    const double to_rx = grid.position(grid.rx_index) - grid.position(si);
    const double left = grid.position(si);
    const double right = grid.position(n - 1) - grid.position(grid.rx_index);
    run_.tx_gate = {0.0, (2.0 * to_front + 2.0 * left) / kSpeedOfLight};
    run_.rx_gate = {0.0, (to_rx + 2.0 * right) / kSpeedOfLight};
  }

  double time() const { return static_cast<double>(step_) * g_.dt; }

  bool settled(double threshold) const {
    return time() > run_.source_end_time && run_.peak_energy > 0.0 &&
           run_.energy.back() <= threshold * run_.peak_energy;
  }

  void step() {
    const std::size_t n = e_.size();
    const std::size_t si = g_.source_index;
    const std::size_t js = kAuxSourceOffset;

    // Probes and energy at time step_·dt.
    run_.e_tx.push_back(e_[g_.tx_index]);
    run_.e_rx.push_back(e_[g_.rx_index]);
    run_.e_inc.push_back(aux_e_[js]);
    run_.injected_energy += aux_e_[js] * aux_e_[js] * front_admittance_ * g_.dt;

    double we = 0.0;
    for (std::size_t k = 0; k < n; ++k) we += g_.eps_r[k] * e_[k] * e_[k];
    double wh = 0.0;
    for (std::size_t k = 0; k + 1 < n; ++k) {
      const double old = h_[k];
      double updated = old - s_ * (e_[k + 1] - e_[k]);
      if (k + 1 == si) updated += s_ * aux_e_[js];
      h_[k] = updated;
      wh += old * updated;
    }
    const double energy = 0.5 * kVacuumPermittivity * g_.dz * (we + wh);
    run_.energy.push_back(energy);
    run_.peak_energy = std::max(run_.peak_energy, energy);
    if (!std::isfinite(energy) ||
        (run_.injected_energy > 0.0 && energy > 10.0 * run_.injected_energy)) {
      throw NumericalError("FDTD energy grew without bound (instability)");
    }

    for (std::size_t j = 0; j + 1 < aux_e_.size(); ++j) {
      aux_h_[j] -= s_ * (aux_e_[j + 1] - aux_e_[j]);
    }

    const double e0 = e_[0], e1 = e_[1], en1 = e_[n - 1], en2 = e_[n - 2];
    for (std::size_t k = 1; k + 1 < n; ++k) {
      e_[k] = ca_[k] * e_[k] - cb_[k] * (h_[k] - h_[k - 1]);
    }
    e_[si] += cb_[si] * aux_h_[js - 1];
    e_[0] = e1 + mur_left_ * (e_[1] - e0);
    e_[n - 1] = en2 + mur_right_ * (e_[n - 2] - en1);
    for (std::size_t k = 0; k < n; ++k) {
      run_.envelope[k] = std::max(run_.envelope[k], std::abs(e_[k]));
    }

    const std::size_t na = aux_e_.size();
    const double a1 = aux_e_[na - 1], a2 = aux_e_[na - 2];
    for (std::size_t j = 1; j + 1 < na; ++j) {
      aux_e_[j] = aux_ca_ * aux_e_[j] - aux_cb_ * (aux_h_[j] - aux_h_[j - 1]);
    }
    aux_e_[na - 1] = a2 + mur_aux_ * (aux_e_[na - 2] - a1);
    ++step_;
    aux_e_[0] = step_ < run_.source.samples.size() ? run_.source.samples[step_] : 0.0;
  }

  SimulationRun finish() && {
    run_.steps = step_;
    run_.duration = time();
    return std::move(run_);
  }

 private:
  std::pair<double, double> coefficients(double eps_r, double sigma) const {
    const double loss = sigma * g_.dt / (2.0 * kVacuumPermittivity * eps_r);
    return {(1.0 - loss) / (1.0 + loss), (s_ / eps_r) / (1.0 + loss)};
  }

  const Grid1D& g_;
  double s_ = 0.0;
  std::vector<double> e_, h_, ca_, cb_;
  std::vector<double> aux_e_, aux_h_;
  double aux_ca_ = 1.0, aux_cb_ = 0.0;
  double mur_left_ = 0.0, mur_right_ = 0.0, mur_aux_ = 0.0;
  double front_admittance_ = 0.0;
  std::size_t step_ = 0;
  SimulationRun run_;
};

}  // namespace

double SimulationRun::late_time_energy_ratio() const {
  if (energy.empty() || peak_energy <= 0.0) return 0.0;
  return energy.back() / peak_energy;
}

EnvelopeProfile SimulationRun::envelope_profile() const {
  EnvelopeProfile p;
  p.frequency = source.center_frequency;
  for (std::size_t k = 0; k < grid.size(); ++k) {
    const double x = grid.position(k);
    if (x < grid.stack_front || x > grid.stack_back) continue;
    p.z.push_back(x - grid.stack_front);
    p.e_max.push_back(envelope[k]);
  }
  return p;
}

double minimum_duration(const Grid1D& grid) { return 3.0 * grid.two_way_transit_time(); }

SimulationRun run(const Grid1D& grid, const SourceWaveform& source, double duration) {
  if (!(duration >= minimum_duration(grid) * (1.0 - 1e-12))) {
    throw DomainError("run: duration shorter than three two-way transits of the grid");
  }
  Simulator sim(grid, source);
  const auto steps = static_cast<std::size_t>(std::llround(duration / grid.dt));
  for (std::size_t i = 0; i < steps; ++i) sim.step();
  return std::move(sim).finish();
}

std::vector<SimulationRun> run_until_settled(std::span<const Grid1D> grids,
                                             const SourceWaveform& source, double threshold,
                                             double max_duration) {
  if (grids.empty()) return {};
  double floor = 0.0;
  for (const auto& g : grids) {
    if (g.dt != grids.front().dt) throw DomainError("run_until_settled: grids differ in dt");
    floor = std::max(floor, minimum_duration(g));
  }
  std::vector<std::unique_ptr<Simulator>> sims;
  for (const auto& g : grids) sims.push_back(std::make_unique<Simulator>(g, source));

  const auto max_steps = static_cast<std::size_t>(std::ceil(max_duration / grids.front().dt));
  for (std::size_t i = 0;; ++i) {
    for (auto& s : sims) s->step();
    const bool done = sims.front()->time() >= floor &&
                      std::all_of(sims.begin(), sims.end(),
                                  [&](const auto& s) { return s->settled(threshold); });
    if (done) break;
    if (i >= max_steps) {
      throw NumericalError("run_until_settled: field energy did not settle within max_duration");
    }
  }
  std::vector<SimulationRun> runs;
  for (auto& s : sims) runs.push_back(std::move(*s).finish());
  return runs;
}

}  // namespace headsim::fdtd

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "headsim/fdtd.hpp"
#include "headsim/spectral.hpp"

namespace headsim::fdtd {

double propagation_delay(std::span<const double> tx, std::span<const double> rx, double dt) {
  if (!(dt > 0.0)) throw DomainError("propagation_delay: dt must be positive");
  const double etx = std::inner_product(tx.begin(), tx.end(), tx.begin(), 0.0);
  const double erx = std::inner_product(rx.begin(), rx.end(), rx.begin(), 0.0);
  if (!(etx > 0.0) || !(erx > 0.0)) throw DomainError("propagation_delay: zero-energy input");

  // c[l] = Σ tx[m]·rx[m+l]; lag l >= 0 at index l, l < 0 at index n + l.
  const std::size_t n = spectral::next_pow2(tx.size() + rx.size());
  auto a = spectral::rfft(tx, n);
  const auto b = spectral::rfft(rx, n);
  for (std::size_t k = 0; k < a.size(); ++k) a[k] = std::conj(a[k]) * b[k];
  auto corr = spectral::irfft(a, n);
  const double norm = std::sqrt(etx * erx);
  for (auto& v : corr) v /= norm;

  const auto max_lag = static_cast<std::ptrdiff_t>(rx.size()) - 1;
  const auto min_lag = -(static_cast<std::ptrdiff_t>(tx.size()) - 1);
  const auto nn = static_cast<std::ptrdiff_t>(n);
  auto at = [&](std::ptrdiff_t lag) { return corr[static_cast<std::size_t>((lag % nn + nn) % nn)]; };

  std::ptrdiff_t best = 0;
  double best_value = -std::numeric_limits<double>::infinity();
  for (std::ptrdiff_t lag = min_lag; lag <= max_lag; ++lag) {
    const double v = at(lag);
    if (v > best_value) {
      best_value = v;
      best = lag;
    }
  }
  const double left = at(best - 1);
  const double right = at(best + 1);
  const double curvature = left - 2.0 * best_value + right;
  const double offset = curvature < 0.0 ? 0.5 * (left - right) / curvature : 0.0;
  return (static_cast<double>(best) + offset) * dt;
}

}  // namespace headsim::fdtd

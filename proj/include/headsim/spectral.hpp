#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "headsim/common.hpp"

namespace headsim::spectral {

/// Smallest power of two >= n.
std::size_t next_pow2(std::size_t n);

/// Real-to-complex DFT of x zero-padded to n points: n/2 + 1 bins,
/// X[k] = Σ x[m]·e^{-2πjkm/n}.
std::vector<Complex> rfft(std::span<const double> x, std::size_t n);

/// Inverse of rfft for an n-point transform, normalized so irfft(rfft(x)) = x.
std::vector<double> irfft(std::span<const Complex> spectrum, std::size_t n);

}  // namespace headsim::spectral

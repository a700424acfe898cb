#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "halfline/conventions.hpp"

namespace halfline::fft {

/// Smallest n' >= n whose prime factors are all in {2, 3, 5, 7}.
std::size_t good_size(std::size_t n);

/// Unnormalized in-place DFT: X_j = sum_n x_n e^{-2 pi i j n / N}.
void forward(std::span<cplx> data);

/// Unnormalized in-place inverse DFT: x_n = sum_j X_j e^{+2 pi i j n / N}.
void backward(std::span<cplx> data);

/// Signed FFT frequency index of bin j for length n (j for j < n/2, j - n otherwise).
inline long signed_index(std::size_t j, std::size_t n) {
  return j < (n + 1) / 2 ? static_cast<long>(j) : static_cast<long>(j) - static_cast<long>(n);
}

}  // namespace halfline::fft

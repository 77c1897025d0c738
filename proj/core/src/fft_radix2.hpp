#pragma once

// In-place iterative radix-2 FFT for the fixed 256-angle rotation grid.
// Internal to the library; not installed.

#include <array>
#include <complex>

#include "heraldopt/constants.hpp"

namespace heraldopt::detail {

// Computes out[j] = sum_n in[n] * e^{+2*pi*i*n*j/Size} (inverse-sign DFT,
// no 1/N factor). Size must be a power of two.
template <std::size_t Size>
void fft_positive_exponent(std::array<Complex, Size>& a) {
  static_assert((Size & (Size - 1)) == 0, "Size must be a power of two");
  // bit-reversal permutation
  for (std::size_t i = 1, j = 0; i < Size; ++i) {
    std::size_t bit = Size >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(a[i], a[j]);
  }
  for (std::size_t len = 2; len <= Size; len <<= 1) {
    const double ang = 2.0 * kPi / double(len);
    const Complex wl(std::cos(ang), std::sin(ang));
    for (std::size_t i = 0; i < Size; i += len) {
      Complex w(1.0, 0.0);
      for (std::size_t k = 0; k < len / 2; ++k) {
        const Complex u = a[i + k];
        const Complex v = a[i + k + len / 2] * w;
        a[i + k] = u + v;
        a[i + k + len / 2] = u - v;
        w *= wl;
      }
    }
  }
}

}  // namespace heraldopt::detail

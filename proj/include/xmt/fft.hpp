#pragma once

#include <complex>
#include <cstddef>
#include <vector>

namespace xmt::fftutil {

using cplx = std::complex<double>;

inline bool is_pow2(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

// In-place iterative radix-2 FFT. sign = -1 forward, +1 inverse (inverse is
// unscaled; divide by n yourself when needed).
void fft_pow2(std::vector<cplx>& a, int sign);

// O(n^2) reference transform, any length. Same convention as fft_pow2.
std::vector<cplx> dft_naive(const std::vector<cplx>& a, int sign);

// Dispatch: radix-2 when possible, naive otherwise.
void transform(std::vector<cplx>& a, int sign);

}  // namespace xmt::fftutil

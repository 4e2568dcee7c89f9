#include "xmt/fft.hpp"

#include <cmath>

namespace xmt::fftutil {

void fft_pow2(std::vector<cplx>& a, int sign) {
  const std::size_t n = a.size();
  if (n < 2) return;
  // bit reversal
  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(a[i], a[j]);
  }
  const double pi = 3.14159265358979323846264338327950288;
  for (std::size_t len = 2; len <= n; len <<= 1) {
    const double ang = sign * 2.0 * pi / static_cast<double>(len);
    const cplx wl(std::cos(ang), std::sin(ang));
    for (std::size_t i = 0; i < n; i += len) {
      cplx w(1.0, 0.0);
      for (std::size_t k = 0; k < len / 2; ++k) {
        const cplx u = a[i + k];
        const cplx v = a[i + k + len / 2] * w;
        a[i + k] = u + v;
        a[i + k + len / 2] = u - v;
        w *= wl;
      }
    }
  }
}

std::vector<cplx> dft_naive(const std::vector<cplx>& a, int sign) {
  const std::size_t n = a.size();
  std::vector<cplx> out(n, cplx(0.0, 0.0));
  const double pi = 3.14159265358979323846264338327950288;
  for (std::size_t k = 0; k < n; ++k) {
    cplx s(0.0, 0.0);
    for (std::size_t j = 0; j < n; ++j) {
      const double ang = sign * 2.0 * pi * static_cast<double>(k * j % n) / static_cast<double>(n);
      s += a[j] * cplx(std::cos(ang), std::sin(ang));
    }
    out[k] = s;
  }
  return out;
}

void transform(std::vector<cplx>& a, int sign) {
  if (is_pow2(a.size())) {
    fft_pow2(a, sign);
  } else {
    a = dft_naive(a, sign);
  }
}

}  // namespace xmt::fftutil

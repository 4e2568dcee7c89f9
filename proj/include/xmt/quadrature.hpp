#pragma once

#include <cmath>
#include <cstddef>
#include <utility>
#include <vector>

namespace xmt::quadrature {

// Gauss-Legendre nodes and weights on [-1, 1], by Newton iteration.
inline std::pair<std::vector<double>, std::vector<double>> gauss_legendre(int n) {
  std::vector<double> x(static_cast<std::size_t>(n)), w(static_cast<std::size_t>(n));
  const double pi = 3.14159265358979323846264338327950288;
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double z = std::cos(pi * (static_cast<double>(i) + 0.75) / (static_cast<double>(n) + 0.5));
    double pp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = 0.0;
      for (int j = 0; j < n; ++j) {
        const double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * j + 1.0) * z * p1 - static_cast<double>(j) * p2) / (static_cast<double>(j) + 1.0);
      }
      pp = static_cast<double>(n) * (z * p0 - p1) / (z * z - 1.0);
      const double z1 = z;
      z = z1 - p0 / pp;
      if (std::abs(z - z1) < 1e-15) break;
    }
    x[static_cast<std::size_t>(i)] = -z;
    x[static_cast<std::size_t>(n - 1 - i)] = z;
    w[static_cast<std::size_t>(i)] = 2.0 / ((1.0 - z * z) * pp * pp);
    w[static_cast<std::size_t>(n - 1 - i)] = w[static_cast<std::size_t>(i)];
  }
  return {x, w};
}

// Composite Gauss-Legendre integral of f over [a, b].
template <class F>
double integrate(F&& f, double a, double b, int panels = 64, int order = 8) {
  if (!(b > a)) return 0.0;
  static thread_local int cached_order = -1;
  static thread_local std::vector<double> gx, gw;
  if (cached_order != order) {
    auto [x, w] = gauss_legendre(order);
    gx = x;
    gw = w;
    cached_order = order;
  }
  const double h = (b - a) / static_cast<double>(panels);
  double s = 0.0;
  for (int p = 0; p < panels; ++p) {
    const double lo = a + h * static_cast<double>(p);
    const double mid = lo + 0.5 * h;
    double ps = 0.0;
    for (int i = 0; i < order; ++i) ps += gw[static_cast<std::size_t>(i)] * f(mid + 0.5 * h * gx[static_cast<std::size_t>(i)]);
    s += ps * 0.5 * h;
  }
  return s;
}

}  // namespace xmt::quadrature

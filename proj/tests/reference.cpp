#include "reference.hpp"

#include <cmath>

namespace xmt::testref {

namespace {

void combos_rec(int N, int k, int start, std::uint64_t acc,
                std::vector<std::uint64_t>& out) {
  if (k == 0) {
    out.push_back(acc);
    return;
  }
  for (int i = start; i <= N - k; ++i) {
    combos_rec(N, k - 1, i + 1, acc | (1ull << i), out);
  }
}

}  // namespace

std::vector<std::uint64_t> combinations_recursive(int N, int k) {
  std::vector<std::uint64_t> out;
  combos_rec(N, k, 0, 0ull, out);
  return out;
}

int max_line_count_bruteforce(const std::vector<Vec>& centers, double radius) {
  int best = centers.empty() ? 0 : 1;
  for (std::size_t i = 0; i < centers.size(); ++i) {
    for (std::size_t j = i + 1; j < centers.size(); ++j) {
      const double dx = centers[i][0] - centers[j][0];
      const double dy = centers[i][1] - centers[j][1];
      const double len = std::sqrt(dx * dx + dy * dy);
      if (len == 0.0) continue;
      const double nx = -dy / len, ny = dx / len;
      const double offset = nx * centers[i][0] + ny * centers[i][1];
      int count = 0;
      for (const auto& p : centers) {
        if (std::abs(nx * p[0] + ny * p[1] - offset) <= radius) ++count;
      }
      if (count > best) best = count;
    }
  }
  return best;
}

double multiset_energy_bruteforce(const std::vector<Vec>& generators,
                                  const std::vector<std::uint64_t>& bits, double merge_tol) {
  const int N = static_cast<int>(generators.size());
  std::vector<Vec> pts;
  for (int i = 0; i < N; ++i) {
    for (const auto b : bits) {
      Vec p(generators.front().size(), 0.0);
      for (int j = 0; j < N; ++j) {
        const double coeff = static_cast<double>((b >> j & 1ull) + (j == i ? 1ull : 0ull));
        if (coeff != 0.0) axpy(p, coeff, generators[static_cast<std::size_t>(j)]);
      }
      pts.push_back(p);
    }
  }
  std::vector<bool> used(pts.size(), false);
  double sum = 0.0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    if (used[i]) continue;
    double m = 0.0;
    for (std::size_t j = i; j < pts.size(); ++j) {
      if (!used[j] && dist(pts[i], pts[j]) <= merge_tol) {
        used[j] = true;
        m += 1.0;
      }
    }
    sum += m * m;
  }
  return sum;
}

double line_integral_reference(const construction::ExpSumWeight& w,
                               const transforms::Line& line, double step) {
  const double CR = w.support_radius();
  const double z2 = norm2(line.z);
  if (z2 >= CR * CR) return 0.0;
  const double T = std::sqrt(CR * CR - z2);
  const std::size_t n = static_cast<std::size_t>(std::ceil(2.0 * T / step));
  const double h = 2.0 * T / static_cast<double>(n);
  double s = 0.0;
  for (std::size_t i = 0; i <= n; ++i) {
    const double t = -T + h * static_cast<double>(i);
    Vec x(line.nu.size());
    for (std::size_t c = 0; c < x.size(); ++c) x[c] = line.z[c] + t * line.nu[c];
    const double v = w.eval(x);
    s += (i == 0 || i == n) ? 0.5 * v : v;
  }
  return s * h;
}

}  // namespace xmt::testref

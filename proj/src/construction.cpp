#include "xmt/construction.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "xmt/quadrature.hpp"

namespace xmt::construction {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

// C(n,k) capped; returns cap+1 when the count exceeds cap.
std::size_t binomial_capped(int n, int k, std::size_t cap) {
  if (k < 0 || k > n) return 0;
  k = std::min(k, n - k);
  unsigned long long r = 1;
  for (int i = 1; i <= k; ++i) {
    r = r * static_cast<unsigned long long>(n - k + i) / static_cast<unsigned long long>(i);
    if (r > cap) return cap + 1;
  }
  return static_cast<std::size_t>(r);
}

}  // namespace

std::vector<Vec> SubsetSumLattice::points() const {
  std::vector<Vec> out;
  out.reserve(size());
  for (std::size_t i = 0; i < size(); ++i) out.push_back(point(i));
  return out;
}

double SubsetSumLattice::max_pair_distance() const {
  const std::size_t n = size();
  if (n <= 2048) {
    double best = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        double s = 0.0;
        for (int c = 0; c < d; ++c) {
          const double t = pts[i * static_cast<std::size_t>(d) + static_cast<std::size_t>(c)] -
                           pts[j * static_cast<std::size_t>(d) + static_cast<std::size_t>(c)];
          s += t * t;
        }
        best = std::max(best, s);
      }
    }
    return std::sqrt(best);
  }
  double mx = 0.0;
  for (std::size_t i = 0; i < n; ++i) mx = std::max(mx, norm(point(i)));
  return 2.0 * mx;
}

SubsetSumLattice build_lattice(const std::vector<Vec>& generators, int k,
                               std::size_t size_cap) {
  const int N = static_cast<int>(generators.size());
  if (N < 1 || N > 64) throw std::invalid_argument("build_lattice: need 1 <= N <= 64");
  if (k < 0 || k > N) throw std::invalid_argument("build_lattice: need 0 <= k <= N");
  const std::size_t count = binomial_capped(N, k, size_cap);
  if (count > size_cap) throw std::invalid_argument("build_lattice: C(N,k) exceeds the size cap");

  SubsetSumLattice lat;
  lat.N = N;
  lat.k = k;
  lat.d = static_cast<int>(generators.front().size());
  lat.generators = generators;
  lat.bits.reserve(count);
  lat.pts.reserve(count * static_cast<std::size_t>(lat.d));

  // Gosper's hack walks the weight-k bit vectors in increasing order.
  std::uint64_t v = k == 0 ? 0 : (~0ull >> (64 - k));
  const std::uint64_t limit = N == 64 ? ~0ull : (1ull << N);
  for (std::size_t emitted = 0; emitted < count; ++emitted) {
    lat.bits.push_back(v);
    Vec p(static_cast<std::size_t>(lat.d), 0.0);
    // accumulate in ascending generator order so equal index sets give
    // bit-identical points
    for (int j = 0; j < N; ++j) {
      if (v >> j & 1ull) axpy(p, 1.0, generators[static_cast<std::size_t>(j)]);
    }
    lat.pts.insert(lat.pts.end(), p.begin(), p.end());
    if (k == 0) break;
    const std::uint64_t u = v & (~v + 1);
    const std::uint64_t t = v + u;
    if (t >= limit && emitted + 1 < count) {
      throw std::logic_error("build_lattice: enumeration exhausted early");
    }
    v = t | (((v ^ t) / u) >> 2);
  }
  return lat;
}

SubsetSumLattice build_lattice(const PointFamily& family, int k, std::size_t size_cap) {
  return build_lattice(family.generators(), k, size_cap);
}

std::pair<std::size_t, double> shifted_membership(const SubsetSumLattice& lattice, int i) {
  if (i < 0 || i >= lattice.N) throw std::out_of_range("shifted_membership: index out of range");
  std::size_t count = 0;
  for (const auto b : lattice.bits) {
    if (!(b >> i & 1ull)) ++count;
  }
  return {count, static_cast<double>(count) / static_cast<double>(lattice.size())};
}

double ExpSumWeight::eval(const Vec& x) const {
  const double env = mollifier.fourier(norm(x) / R);
  if (env == 0.0) return 0.0;
  double re = 0.0, im = 0.0;
  const std::size_t n = lattice.size();
  const int d = lattice.d;
  for (std::size_t i = 0; i < n; ++i) {
    double ph = 0.0;
    for (int c = 0; c < d; ++c) {
      ph += x[static_cast<std::size_t>(c)] *
            lattice.pts[i * static_cast<std::size_t>(d) + static_cast<std::size_t>(c)];
    }
    ph *= -kTwoPi;
    re += std::cos(ph);
    im += std::sin(ph);
  }
  return env * env * (re * re + im * im);
}

double CapSystem::f_l2_sq() const {
  double s = 0.0;
  for (const auto& c : caps) s += 1.0 / c.mass;
  return s;
}

namespace {

using geometry::Surface;
using geometry::graph_point;

Vec family_offsets(const PointFamily& family, std::size_t i) {
  // invert the ambient layout (omega_1, Phi, omega_2, ...)
  const Vec& xi = family.xis[i];
  Vec omega(static_cast<std::size_t>(family.params.d - 1));
  omega[0] = xi[0];
  for (std::size_t j = 1; j + 1 < xi.size(); ++j) omega[j] = xi[j + 1];
  return omega;
}

double patch_dist(const Surface& surface, const Vec& omega, const Vec& center) {
  return dist(graph_point(surface, omega), center);
}

// Largest t in [0, t_hi] with |sigma(omega0 + t u) - center| <= r.
double radial_extent(const Surface& surface, const Vec& omega0, const Vec& u,
                     const Vec& center, double r, double t_hi) {
  double lo = 0.0, hi = t_hi;
  Vec omega = omega0;
  const auto rho = [&](double t) {
    for (std::size_t j = 0; j < omega.size(); ++j) omega[j] = omega0[j] + t * u[j];
    return patch_dist(surface, omega, center);
  };
  if (rho(hi) <= r) return hi;
  for (int it = 0; it < 90; ++it) {
    const double mid = 0.5 * (lo + hi);
    (rho(mid) <= r ? lo : hi) = mid;
  }
  return lo;
}

double surface_weight(const Surface& surface, const Vec& omega) {
  return std::sqrt(1.0 + norm2(surface.gradient(omega)));
}

}  // namespace

CapSystem build_caps(const PointFamily& family, int quad_order) {
  if (quad_order < 1) throw std::invalid_argument("build_caps: quad_order must be >= 1");
  const Surface& surface = family.surface;
  const int d = family.params.d;
  const double r = 1.0 / family.R;

  CapSystem sys;
  sys.radius = r;
  sys.caps.reserve(family.xis.size());

  auto [gx, gw] = quadrature::gauss_legendre(std::max(quad_order, 2));
  const int order = static_cast<int>(gx.size());

  for (std::size_t i = 0; i < family.xis.size(); ++i) {
    const Vec omega0 = family_offsets(family, i);
    if (norm(omega0) + r > surface.domain_radius) {
      throw std::domain_error("build_caps: cap exits the surface chart");
    }
    Cap cap;
    cap.center = family.xis[i];

    if (d == 2) {
      const double t_minus = radial_extent(surface, omega0, Vec{-1.0}, cap.center, r, 1.5 * r);
      const double t_plus = radial_extent(surface, omega0, Vec{1.0}, cap.center, r, 1.5 * r);
      const double a = omega0[0] - t_minus, b = omega0[0] + t_plus;
      for (int j = 0; j < order; ++j) {
        const double w_ab = 0.5 * (b - a);
        const double om = 0.5 * (a + b) + w_ab * gx[static_cast<std::size_t>(j)];
        const Vec omega{om};
        cap.nodes_rel.push_back(sub(graph_point(surface, omega), cap.center));
        cap.weights.push_back(gw[static_cast<std::size_t>(j)] * w_ab * surface_weight(surface, omega));
      }
    } else if (d == 3) {
      const int n_ang = std::max(8, 2 * order);
      const double dtheta = kTwoPi / static_cast<double>(n_ang);
      for (int aidx = 0; aidx < n_ang; ++aidx) {
        const double theta = dtheta * (static_cast<double>(aidx) + 0.5);
        const Vec u{std::cos(theta), std::sin(theta)};
        const double tmax = radial_extent(surface, omega0, u, cap.center, r, 1.5 * r);
        for (int j = 0; j < order; ++j) {
          const double w_t = 0.5 * tmax;
          const double t = 0.5 * tmax + w_t * gx[static_cast<std::size_t>(j)];
          const Vec omega{omega0[0] + t * u[0], omega0[1] + t * u[1]};
          cap.nodes_rel.push_back(sub(graph_point(surface, omega), cap.center));
          cap.weights.push_back(gw[static_cast<std::size_t>(j)] * w_t * t * dtheta *
                                surface_weight(surface, omega));
        }
      }
    } else {
      // tensor rule with an indicator; adequate for the small caps used here
      const int m = d - 1;
      std::vector<int> idx(static_cast<std::size_t>(m), 0);
      while (true) {
        Vec omega = omega0;
        double w = 1.0;
        for (int c = 0; c < m; ++c) {
          const double x = gx[static_cast<std::size_t>(idx[static_cast<std::size_t>(c)])];
          omega[static_cast<std::size_t>(c)] += 1.2 * r * x;
          w *= gw[static_cast<std::size_t>(idx[static_cast<std::size_t>(c)])] * 1.2 * r;
        }
        if (patch_dist(surface, omega, cap.center) <= r) {
          cap.nodes_rel.push_back(sub(graph_point(surface, omega), cap.center));
          cap.weights.push_back(w * surface_weight(surface, omega));
        }
        int c = 0;
        for (; c < m; ++c) {
          if (++idx[static_cast<std::size_t>(c)] < order) break;
          idx[static_cast<std::size_t>(c)] = 0;
        }
        if (c == m) break;
      }
      if (cap.weights.empty()) throw std::runtime_error("build_caps: empty cap rule");
    }

    cap.mass = 0.0;
    for (const double w : cap.weights) cap.mass += w;
    for (double& w : cap.weights) w /= cap.mass;
    sys.caps.push_back(std::move(cap));
  }

  for (std::size_t i = 0; i < sys.caps.size(); ++i) {
    for (std::size_t j = i + 1; j < sys.caps.size(); ++j) {
      if (dist(sys.caps[i].center, sys.caps[j].center) <= 2.0 * r) {
        throw std::runtime_error("build_caps: caps overlap (separation below 2/R)");
      }
    }
  }
  return sys;
}

}  // namespace xmt::construction

#include "xmt/transforms.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <limits>
#include <map>
#include <stdexcept>

#include "xmt/fft.hpp"
#include "xmt/parallel.hpp"
#include "xmt/quadrature.hpp"
#include "xmt/rng.hpp"

namespace xmt::transforms {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

void check_line(const Line& line) {
  if (std::abs(dot(line.nu, line.z)) > 1e-12 * (1.0 + norm(line.z))) {
    throw std::invalid_argument("line offset is not orthogonal to the direction");
  }
}

struct SortedProjections {
  std::vector<double> p;        // sorted projections
  std::vector<std::size_t> id;  // lattice index per sorted slot
};

SortedProjections sorted_projections(const SubsetSumLattice& lattice, const Vec& nu) {
  SortedProjections sp;
  const std::size_t n = lattice.size();
  std::vector<std::pair<double, std::size_t>> tmp(n);
  for (std::size_t i = 0; i < n; ++i) tmp[i] = {lattice.proj(i, nu), i};
  std::sort(tmp.begin(), tmp.end());
  sp.p.resize(n);
  sp.id.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    sp.p[i] = tmp[i].first;
    sp.id[i] = tmp[i].second;
  }
  return sp;
}

// Envelope bump along a line at offset |z| from the origin:
//   bump(tau) = eta_hat(sqrt(tau^2+|z|^2)/R)^(1 or 2).
struct LineBump {
  const construction::Mollifier* moll;
  double R;
  double z2;
  bool squared;
  double operator()(double tau) const {
    const double v = moll->fourier(std::sqrt(tau * tau + z2) / R);
    return squared ? v * v : v;
  }
};

// G(f) = int_{-T}^{T} bump(tau) cos(2 pi tau f) dtau by adaptive composite
// Gauss-Legendre (bump is even).
double pair_profile(const LineBump& bump, double T, double f) {
  const double cycles = std::abs(f) * T;
  const int panels = std::max(32, static_cast<int>(std::ceil(4.0 * cycles)) + 8);
  return 2.0 * quadrature::integrate(
                   [&](double tau) { return bump(tau) * std::cos(kTwoPi * tau * f); },
                   0.0, T, std::min(panels, 8192), 8);
}

// G on a uniform frequency grid via one padded FFT of the bump samples.
construction::UniformTable pair_profile_table(const LineBump& bump, double T, double f_max) {
  const std::size_t M = 2048, Mp = 32768;
  const double dtau = 2.0 * T / static_cast<double>(M);
  std::vector<fftutil::cplx> a(Mp, fftutil::cplx(0.0, 0.0));
  for (std::size_t j = 0; j < M; ++j) {
    a[j] = bump(-T + dtau * static_cast<double>(j));
  }
  fftutil::fft_pow2(a, -1);
  construction::UniformTable t;
  t.x0 = 0.0;
  t.dx = 1.0 / (static_cast<double>(Mp) * dtau);
  const std::size_t n = std::min(Mp / 2, static_cast<std::size_t>(f_max / t.dx) + 2);
  t.y.resize(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double f = t.dx * static_cast<double>(k);
    const fftutil::cplx phase(std::cos(kTwoPi * T * f), std::sin(kTwoPi * T * f));
    t.y[k] = dtau * (phase * a[k]).real();
  }
  return t;
}

struct PairContext {
  SortedProjections sp;
  std::vector<double> phase;  // <z, q_i> per sorted slot
  double T = 0.0;             // half-length of the active segment
  LineBump bump;
};

// Shared setup for both pair-decomposition evaluators. Returns false when
// the line misses the weight's support.
bool pair_context(const ExpSumWeight& w, const Line& line, PairContext& ctx) {
  check_line(line);
  const double CR = w.support_radius();
  const double z2 = norm2(line.z);
  if (z2 >= CR * CR) return false;
  ctx.T = std::sqrt(CR * CR - z2);
  ctx.sp = sorted_projections(w.lattice, line.nu);
  const std::size_t n = w.lattice.size();
  ctx.phase.resize(n);
  for (std::size_t s = 0; s < n; ++s) {
    ctx.phase[s] = dot(line.z, w.lattice.point(ctx.sp.id[s]));
  }
  ctx.bump = LineBump{&w.mollifier, w.R, z2, true};
  return true;
}

constexpr std::size_t kPairCap = 5000000;

}  // namespace

Line make_line(const Vec& nu, const Vec& through) {
  Line l;
  l.nu = normalized(nu);
  l.z = sub(through, scaled(l.nu, dot(l.nu, through)));
  return l;
}

double max_pair_frequency(const ExpSumWeight& w) { return w.lattice.max_pair_distance(); }

double default_line_step(const ExpSumWeight& w) {
  const double f = max_pair_frequency(w);
  double step = w.R / 256.0;  // resolve the envelope taper
  if (f > 0.0) step = std::min(step, 1.0 / (32.0 * f));
  return step;
}

double line_integral(const ExpSumWeight& w, const Line& line, double step) {
  check_line(line);
  if (!(step > 0.0)) throw std::invalid_argument("line_integral: step must be positive");
  const double f = max_pair_frequency(w);
  if (f > 0.0 && step > 1.0 / (16.0 * f)) {
    throw std::invalid_argument("line_integral: step too coarse for the lattice frequencies");
  }
  if (step > w.R / 8.0) {
    throw std::invalid_argument("line_integral: step too coarse for the envelope");
  }
  const double CR = w.support_radius();
  const double z2 = norm2(line.z);
  if (z2 >= CR * CR) return 0.0;
  const double T = std::sqrt(CR * CR - z2);
  const std::size_t n = static_cast<std::size_t>(std::ceil(2.0 * T / step));
  const double h = 2.0 * T / static_cast<double>(n);
  const std::size_t d = line.nu.size();
  const double value = par::block_sum(n + 1, [&](std::size_t i) {
    const double t = -T + h * static_cast<double>(i);
    Vec x(d);
    for (std::size_t c = 0; c < d; ++c) x[c] = line.z[c] + t * line.nu[c];
    const double v = w.eval(x);
    return (i == 0 || i == n) ? 0.5 * v : v;
  });
  return value * h;
}

double line_integral_pairs(const ExpSumWeight& w, const Line& line, double f_cut,
                           double* tail_bound) {
  PairContext ctx;
  if (!pair_context(w, line, ctx)) {
    if (tail_bound) *tail_bound = 0.0;
    return 0.0;
  }
  const std::size_t n = w.lattice.size();
  const double window = f_cut / w.R;

  // near pairs by projection gap
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n && ctx.sp.p[j] - ctx.sp.p[i] <= window; ++j) {
      pairs.emplace_back(i, j);
      if (pairs.size() > kPairCap) {
        throw std::runtime_error("line_integral_pairs: near-pair budget exceeded");
      }
    }
  }

  const double g0 = pair_profile(ctx.bump, ctx.T, 0.0);
  const double off_diag = par::block_sum(pairs.size(), [&](std::size_t k) {
    const auto [i, j] = pairs[k];
    const double g = pair_profile(ctx.bump, ctx.T, ctx.sp.p[j] - ctx.sp.p[i]);
    return 2.0 * std::cos(kTwoPi * (ctx.phase[i] - ctx.phase[j])) * g;
  }, 256);
  const double value = static_cast<double>(n) * g0 + off_diag;

  if (tail_bound) {
    // dropped pairs: empirical envelope of |G| just beyond the cutoff
    double env = 0.0;
    for (int s = 0; s <= 12; ++s) {
      const double f = window * (1.0 + static_cast<double>(s) / 12.0);
      env = std::max(env, std::abs(pair_profile(ctx.bump, ctx.T, f)));
    }
    const std::size_t far =
        n * (n - 1) / 2 - pairs.size();
    *tail_bound = 8.0 * env * static_cast<double>(far);
  }
  return value;
}

namespace {

// Table-interpolated variant used inside the sup search.
double line_integral_fast(const ExpSumWeight& w, const Line& line, double f_cut) {
  PairContext ctx;
  if (!pair_context(w, line, ctx)) return 0.0;
  const std::size_t n = w.lattice.size();
  const double window = f_cut / w.R;
  const auto table = pair_profile_table(ctx.bump, ctx.T, 1.25 * window);
  double value = static_cast<double>(n) * table.y.front();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n && ctx.sp.p[j] - ctx.sp.p[i] <= window; ++j) {
      const double g = table.at(ctx.sp.p[j] - ctx.sp.p[i]);
      value += 2.0 * std::cos(kTwoPi * (ctx.phase[i] - ctx.phase[j])) * g;
    }
  }
  return value;
}

}  // namespace

SupLineResult sup_line_lower_bound(const ExpSumWeight& w, std::int64_t budget,
                                   std::uint64_t seed) {
  if (budget < 1) throw std::invalid_argument("sup_line_lower_bound: budget must be >= 1");
  const auto& lat = w.lattice;
  const std::size_t n = lat.size();
  const std::size_t d = static_cast<std::size_t>(lat.d);
  const double f_cut = 48.0;

  std::vector<Line> candidates;
  const auto add_candidate = [&](const Vec& nu, const Vec& through) {
    if (static_cast<std::int64_t>(candidates.size()) >= budget) return;
    candidates.push_back(make_line(nu, through));
  };

  // lines joining lattice points
  Rng rng(seed);
  if (n >= 2) {
    if (n <= 64) {
      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
          const Vec diff = sub(lat.point(i), lat.point(j));
          if (norm(diff) == 0.0) continue;
          add_candidate(diff, lat.point(i));
        }
      }
    } else {
      for (std::int64_t t = 0; t < budget / 2; ++t) {
        const std::size_t i = static_cast<std::size_t>(rng.uniform() * static_cast<double>(n));
        std::size_t j = static_cast<std::size_t>(rng.uniform() * static_cast<double>(n));
        if (i == j) j = (j + 1) % n;
        const Vec diff = sub(lat.point(i), lat.point(j));
        if (norm(diff) == 0.0) continue;
        add_candidate(diff, lat.point(i));
      }
    }
  }

  // coordinate directions and pair directions through dense projection
  // clusters in the perpendicular hyperplane
  std::vector<Vec> dirs;
  for (std::size_t axis = 0; axis < d; ++axis) {
    Vec e(d, 0.0);
    e[axis] = 1.0;
    dirs.push_back(e);
  }
  for (int t = 0; t < 48 && n >= 2; ++t) {
    const std::size_t i = static_cast<std::size_t>(rng.uniform() * static_cast<double>(n));
    std::size_t j = static_cast<std::size_t>(rng.uniform() * static_cast<double>(n));
    if (i == j) continue;
    const Vec diff = sub(lat.point(i), lat.point(j));
    if (norm(diff) > 0.0) dirs.push_back(normalized(diff));
  }
  for (const auto& nu : dirs) {
    // cluster the perpendicular projections at resolution 2/R
    const auto basis = perp_basis(nu);
    std::map<std::vector<long long>, std::pair<int, std::size_t>> cells;
    for (std::size_t i = 0; i < n; ++i) {
      const Vec q = lat.point(i);
      std::vector<long long> key;
      key.reserve(basis.size());
      for (const auto& e : basis) {
        key.push_back(static_cast<long long>(std::floor(dot(e, q) * w.R / 2.0)));
      }
      auto& slot = cells[key];
      slot.first += 1;
      if (slot.first == 1) slot.second = i;
    }
    std::vector<std::pair<int, std::size_t>> ranked;
    ranked.reserve(cells.size());
    for (const auto& [key, slot] : cells) ranked.push_back(slot);
    std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
      return a.first != b.first ? a.first > b.first : a.second < b.second;
    });
    for (std::size_t r = 0; r < std::min<std::size_t>(3, ranked.size()); ++r) {
      add_candidate(nu, lat.point(ranked[r].second));
    }
  }

  // random lines through lattice points
  while (static_cast<std::int64_t>(candidates.size()) < budget) {
    const Vec nu = rng.unit_vector(static_cast<int>(d));
    const std::size_t i = n == 0 ? 0 : static_cast<std::size_t>(rng.uniform() * static_cast<double>(n));
    add_candidate(nu, n == 0 ? Vec(d, 0.0) : lat.point(i));
  }

  std::vector<double> values(candidates.size());
  par::parallel_for_dynamic(candidates.size(), [&](std::size_t i) {
    values[i] = line_integral_fast(w, candidates[i], f_cut);
  });
  std::size_t besti = 0;
  for (std::size_t i = 1; i < values.size(); ++i) {
    if (values[i] > values[besti]) besti = i;
  }

  SupLineResult res;
  res.candidates = candidates.size();
  Line cur = candidates[besti];
  double cur_val = values[besti];

  // coordinate descent on (nu, z)
  const double extent = std::max(lat.max_pair_distance(), 1e-6);
  double theta = 64.0 / (w.R * extent);
  double zstep = 0.125 / extent;
  const double theta_min = 0.05 / (w.R * extent);
  for (int round = 0; round < 64 && theta > theta_min; ++round) {
    bool improved = false;
    const auto try_line = [&](const Line& cand) {
      const double v = line_integral_fast(w, cand, f_cut);
      if (v > cur_val * (1.0 + 1e-12)) {
        const bool significant = v > cur_val * (1.0 + 1e-6);
        cur = cand;
        cur_val = v;
        ++res.refine_steps;
        return significant;
      }
      return false;
    };
    const auto basis = perp_basis(cur.nu);
    for (const auto& e : basis) {
      for (const double s : {theta, -theta}) {
        Line cand;
        cand.nu = normalized(add(cur.nu, scaled(e, s)));
        cand.z = sub(cur.z, scaled(cand.nu, dot(cand.nu, cur.z)));
        improved = try_line(cand) || improved;
      }
    }
    for (const auto& e : perp_basis(cur.nu)) {
      for (const double s : {zstep, -zstep}) {
        Line cand = cur;
        cand.z = add(cur.z, scaled(e, s));
        cand.z = sub(cand.z, scaled(cur.nu, dot(cur.nu, cand.z)));
        improved = try_line(cand) || improved;
      }
    }
    if (!improved) {
      theta *= 0.5;
      zstep *= 0.5;
    }
  }

  double tail = 0.0;
  const double value = line_integral_pairs(w, cur, f_cut, &tail);
  res.value = value - tail;
  res.tail_bound = tail;
  res.witness = cur;
  return res;
}

namespace {

double slice_scale(int d, double q, double R) {
  return std::pow(R, static_cast<double>(d) - static_cast<double>(d - 1) / q);
}

std::vector<std::pair<double, double>> merged_windows(const std::vector<double>& sorted_p,
                                                      double halfwidth) {
  std::vector<std::pair<double, double>> out;
  for (const double p : sorted_p) {
    const double lo = p - halfwidth, hi = p + halfwidth;
    if (!out.empty() && lo <= out.back().second) {
      out.back().second = std::max(out.back().second, hi);
    } else {
      out.emplace_back(lo, hi);
    }
  }
  return out;
}

}  // namespace

double mixed_norm_bound(const SubsetSumLattice& lattice, const Vec& nu, double R, double q,
                        const SliceProfile& profile) {
  if (!(q >= 1.0 && q <= 2.0)) throw std::invalid_argument("mixed_norm_bound: q in [1,2]");
  const auto sp = sorted_projections(lattice, nu);
  const std::size_t n = sp.p.size();
  const double S = slice_scale(lattice.d, q, R);
  const double W = 2.0 * profile.sigma_max;  // window in sigma units
  const double dl = 1.0 / (16.0 * R);
  const auto windows = merged_windows(sp.p, W / R);

  double integral = 0.0;
  for (const auto& [lo, hi] : windows) {
    const std::size_t m = static_cast<std::size_t>(std::ceil((hi - lo) / dl));
    const double h = (hi - lo) / static_cast<double>(m);
    integral += h * par::block_sum(m + 1, [&](std::size_t gi) {
      const double lambda = lo + h * static_cast<double>(gi);
      // sum profile over lattice points within the window
      const auto first = std::lower_bound(sp.p.begin(), sp.p.end(), lambda - W / R);
      double u = 0.0;
      for (auto it = first; it != sp.p.end() && *it <= lambda + W / R; ++it) {
        u += profile.eval(R * (lambda - *it));
      }
      u *= S;
      const double v = u * u;
      return (gi == 0 || gi == m) ? 0.5 * v : v;
    });
  }

  // contributions beyond the window, bounded by the envelope
  const double env_edge = profile.eval(W + 1.0);
  const double a_l1 = [&] {
    double s = 0.0;
    for (const double y : profile.a.y) s += y;
    return 2.0 * s * profile.a.dx;
  }();
  const double u_mass = static_cast<double>(n) * S * a_l1 / R;  // int U dlambda (approx.)
  double total_len = 0.0;
  for (const auto& [lo, hi] : windows) total_len += hi - lo;
  const double eps = static_cast<double>(n) * S * env_edge;
  integral += 2.0 * eps * u_mass + eps * eps * total_len;
  return integral;
}

ProfileAutocorr slice_autocorrelation(const SliceProfile& profile) {
  // rho(delta) = int a(u) a(u - delta) du via a padded FFT (linear
  // autocorrelation; the envelope continues a beyond its table).
  const double du = profile.a.dx;
  const double U = 3.0 * profile.sigma_max;
  const std::size_t M = static_cast<std::size_t>(2.0 * U / du);
  std::size_t Mp = 1;
  while (Mp < 2 * M) Mp <<= 1;
  std::vector<fftutil::cplx> a(Mp, fftutil::cplx(0.0, 0.0));
  for (std::size_t j = 0; j < M; ++j) {
    const double u = -U + du * static_cast<double>(j);
    a[j] = profile.eval(u);
  }
  fftutil::fft_pow2(a, -1);
  for (auto& v : a) v = fftutil::cplx(std::norm(v), 0.0);
  fftutil::fft_pow2(a, +1);
  const double scale = du / static_cast<double>(Mp);

  ProfileAutocorr out;
  out.rho.x0 = 0.0;
  out.rho.dx = du;
  const std::size_t keep = static_cast<std::size_t>(2.0 * profile.sigma_max / du) + 1;
  out.rho.y.resize(keep);
  for (std::size_t k = 0; k < keep; ++k) out.rho.y[k] = a[k].real() * scale;
  // per-pair bound beyond the kept range
  double tail = 0.0;
  for (std::size_t k = keep; k < std::min(Mp / 2, keep + 256); ++k) {
    tail = std::max(tail, std::abs(a[k].real()) * scale);
  }
  out.tail = tail;
  return out;
}

double mixed_norm_bound_fast(const SubsetSumLattice& lattice, const Vec& nu, double R,
                             double q, const SliceProfile& profile,
                             const ProfileAutocorr& autocorr) {
  const auto sp = sorted_projections(lattice, nu);
  const std::size_t n = sp.p.size();
  const double S = slice_scale(lattice.d, q, R);
  const double window = autocorr.rho.x_max() / R;

  std::vector<std::size_t> row_end(n);
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t j = i + 1;
    while (j < n && sp.p[j] - sp.p[i] <= window) ++j;
    row_end[i] = j;
  }
  const double rho0 = autocorr.rho.y.front();
  const double off = par::block_sum(n, [&](std::size_t i) {
    double s = 0.0;
    for (std::size_t j = i + 1; j < row_end[i]; ++j) {
      s += autocorr.rho.at(R * (sp.p[j] - sp.p[i]));
    }
    return s;
  }, 64);
  std::size_t near = 0;
  for (std::size_t i = 0; i < n; ++i) near += row_end[i] - (i + 1);
  const std::size_t far = n * (n - 1) / 2 - near;
  const double value = static_cast<double>(n) * rho0 + 2.0 * off +
                       2.0 * static_cast<double>(far) * autocorr.tail;
  return value * S * S / R;
}

double projection_slice_check(const ExpSumWeight& w, const Vec& nu, std::size_t z_samples,
                              std::uint64_t seed) {
  const auto& lat = w.lattice;
  const std::size_t d = static_cast<std::size_t>(lat.d);
  if (d > 3) throw std::invalid_argument("projection_slice_check: d must be 2 or 3");
  if (lat.size() > 64) throw std::invalid_argument("projection_slice_check: |Q| must be <= 64");
  const Vec unit_nu = normalized(nu);
  const double R = w.R;

  // offsets: the origin, perpendicular projections of lattice points,
  // then random small offsets
  std::vector<Vec> zs;
  zs.push_back(Vec(d, 0.0));
  for (std::size_t i = 0; i < lat.size() && zs.size() < z_samples; ++i) {
    const Vec q = lat.point(i);
    zs.push_back(sub(q, scaled(unit_nu, dot(unit_nu, q))));
  }
  Rng rng(seed);
  const double extent = std::max(lat.max_pair_distance(), 1.0 / R);
  while (zs.size() < z_samples) {
    Vec z(d);
    for (auto& x : z) x = rng.uniform(-extent, extent);
    zs.push_back(sub(z, scaled(unit_nu, dot(unit_nu, z))));
  }

  const auto sp = sorted_projections(lat, unit_nu);
  const double sigma_b = 48.0;  // slice transform window in units of 1/R
  const double dl = 1.0 / (16.0 * R);
  const auto windows = merged_windows(sp.p, sigma_b / R);
  const double step = default_line_step(w);

  double worst = 0.0;
  std::vector<double> lefts(zs.size()), rights(zs.size());
  for (std::size_t zi = 0; zi < zs.size(); ++zi) {
    const Line line{unit_nu, zs[zi]};
    lefts[zi] = line_integral(w, line, step);

    const double CR = w.support_radius();
    const double z2 = norm2(zs[zi]);
    if (z2 >= CR * CR) {
      rights[zi] = 0.0;
      continue;
    }
    const double T = std::sqrt(CR * CR - z2);
    const LineBump bump{&w.mollifier, R, z2, false};
    const auto table = pair_profile_table(bump, T, 1.5 * sigma_b / R * 16.0);
    // phases <z, q> per sorted slot
    std::vector<double> phase(lat.size());
    for (std::size_t s = 0; s < lat.size(); ++s) phase[s] = dot(zs[zi], lat.point(sp.id[s]));

    double integral = 0.0;
    for (const auto& [lo, hi] : windows) {
      const std::size_t m = static_cast<std::size_t>(std::ceil((hi - lo) / dl));
      const double h = (hi - lo) / static_cast<double>(m);
      integral += h * par::block_sum(m + 1, [&](std::size_t gi) {
        const double lambda = lo + h * static_cast<double>(gi);
        double re = 0.0, im = 0.0;
        const auto first = std::lower_bound(sp.p.begin(), sp.p.end(), lambda - sigma_b / R);
        for (std::size_t s = static_cast<std::size_t>(first - sp.p.begin());
             s < sp.p.size() && sp.p[s] <= lambda + sigma_b / R; ++s) {
          const double b = table.at(std::abs(lambda - sp.p[s]));
          const double ph = -kTwoPi * phase[s];
          re += b * std::cos(ph);
          im += b * std::sin(ph);
        }
        const double v = re * re + im * im;
        return (gi == 0 || gi == m) ? 0.5 * v : v;
      });
    }
    rights[zi] = integral;
  }

  double peak = 0.0;
  for (std::size_t zi = 0; zi < zs.size(); ++zi) {
    peak = std::max(peak, std::max(lefts[zi], rights[zi]));
  }
  for (std::size_t zi = 0; zi < zs.size(); ++zi) {
    const double den = std::max(std::max(lefts[zi], rights[zi]), 1e-9 * peak);
    if (den > 0.0) worst = std::max(worst, std::abs(lefts[zi] - rights[zi]) / den);
  }
  return worst;
}

namespace {

using CellKey = std::array<long long, 4>;

CellKey cell_key(const Vec& p, double inv_cell, std::size_t* boundary_flags) {
  CellKey key{0, 0, 0, 0};
  for (std::size_t c = 0; c < p.size(); ++c) {
    const double v = p[c] * inv_cell;
    key[c] = static_cast<long long>(std::floor(v));
    if (boundary_flags && std::abs(v - std::round(v)) <= 1e-12 * std::max(1.0, std::abs(v))) {
      ++*boundary_flags;
    }
  }
  return key;
}

// The multiset {g_i + q}: canonical coefficient accumulation so identical
// index multisets produce bit-identical coordinates.
std::vector<Vec> shifted_multiset(const PointFamily& family, const SubsetSumLattice& lattice,
                                  std::vector<std::pair<int, std::size_t>>* origin = nullptr) {
  const auto gens = family.generators();
  const int N = lattice.N;
  std::vector<Vec> pts;
  pts.reserve(gens.size() * lattice.size());
  for (int i = 0; i < N; ++i) {
    for (std::size_t qi = 0; qi < lattice.size(); ++qi) {
      const std::uint64_t b = lattice.bits[qi];
      Vec p(static_cast<std::size_t>(lattice.d), 0.0);
      for (int j = 0; j < N; ++j) {
        const double coeff = static_cast<double>((b >> j & 1ull) + (j == i ? 1ull : 0ull));
        if (coeff != 0.0) axpy(p, coeff, gens[static_cast<std::size_t>(j)]);
      }
      pts.push_back(std::move(p));
      if (origin) origin->emplace_back(i, qi);
    }
  }
  return pts;
}

}  // namespace

DeltaEnergy energy_delta(const PointFamily& family, const SubsetSumLattice& lattice) {
  if (static_cast<double>(lattice.size()) * lattice.N > 1e7) {
    throw std::invalid_argument("energy_delta: N * |Q| exceeds 1e7");
  }
  DeltaEnergy out;
  const double inv_cell = 4.0 * family.R;
  const auto pts = shifted_multiset(family, lattice);
  std::map<CellKey, std::uint64_t> cells;
  for (const auto& p : pts) {
    ++cells[cell_key(p, inv_cell, &out.boundary_flags)];
  }
  double sum = 0.0;
  for (const auto& [key, m] : cells) {
    sum += static_cast<double>(m) * static_cast<double>(m);
  }
  out.distinct_sites = cells.size();
  out.result.value = sum;
  out.result.method = "delta";
  out.result.error_bound = 0.0;
  return out;
}

EnergyResult energy_quadrature(const PointFamily& family, const SubsetSumLattice& lattice,
                               const MollifierTables& tables, const CapSystem& caps,
                               double near_radius) {
  if (tables.dim() != family.params.d) {
    throw std::invalid_argument("energy_quadrature: table dimension mismatch");
  }
  const double R = family.R;
  const int d = family.params.d;
  const double cell = near_radius / R;
  std::vector<std::pair<int, std::size_t>> origin;
  const auto pts = shifted_multiset(family, lattice, &origin);
  const std::size_t n = pts.size();

  std::map<CellKey, std::vector<std::size_t>> grid;
  for (std::size_t a = 0; a < n; ++a) {
    grid[cell_key(pts[a], 1.0 / cell, nullptr)].push_back(a);
  }

  // unordered near pairs plus diagonal
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (std::size_t a = 0; a < n; ++a) pairs.emplace_back(a, a);
  const int m = d;
  for (const auto& [key, members] : grid) {
    // neighbors with lexicographically greater-or-equal keys
    std::vector<CellKey> neigh;
    std::vector<int> idx(static_cast<std::size_t>(m), -1);
    while (true) {
      CellKey nk = key;
      for (int c = 0; c < m; ++c) nk[static_cast<std::size_t>(c)] += idx[static_cast<std::size_t>(c)];
      neigh.push_back(nk);
      int c = 0;
      for (; c < m; ++c) {
        if (++idx[static_cast<std::size_t>(c)] <= 1) break;
        idx[static_cast<std::size_t>(c)] = -1;
      }
      if (c == m) break;
    }
    for (const auto& nk : neigh) {
      if (nk < key) continue;
      const auto it = grid.find(nk);
      if (it == grid.end()) continue;
      const bool same = it->first == key;
      for (std::size_t ai = 0; ai < members.size(); ++ai) {
        const std::size_t a = members[ai];
        for (std::size_t bi = same ? ai + 1 : 0; bi < it->second.size(); ++bi) {
          const std::size_t b = it->second[bi];
          if (dist(pts[a], pts[b]) <= cell) pairs.emplace_back(std::min(a, b), std::max(a, b));
        }
      }
    }
  }

  const double rd = std::pow(R, d);
  const double value = par::block_sum(pairs.size(), [&](std::size_t pi) {
    const auto [a, b] = pairs[pi];
    const auto& ca = caps.caps[static_cast<std::size_t>(origin[a].first)];
    const auto& cb = caps.caps[static_cast<std::size_t>(origin[b].first)];
    const Vec delta = sub(pts[a], pts[b]);
    double s = 0.0;
    for (std::size_t u = 0; u < ca.nodes_rel.size(); ++u) {
      for (std::size_t v = 0; v < cb.nodes_rel.size(); ++v) {
        double dist2 = 0.0;
        for (int c = 0; c < d; ++c) {
          const double t = ca.nodes_rel[u][static_cast<std::size_t>(c)] -
                           cb.nodes_rel[v][static_cast<std::size_t>(c)] +
                           delta[static_cast<std::size_t>(c)];
          dist2 += t * t;
        }
        s += ca.weights[u] * cb.weights[v] * tables.kappa(R * std::sqrt(dist2));
      }
    }
    return (a == b ? 1.0 : 2.0) * s * rd;
  }, 64);

  const std::size_t near_ordered = 2 * pairs.size() - n;  // diagonal counted once
  const std::size_t far = n * n - near_ordered;
  EnergyResult res;
  res.value = value;
  res.method = "quadrature";
  res.error_bound = static_cast<double>(far) * rd * tables.kappa_env(std::max(0.0, near_radius - 2.0));
  return res;
}

double delta_calibration(const geometry::Surface& surface, const MollifierTables& tables,
                         double c, double b, int n0, int quad_order, double R0) {
  geometry::CurveParams params;
  params.d = surface.d;
  params.c = c;
  params.b = b;
  auto family = geometry::lift_points(surface, params, R0, n0);
  family.xis.resize(1);
  family.params.N = 1;
  const auto lattice = construction::build_lattice(family, 0);
  const auto caps = construction::build_caps(family, quad_order);
  const auto e = energy_quadrature(family, lattice, tables, caps);
  return e.value / std::pow(R0, surface.d);
}

}  // namespace xmt::transforms

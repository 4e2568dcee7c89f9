#include "xmt/estimates.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "xmt/fft.hpp"
#include "xmt/parallel.hpp"
#include "xmt/rng.hpp"

namespace xmt::estimates {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::size_t ipow(std::size_t base, int e) {
  std::size_t r = 1;
  for (int i = 0; i < e; ++i) r *= base;
  return r;
}

// Apply the 1-D transform along `axis` to every line of the grid.
void axis_transform(GridFunction& g, int axis, int sign) {
  const std::size_t M = static_cast<std::size_t>(g.M);
  const std::size_t n = g.size();
  const std::size_t stride = ipow(M, g.d - 1 - axis);
  const std::size_t lines = n / M;
  std::vector<std::complex<double>> buf(M);
  for (std::size_t line = 0; line < lines; ++line) {
    // decompose line index into (outer, inner) around the axis
    const std::size_t outer = line / stride;
    const std::size_t inner = line % stride;
    const std::size_t base = outer * stride * M + inner;
    for (std::size_t i = 0; i < M; ++i) buf[i] = g.v[base + i * stride];
    fftutil::transform(buf, sign);
    for (std::size_t i = 0; i < M; ++i) g.v[base + i * stride] = buf[i];
  }
}

}  // namespace

GridFunction GridFunction::zeros(int d, int M, double delta) {
  GridFunction g;
  g.d = d;
  g.M = M;
  g.delta = delta;
  g.v.assign(ipow(static_cast<std::size_t>(M), d), {0.0, 0.0});
  return g;
}

double GridFunction::norm_p(double p) const {
  const double w = std::pow(delta, d);
  if (p == kInf) {
    double m = 0.0;
    for (const auto& x : v) m = std::max(m, std::abs(x));
    return m;
  }
  double s = 0.0;
  for (const auto& x : v) s += std::pow(std::abs(x), p);
  return std::pow(s * w, 1.0 / p);
}

GridFunction dft(const GridFunction& g, int sign) {
  GridFunction out = g;
  for (int axis = 0; axis < g.d; ++axis) axis_transform(out, axis, sign);
  // Forward carries the quadrature weight delta^d; the inverse of that map
  // is the unscaled backward transform times delta_dual^d. Either way the
  // output lives on the dual grid with spacing 1/(M delta).
  const double f = std::pow(g.delta, g.d);
  for (auto& x : out.v) x *= f;
  out.delta = 1.0 / (static_cast<double>(g.M) * g.delta);
  return out;
}

GridFunction grid_slice(const GridFunction& g, int axis, int index) {
  if (axis < 0 || axis >= g.d) throw std::invalid_argument("grid_slice: bad axis");
  GridFunction out = GridFunction::zeros(g.d - 1, g.M, g.delta);
  const std::size_t M = static_cast<std::size_t>(g.M);
  const std::size_t stride = ipow(M, g.d - 1 - axis);
  const std::size_t lines = g.size() / M;
  for (std::size_t line = 0; line < lines; ++line) {
    const std::size_t outer = line / stride;
    const std::size_t inner = line % stride;
    out.v[line] = g.v[outer * stride * M + inner + static_cast<std::size_t>(index) * stride];
  }
  return out;
}

GridFunction grid_xray(const GridFunction& w, int axis) {
  if (axis < 0 || axis >= w.d) throw std::invalid_argument("grid_xray: bad axis");
  GridFunction out = GridFunction::zeros(std::max(w.d - 1, 1), w.M, w.delta);
  if (w.d == 1) {
    std::complex<double> s{0.0, 0.0};
    for (const auto& x : w.v) s += x;
    out.v[0] = s * w.delta;
    return out;
  }
  const std::size_t M = static_cast<std::size_t>(w.M);
  const std::size_t stride = ipow(M, w.d - 1 - axis);
  const std::size_t lines = w.size() / M;
  for (std::size_t line = 0; line < lines; ++line) {
    const std::size_t outer = line / stride;
    const std::size_t inner = line % stride;
    const std::size_t base = outer * stride * M + inner;
    std::complex<double> s{0.0, 0.0};
    for (std::size_t i = 0; i < M; ++i) s += w.v[base + i * stride];
    out.v[line] = s * w.delta;
  }
  return out;
}

GridFunction weight_of(const GridFunction& h) {
  GridFunction what = dft(h, -1);
  for (auto& x : what.v) x = std::norm(x);
  return what;
}

double parseval_gap(const GridFunction& h) {
  const double a = h.norm_p(2.0);
  const double b = dft(h, -1).norm_p(2.0);
  return std::abs(a - b) / std::max(a, 1e-300);
}

double hausdorff_young_margin(const GridFunction& f, double q) {
  if (!(q >= 1.0 && q <= 2.0)) throw std::invalid_argument("hausdorff_young_margin: q in [1,2]");
  const double qp = q == 1.0 ? kInf : q / (q - 1.0);
  return f.norm_p(q) - dft(f, -1).norm_p(qp);
}

HyChain hy_chain(const GridFunction& h, int axis, double p) {
  if (!(p >= 1.0)) throw std::invalid_argument("hy_chain: p must be >= 1 (or infinity)");
  const double q = p == kInf ? 1.0 : 2.0 * p / (2.0 * p - 1.0);
  const double two_p = p == kInf ? kInf : 2.0 * p;

  HyChain out;
  const GridFunction w = weight_of(h);
  out.lhs = grid_xray(w, axis).norm_p(p);

  double mink = 0.0, hy = 0.0;
  for (int index = 0; index < h.M; ++index) {
    const GridFunction s = grid_slice(h, axis, index);
    const GridFunction fhat = dft(s, -1);
    const double a = fhat.norm_p(two_p);
    const double b = s.norm_p(q);
    mink += h.delta * a * a;
    hy += h.delta * b * b;
  }
  out.mink_rhs = mink;
  out.hy_rhs = hy;
  return out;
}

std::tuple<double, double, bool> hy_xray_check(const GridFunction& h, int axis, double p) {
  const HyChain c = hy_chain(h, axis, p);
  return {c.lhs, c.hy_rhs, c.lhs <= c.hy_rhs * (1.0 + 1e-9)};
}

double minkowski_step_check(const GridFunction& h, int axis, double p) {
  const HyChain c = hy_chain(h, axis, p);
  return c.mink_rhs - c.lhs;
}

HySuiteResult hy_random_suite(int d, int M, std::size_t draws, std::uint64_t seed,
                              const std::vector<double>& ps, bool collect_rows,
                              std::size_t sharp_draws) {
  HySuiteResult res;
  res.draws = draws;
  res.min_rel_margin = kInf;

  struct Row {
    double min_rel_margin = kInf;
    bool failed = false;
    std::vector<HyDrawRow> rows;
  };
  std::vector<Row> acc(draws);

  par::parallel_for_dynamic(draws, [&](std::size_t i) {
    Rng rng = Rng::for_task(seed, i);
    GridFunction h = GridFunction::zeros(d, M, 1.0);
    for (auto& x : h.v) x = {rng.normal(), rng.normal()};
    Row row;
    for (const double p : ps) {
      const HyChain c = hy_chain(h, 0, p);
      const double margin = (c.hy_rhs - c.lhs) / std::max(c.hy_rhs, 1e-300);
      row.min_rel_margin = std::min(row.min_rel_margin, margin);
      if (c.lhs > c.hy_rhs * (1.0 + 1e-9)) row.failed = true;
      if (collect_rows) {
        row.rows.push_back(HyDrawRow{static_cast<int>(i), p, c.lhs, c.hy_rhs, c.hy_rhs - c.lhs});
      }
    }
    acc[i] = std::move(row);
  });

  for (auto& row : acc) {
    if (row.failed) ++res.failures;
    res.min_rel_margin = std::min(res.min_rel_margin, row.min_rel_margin);
    if (collect_rows) {
      res.rows.insert(res.rows.end(), row.rows.begin(), row.rows.end());
    }
  }

  // sharpness witness: nonnegative draws at p = infinity
  std::vector<double> ratios(sharp_draws, 1.0);
  par::parallel_for_dynamic(sharp_draws, [&](std::size_t i) {
    Rng rng = Rng::for_task(seed ^ 0xfeedULL, i);
    GridFunction h = GridFunction::zeros(d, M, 1.0);
    for (auto& x : h.v) x = {rng.uniform(), 0.0};
    const HyChain c = hy_chain(h, 0, kInf);
    ratios[i] = c.lhs / std::max(c.hy_rhs, 1e-300);
  });
  for (const double r : ratios) res.sharp_min_ratio = std::min(res.sharp_min_ratio, r);
  return res;
}

}  // namespace xmt::estimates

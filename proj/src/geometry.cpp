#include "xmt/geometry.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace xmt::geometry {

void CurveParams::validate(bool require_points) const {
  if (d < 2) throw std::invalid_argument("CurveParams: d must be >= 2");
  if (!(c > b && b > 1.0)) throw std::invalid_argument("CurveParams: need c > b > 1");
  if (require_points && N < 1) throw std::invalid_argument("CurveParams: need N >= 1");
}

bool AxisBox::contains(const Vec& p, double rtol) const {
  for (std::size_t i = 0; i < center.size(); ++i) {
    if (std::abs(p[i] - center[i]) > halfwidths[i] * (1.0 + rtol)) return false;
  }
  return true;
}

Vec moment_curve(double t, int d) {
  if (d < 1) throw std::invalid_argument("moment_curve: d must be >= 1");
  Vec p(static_cast<std::size_t>(d));
  double v = 1.0;
  for (int i = 0; i < d; ++i) {
    v *= t;
    p[static_cast<std::size_t>(i)] = v;
  }
  return p;
}

Vec axis_scale(const Vec& p, double c) {
  if (!(c > 0.0)) throw std::invalid_argument("axis_scale: c must be positive");
  Vec r(p.size());
  double f = 1.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    f /= c;
    r[i] = p[i] * f;
  }
  return r;
}

AxisBox axis_scale(const AxisBox& box, double c) {
  return AxisBox{axis_scale(box.center, c), axis_scale(box.halfwidths, c)};
}

Vec phi_project(const Vec& p) {
  if (p.size() < 2) throw std::invalid_argument("phi_project: need dimension >= 2");
  if (p[0] == 0.0) throw std::domain_error("phi_project: first coordinate is zero");
  Vec r(p.size() - 1);
  for (std::size_t i = 1; i < p.size(); ++i) r[i - 1] = p[i] / p[0];
  return r;
}

AxisBox box_u(int n, const CurveParams& params) {
  // boxes are well-defined for any b > 0; the c > b regime matters only for
  // the incidence statements
  if (params.d < 2 || !(params.c > 1.0) || !(params.b > 0.0)) {
    throw std::invalid_argument("box_u: need d >= 2, c > 1, b > 0");
  }
  if (n < 0) throw std::invalid_argument("box_u: n must be >= 0");
  const double tn = std::pow(params.c, -static_cast<double>(n));
  const double tn1 = std::pow(params.c, -static_cast<double>(n + 1));
  return AxisBox{moment_curve(tn, params.d), moment_curve(params.b * tn1, params.d)};
}

AxisBox box_q(const Vec& v) {
  Vec hw(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) hw[i] = std::abs(v[i]);
  return AxisBox{Vec(v.size(), 0.0), hw};
}

Vec anchor_offsets(int n, const CurveParams& params) {
  params.validate();
  if (n < 1) throw std::invalid_argument("anchor_offsets: n must be >= 1");
  Vec omega(static_cast<std::size_t>(params.d - 1));
  // exponents n, 3n, 4n, ..., dn
  omega[0] = std::pow(params.c, -static_cast<double>(n));
  for (int j = 1; j < params.d - 1; ++j) {
    omega[static_cast<std::size_t>(j)] =
        std::pow(params.c, -static_cast<double>((j + 2) * n));
  }
  return omega;
}

double Surface::value(const Vec& omega) const {
  switch (kind) {
    case Kind::Paraboloid:
      return norm2(omega);
    case Kind::SphereCap: {
      // sphere of radius 1/2 tangent at the origin: Hessian/2 = identity
      const double s = norm2(omega);
      if (s > 0.25) throw std::domain_error("SphereCap: offset outside the chart");
      return 0.5 - std::sqrt(0.25 - s);
    }
    case Kind::Quadratic:
      return quad_form(omega);
  }
  return 0.0;
}

Vec Surface::gradient(const Vec& omega) const {
  const std::size_t m = omega.size();
  Vec g(m, 0.0);
  switch (kind) {
    case Kind::Paraboloid:
      for (std::size_t i = 0; i < m; ++i) g[i] = 2.0 * omega[i];
      break;
    case Kind::SphereCap: {
      const double s = norm2(omega);
      if (s > 0.25) throw std::domain_error("SphereCap: offset outside the chart");
      const double den = std::sqrt(0.25 - s);
      for (std::size_t i = 0; i < m; ++i) g[i] = omega[i] / den;
      break;
    }
    case Kind::Quadratic:
      for (std::size_t i = 0; i < m; ++i) {
        double s = 0.0;
        for (std::size_t j = 0; j < m; ++j) s += quad[i * m + j] * omega[j];
        g[i] = 2.0 * s;
      }
      break;
  }
  return g;
}

double Surface::quad_form(const Vec& omega) const {
  const std::size_t m = omega.size();
  if (kind != Kind::Quadratic) return norm2(omega);
  double s = 0.0;
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j) s += omega[i] * quad[i * m + j] * omega[j];
  return s;
}

std::string Surface::id() const {
  switch (kind) {
    case Kind::Paraboloid: return "paraboloid";
    case Kind::SphereCap: return "sphere";
    case Kind::Quadratic: return "quadratic";
  }
  return "paraboloid";
}

Surface Surface::make(const std::string& id, int d) {
  if (d < 2) throw std::invalid_argument("Surface: d must be >= 2");
  Surface s;
  s.d = d;
  const std::size_t m = static_cast<std::size_t>(d - 1);
  s.quad.assign(m * m, 0.0);
  for (std::size_t i = 0; i < m; ++i) s.quad[i * m + i] = 1.0;
  if (id == "paraboloid") {
    s.kind = Kind::Paraboloid;
    s.domain_radius = 1.0;
  } else if (id == "sphere") {
    s.kind = Kind::SphereCap;
    s.domain_radius = 0.4;
  } else if (id == "quadratic") {
    // diagonal form with leading eigenvalue 1 in the e1 direction
    s.kind = Kind::Quadratic;
    s.domain_radius = 1.0;
    for (std::size_t i = 1; i < m; ++i) s.quad[i * m + i] = 1.0 / static_cast<double>(i + 1);
  } else {
    throw std::invalid_argument("Surface: unknown id '" + id + "'");
  }
  return s;
}

Vec graph_point(const Surface& surface, const Vec& omega) {
  const int d = surface.d;
  Vec p(static_cast<std::size_t>(d), 0.0);
  p[0] = omega.empty() ? 0.0 : omega[0];
  p[1] = surface.value(omega);
  for (int j = 1; j < d - 1; ++j) p[static_cast<std::size_t>(j + 1)] = omega[static_cast<std::size_t>(j)];
  return p;
}

std::vector<Vec> PointFamily::generators() const {
  std::vector<Vec> g;
  g.reserve(xis.size());
  for (const auto& xi : xis) g.push_back(sub(xi, xi0));
  return g;
}

PointFamily lift_points(const Surface& surface, CurveParams params, double R,
                        int n0, int stride) {
  params.validate();
  if (surface.d != params.d) throw std::invalid_argument("lift_points: dimension mismatch");
  if (R < 1.0) throw std::invalid_argument("lift_points: R must be >= 1");
  if (n0 < 0 || stride < 1) throw std::invalid_argument("lift_points: bad n0/stride");

  // Largest index with c^{-n} >= 1/R (tolerant to R being an exact power).
  const int n_max = static_cast<int>(std::floor(std::log(R) / std::log(params.c) + 1e-9));
  const int N = (n_max - n0) / stride;
  if (N < 1) {
    std::ostringstream os;
    os << "lift_points: R = " << R << " leaves no usable index (n_max = " << n_max
       << ", n0 = " << n0 << ")";
    throw std::invalid_argument(os.str());
  }
  if (static_cast<double>(params.d) * N * std::log2(params.c) > 900.0) {
    throw std::invalid_argument("lift_points: d*N*log2(c) > 900 exceeds double range");
  }

  PointFamily fam;
  fam.surface = surface;
  fam.R = R;
  fam.n0 = n0;
  fam.stride = stride;
  fam.xi0 = Vec(static_cast<std::size_t>(params.d), 0.0);  // Phi(0) = 0
  fam.xis.reserve(static_cast<std::size_t>(N));
  for (int j = 1; j <= N; ++j) {
    const int n = n0 + j * stride;
    const Vec omega = anchor_offsets(n, params);
    if (norm(omega) > surface.domain_radius) {
      throw std::domain_error("lift_points: offset outside the surface chart");
    }
    fam.xis.push_back(graph_point(surface, omega));
  }
  params.N = N;
  fam.params = params;
  // Separation (> 1/R pairwise) holds by construction for c > 2; it is
  // checked by incidence::separation_check, which the experiment gates on.
  return fam;
}

}  // namespace xmt::geometry

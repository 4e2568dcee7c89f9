#pragma once

// Moment-curve primitives, the axis rescaling L_c, the central projection
// phi, the axis-aligned boxes U_n, and the lift of lacunary offsets onto a
// C^2 graph hypersurface.
//
// Ambient coordinate convention for lifted points: a graph point is stored
// as (omega_1, Phi(omega), omega_2, ..., omega_{d-1}); the graph value
// occupies the second slot, which is the quadratic slot of the model curve
// (t, t^2, ..., t^d). All box-membership statements rely on this layout.

#include <string>
#include <vector>

#include "xmt/common.hpp"

namespace xmt::geometry {

struct CurveParams {
  int d = 2;       // ambient dimension, >= 2
  double c = 4.0;  // lacunarity base, > b
  double b = 2.0;  // box inflation factor, > 1
  int N = 0;       // number of points; filled by lift_points

  void validate(bool require_points = false) const;
};

struct AxisBox {
  Vec center;
  Vec halfwidths;

  // Coordinate-wise membership with relative tolerance on each halfwidth.
  bool contains(const Vec& p, double rtol = 1e-12) const;
};

// The model surface: graph of Phi over a ball in R^{d-1}, Phi(0) = 0, with
// Hessian/2 at the origin equal to the quadratic form `quad` (row-major
// (d-1)x(d-1), normalized so quad(e1,e1) = 1).
struct Surface {
  enum class Kind { Paraboloid, SphereCap, Quadratic };

  Kind kind = Kind::Paraboloid;
  int d = 2;
  std::vector<double> quad;  // (d-1)^2 entries
  double domain_radius = 1.0;

  double value(const Vec& omega) const;   // Phi(omega)
  Vec gradient(const Vec& omega) const;   // grad Phi(omega)
  double quad_form(const Vec& omega) const;

  std::string id() const;
  static Surface make(const std::string& id, int d);
};

struct PointFamily {
  Vec xi0;                // anchor; the graph point at omega = 0
  std::vector<Vec> xis;   // xis[i] = graph point at offsets(index i)
  CurveParams params;     // params.N == xis.size()
  double R = 1.0;         // frequency scale
  int n0 = 2;             // discarded index prefix
  int stride = 1;         // index stride (thinning)
  Surface surface;

  int dim() const { return params.d; }
  // Generators xi_i - xi0 used by the subset-sum lattice.
  std::vector<Vec> generators() const;
};

// (t, t^2, ..., t^d).
Vec moment_curve(double t, int d);

// Entry-wise multiplication by moment_curve(1/c, d): coordinate i (1-based)
// is multiplied by c^{-i}.
Vec axis_scale(const Vec& p, double c);
AxisBox axis_scale(const AxisBox& box, double c);

// (x_2, ..., x_d) / x_1. Throws std::domain_error when x_1 == 0.
Vec phi_project(const Vec& p);

// Box centered at moment_curve(c^{-n}, d) with halfwidths
// moment_curve(b * c^{-(n+1)}, d).
AxisBox box_u(int n, const CurveParams& params);

// Origin-centered axis box with halfwidth vector |v| (entry-wise).
AxisBox box_q(const Vec& v);

// omega_n = (c^{-n}, c^{-3n}, c^{-4n}, ..., c^{-dn}) in R^{d-1}.
Vec anchor_offsets(int n, const CurveParams& params);

// Graph point (omega_1, Phi(omega), omega_2, ..., omega_{d-1}).
Vec graph_point(const Surface& surface, const Vec& omega);

// Lift the lacunary offsets onto the surface. Keeps indices
// n0 + stride, n0 + 2*stride, ..., up to floor(log_c R), so the finest
// retained scale c^{-n_max} stays >= 1/R and pairwise separation exceeds
// 1/R for c > 2. Throws when R leaves no usable index or an offset exits
// the surface chart.
PointFamily lift_points(const Surface& surface, CurveParams params, double R,
                        int n0 = 2, int stride = 1);

}  // namespace xmt::geometry

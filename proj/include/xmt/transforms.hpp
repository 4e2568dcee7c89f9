#pragma once

// X-ray line integrals of the exponential-sum weight, the sup-over-lines
// search, slice mixed norms, the projection-slice consistency check, and the
// two energy routes (delta model and cap quadrature).
//
// Two evaluation routes exist for line integrals. The contract route is a
// composite trapezoid along the line with a step fine enough to resolve
// every pair frequency of the lattice; it costs O(R) and is the reference.
// The pair route expands |sum_q e(-x.q)|^2 into lattice pairs and integrates
// each pair's 1-D oscillatory profile; only pairs whose projections onto the
// line direction nearly coincide contribute, so the cost is independent of R
// and the dropped remainder carries an explicit bound.

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "xmt/common.hpp"
#include "xmt/construction.hpp"
#include "xmt/geometry.hpp"
#include "xmt/mollifier.hpp"

namespace xmt::transforms {

using construction::CapSystem;
using construction::ExpSumWeight;
using construction::MollifierTables;
using construction::SliceProfile;
using construction::SubsetSumLattice;
using geometry::PointFamily;

struct Line {
  Vec nu;  // unit direction
  Vec z;   // offset in nu-perp: <z, nu> = 0 within 1e-12
};

// Line with the given direction through the given point.
Line make_line(const Vec& nu, const Vec& through);

struct EnergyResult {
  double value = 0.0;
  std::string method;
  double error_bound = 0.0;
};

// Largest pair frequency of the lattice (max pairwise |q - q'|); the
// trapezoid step must not exceed 1/(16 * this).
double max_pair_frequency(const ExpSumWeight& w);
double default_line_step(const ExpSumWeight& w);

// Composite trapezoid of w along the line, over the segment where the
// envelope is nonzero. Throws when step is too coarse to resolve the
// oscillations (aliasing guard).
double line_integral(const ExpSumWeight& w, const Line& line, double step);

// Pair-decomposition route. Pairs with projection gap above f_cut/R are
// dropped; their total is bounded and written to *tail_bound. The returned
// value minus the tail bound is a certified lower bound for the integral.
double line_integral_pairs(const ExpSumWeight& w, const Line& line,
                           double f_cut = 48.0, double* tail_bound = nullptr);

struct SupLineResult {
  double value = 0.0;       // evaluated maximum, tail bound already subtracted
  double tail_bound = 0.0;
  Line witness;
  std::size_t candidates = 0;
  std::size_t refine_steps = 0;
};

// Evaluated maximum of the line integral over a candidate family (lattice
// pair lines, adversarial directions seeded at dense projection clusters,
// random lines), followed by coordinate-descent refinement. A lower bound
// for the true supremum by construction.
SupLineResult sup_line_lower_bound(const ExpSumWeight& w, std::int64_t budget,
                                   std::uint64_t seed = 1);

// int over lambda of (slice L^q norm upper bound)^2, where the slice norm of
// h = sum_q eta_R(. - q) at lambda is bounded by the sum of the per-point
// profile norms. Grid route: trapezoid on a lambda grid of spacing
// <= 1/(16 R) over windows around the projected lattice points.
double mixed_norm_bound(const SubsetSumLattice& lattice, const Vec& nu, double R,
                        double q, const SliceProfile& profile);

// Same quantity with the lambda integral carried out exactly through the
// autocorrelation of the profile; cost independent of R. `rho` must be
// slice_autocorrelation(profile).
struct ProfileAutocorr {
  construction::UniformTable rho;  // rho(delta) = int a(u) a(u-delta) du
  double tail = 0.0;               // bound on the dropped product mass per pair
};
ProfileAutocorr slice_autocorrelation(const SliceProfile& profile);
double mixed_norm_bound_fast(const SubsetSumLattice& lattice, const Vec& nu, double R,
                             double q, const SliceProfile& profile,
                             const ProfileAutocorr& autocorr);

// Two-route check of X_nu w(z) = int |FT of slice of h at lambda (z)|^2:
// the left side by direct trapezoid, the right side by per-point slice
// transforms. Returns the maximum relative discrepancy over the offsets.
double projection_slice_check(const ExpSumWeight& w, const Vec& nu,
                              std::size_t z_samples, std::uint64_t seed = 1);

struct DeltaEnergy {
  EnergyResult result;            // value = sum over sites of multiplicity^2
  std::size_t distinct_sites = 0;
  std::size_t boundary_flags = 0;  // points within 1e-12 of a merge-cell wall
};

// Multiset {xi_i + q} merged at resolution 1/(4R); returns sum m(z)^2.
DeltaEnergy energy_delta(const PointFamily& family, const SubsetSumLattice& lattice);

// Cap-quadrature evaluation of ||f dsigma * h||_2^2 restricted to point
// pairs within near_radius/R of each other; the neglected far pairs are
// bounded through the kernel envelope and accumulated into error_bound.
EnergyResult energy_quadrature(const PointFamily& family, const SubsetSumLattice& lattice,
                               const MollifierTables& tables, const CapSystem& caps,
                               double near_radius = 10.0);

// Ratio between the cap-quadrature energy and the delta-model count for a
// single cap with a singleton lattice, divided by R0^d. Multiplying the
// delta count by calibration * R^d makes the two routes comparable.
double delta_calibration(const geometry::Surface& surface, const MollifierTables& tables,
                         double c = 4.0, double b = 2.0, int n0 = 2,
                         int quad_order = 12, double R0 = 4096.0);

}  // namespace xmt::transforms

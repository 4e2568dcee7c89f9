#pragma once

// Checks of the incidence-geometry conclusions that the weight construction
// depends on: dyadic distinctness of directional projections with a small
// bad set, disjointness of projected boxes, the bound on how many lattice
// balls a hyperplane can meet, slab-count profiles, and point separation.

#include <cstdint>
#include <set>
#include <utility>
#include <vector>

#include "xmt/common.hpp"
#include "xmt/geometry.hpp"

namespace xmt::construction {
struct SubsetSumLattice;
}

namespace xmt::incidence {

using geometry::CurveParams;
using geometry::PointFamily;

struct BadSet {
  std::set<int> indices;  // 1-based point indices whose class collides
  std::set<int> ties;     // indices whose classification hit an interval boundary
};

struct Plane {
  Vec nu;         // unit normal
  double offset;  // <nu, x> = offset
};

struct IncidenceProfile {
  Vec nu;
  std::vector<std::pair<double, int>> samples;  // (lambda, count)
};

// k with base^k <= v < base^{k+1}; tie set when v lies within relative 1e-9
// of an interval boundary. Throws std::domain_error for v <= 0.
std::pair<int, bool> dyadic_index(double v, double base);

// Classifies |<nu, xi_n - xi0>| for all n. Whenever two indices share a
// class, the smaller index joins the bad set; projections that vanish
// exactly join it directly.
BadSet bad_set(const PointFamily& family, const Vec& nu, double base);

// True iff the nu-projections of box_u(n) and box_u(k) intersect (each
// interval computed exactly as center.nu +- sum_i halfwidth_i |nu_i|).
bool box_projection_overlap(int n, int k, const Vec& nu, const CurveParams& params);

// #{centers p : |<nu,p> - offset| <= radius}.
int plane_incidence(const std::vector<Vec>& centers, double radius, const Plane& plane);

struct PlaneSearchResult {
  int max_count = 0;
  Plane worst;
  bool exhaustive = false;   // exhaustive over all d-tuples of centers
  std::int64_t planes_tested = 0;
};

// Maximum of plane_incidence over the adversarial plane family. Exhaustive
// over all d-tuples of centers when |centers| <= exhaustive_limit; otherwise
// a seeded sample (random d-tuples + coordinate planes + planes through each
// center normal to sampled directions) capped by `budget`.
PlaneSearchResult max_plane_incidence(const std::vector<Vec>& centers, double radius,
                                      std::int64_t budget, std::uint64_t seed = 1,
                                      std::size_t exhaustive_limit = 256);

// #{q in lattice : |<nu,q> - lambda| <= 1/R}.
int slab_count(const construction::SubsetSumLattice& lattice, const Vec& nu,
               double lambda, double R);

// Largest slab count over lambda (attained at some projected point).
int slab_sup(const construction::SubsetSumLattice& lattice, const Vec& nu, double R,
             double* worst_lambda = nullptr);

// All pairwise distances exceed 1/R (m != n).
bool separation_check(const PointFamily& family);

// Direction family used by every sweep: coordinate axes, normals of planes
// through point tuples, their +-1e-6 perturbations, then uniform fill up to
// `count`. Deterministic under `seed`.
std::vector<Vec> direction_family(const PointFamily& family, std::size_t count,
                                  std::uint64_t seed);

struct SweepResult {
  int max_bad = 0;
  Vec worst_direction;
  std::size_t tie_directions = 0;
  std::size_t violations = 0;      // directions with |bad set| > d-1
  std::size_t retest_failures = 0; // tie retests that still violate
  std::size_t directions = 0;
};

// Evaluates bad_set over a direction family; tie-flagged directions are
// re-tested under small perturbations. Parallel over directions with a
// deterministic reduction.
SweepResult bad_set_sweep(const PointFamily& family, const std::vector<Vec>& dirs,
                          double base);

// Projected subset sums whose coefficient vectors agree on the bad set must
// stay > 1/R apart. Returns the number of violating pairs over the given
// directions and the smallest projected gap seen among checked pairs.
struct DistinctnessResult {
  std::size_t violations = 0;
  double min_gap = 0.0;  // smallest |projection difference| among flagged pairs
  Vec worst_direction;
};
DistinctnessResult projected_distinctness(const PointFamily& family,
                                          const construction::SubsetSumLattice& lattice,
                                          const std::vector<Vec>& dirs, double base);

}  // namespace xmt::incidence

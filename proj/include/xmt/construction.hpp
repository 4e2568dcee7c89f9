#pragma once

// The subset-sum lattice Q, the exponential-sum weight w = |h_hat|^2 in
// closed form, and the normalized cap system f = sum_i S_i.

#include <cstdint>
#include <utility>
#include <vector>

#include "xmt/common.hpp"
#include "xmt/geometry.hpp"
#include "xmt/mollifier.hpp"

namespace xmt::construction {

using geometry::PointFamily;

struct SubsetSumLattice {
  int N = 0;  // number of generators
  int k = 0;  // Hamming weight
  int d = 2;
  std::vector<Vec> generators;      // xi_i - xi0
  std::vector<std::uint64_t> bits;  // coefficient vectors, one bit per generator
  std::vector<double> pts;          // flat size * d coordinates

  std::size_t size() const { return bits.size(); }
  Vec point(std::size_t i) const {
    return Vec(pts.begin() + static_cast<std::ptrdiff_t>(i) * d,
               pts.begin() + static_cast<std::ptrdiff_t>(i + 1) * d);
  }
  double proj(std::size_t i, const Vec& nu) const {
    double s = 0.0;
    for (int j = 0; j < d; ++j) s += pts[i * static_cast<std::size_t>(d) + static_cast<std::size_t>(j)] * nu[static_cast<std::size_t>(j)];
    return s;
  }
  std::vector<Vec> points() const;
  // Extent of pairwise differences: exact max for small lattices, the bound
  // 2 max|q| otherwise.
  double max_pair_distance() const;
};

// Enumerates all C(N,k) coefficient vectors over the family's generators.
// Throws when C(N,k) exceeds size_cap or N > 64.
SubsetSumLattice build_lattice(const PointFamily& family, int k,
                               std::size_t size_cap = 1000000);
SubsetSumLattice build_lattice(const std::vector<Vec>& generators, int k,
                               std::size_t size_cap = 1000000);

// Count of lattice elements with coefficient i equal to 0 (the ones whose
// +generator shift lands in the weight-(k+1) lattice) and its fraction.
std::pair<std::size_t, double> shifted_membership(const SubsetSumLattice& lattice, int i);

// w(x) = |eta_hat(|x|/R)|^2 * |sum_{q in Q} e^{-2 pi i <x,q>}|^2, evaluated
// pointwise; never materialized on a grid.
struct ExpSumWeight {
  SubsetSumLattice lattice;
  double R = 1.0;
  Mollifier mollifier;

  double support_radius() const { return mollifier.shape * R; }
  double eval(const Vec& x) const;
};

struct Cap {
  Vec center;                     // xi_i
  std::vector<Vec> nodes_rel;     // quadrature nodes relative to the center
  std::vector<double> weights;    // sum to 1
  double mass = 0.0;              // raw surface measure of the patch
};

struct CapSystem {
  std::vector<Cap> caps;
  double radius = 0.0;  // 1/R

  double f_l1() const { return static_cast<double>(caps.size()); }
  // f = sum_i S_i with disjoint caps: ||f||_2^2 = sum_i 1/mass_i.
  double f_l2_sq() const;
};

// Quadrature rules on the surface patches {|sigma - xi_i| <= 1/R},
// normalized to unit mass. quad_order is the number of radial nodes.
// Throws when a cap exits the surface chart or caps overlap.
CapSystem build_caps(const PointFamily& family, int quad_order = 12);

}  // namespace xmt::construction

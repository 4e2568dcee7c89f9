#pragma once

// Independent oracles used by the test suites. These deliberately use the
// plainest possible algorithms (recursive enumeration, double loops, serial
// left-to-right accumulation) so they share no code path with the library
// implementations they check.

#include <cstdint>
#include <vector>

#include "xmt/common.hpp"
#include "xmt/construction.hpp"
#include "xmt/transforms.hpp"

namespace xmt::testref {

// All weight-k subsets of [0,N) as bit vectors, by recursion.
std::vector<std::uint64_t> combinations_recursive(int N, int k);

// Max balls per line over all lines through pairs of centers (d = 2).
int max_line_count_bruteforce(const std::vector<Vec>& centers, double radius);

// Sum of squared multiplicities of the multiset {g_i + q}, merging points
// closer than merge_tol with a quadratic scan.
double multiset_energy_bruteforce(const std::vector<Vec>& generators,
                                  const std::vector<std::uint64_t>& bits, double merge_tol);

// Serial trapezoid of the weight along the line (left-to-right accumulation).
double line_integral_reference(const construction::ExpSumWeight& w,
                               const transforms::Line& line, double step);

}  // namespace xmt::testref

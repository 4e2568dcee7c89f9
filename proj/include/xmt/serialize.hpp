#pragma once

#include <string>

#include "xmt/construction.hpp"
#include "xmt/geometry.hpp"

namespace xmt::serialize {

// {d, c, b, N, R, xi0, xis, surface, n0, stride}
std::string family_to_json(const geometry::PointFamily& family);
geometry::PointFamily family_from_json(const std::string& text);

// {N, k, generators, bitvectors}
std::string lattice_to_json(const construction::SubsetSumLattice& lattice);
construction::SubsetSumLattice lattice_from_json(const std::string& text);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& contents);

// Fixed shortest-round-trip formatting used by every report writer, so
// reruns produce byte-identical files.
std::string format_double(double v);

}  // namespace xmt::serialize

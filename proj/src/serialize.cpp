#include "xmt/serialize.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace xmt::serialize {

using nlohmann::json;

std::string format_double(double v) {
  char buf[40];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

std::string family_to_json(const geometry::PointFamily& family) {
  json j;
  j["d"] = family.params.d;
  j["c"] = family.params.c;
  j["b"] = family.params.b;
  j["N"] = family.params.N;
  j["R"] = family.R;
  j["xi0"] = family.xi0;
  j["xis"] = family.xis;
  j["surface"] = family.surface.id();
  j["n0"] = family.n0;
  j["stride"] = family.stride;
  return j.dump(2);
}

geometry::PointFamily family_from_json(const std::string& text) {
  const json j = json::parse(text);
  geometry::PointFamily fam;
  fam.params.d = j.at("d").get<int>();
  fam.params.c = j.at("c").get<double>();
  fam.params.b = j.at("b").get<double>();
  fam.params.N = j.at("N").get<int>();
  fam.R = j.at("R").get<double>();
  fam.xi0 = j.at("xi0").get<Vec>();
  fam.xis = j.at("xis").get<std::vector<Vec>>();
  fam.n0 = j.value("n0", 2);
  fam.stride = j.value("stride", 1);
  fam.surface = geometry::Surface::make(j.value("surface", std::string("paraboloid")),
                                        fam.params.d);
  if (static_cast<int>(fam.xis.size()) != fam.params.N) {
    throw std::runtime_error("family_from_json: N does not match the point count");
  }
  return fam;
}

std::string lattice_to_json(const construction::SubsetSumLattice& lattice) {
  json j;
  j["N"] = lattice.N;
  j["k"] = lattice.k;
  j["generators"] = lattice.generators;
  j["bitvectors"] = lattice.bits;
  return j.dump(2);
}

construction::SubsetSumLattice lattice_from_json(const std::string& text) {
  const json j = json::parse(text);
  const auto generators = j.at("generators").get<std::vector<Vec>>();
  const int k = j.at("k").get<int>();
  auto lattice = construction::build_lattice(generators, k);
  const auto bits = j.at("bitvectors").get<std::vector<std::uint64_t>>();
  if (bits != lattice.bits) {
    throw std::runtime_error("lattice_from_json: stored bit vectors disagree with enumeration");
  }
  return lattice;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write_file(const std::string& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << contents;
}

}  // namespace xmt::serialize

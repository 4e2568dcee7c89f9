// Command-line front end: family construction, incidence certification,
// energy and X-ray evaluation, the grid inequality suite, the ratio sweep,
// and the full verification run.

#include <cmath>
#include <cstdio>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "xmt/estimates.hpp"
#include "xmt/experiment.hpp"
#include "xmt/parallel.hpp"
#include "xmt/rng.hpp"
#include "xmt/serialize.hpp"

namespace {

using namespace xmt;
using nlohmann::json;

std::string out_path(const std::string& dir, const std::string& name) {
  if (dir.empty()) return name;
  return dir + "/" + name;
}

int cmd_points(const std::string& surface_id, int d, double R, int N, double c, double b,
               int n0, int stride, std::uint64_t seed, const std::string& out) {
  geometry::Surface surface = geometry::Surface::make(surface_id, d);
  json search_note;
  if (!(c > 0.0)) {
    int target_n = N;
    if (target_n <= 0) {
      // derive a target from R using the default base
      target_n = std::max(1, static_cast<int>(std::floor(std::log(R) / std::log(4.0))) - n0);
    }
    const auto search = experiment::search_params(d, surface_id, target_n, b, n0, stride,
                                                  2000, seed);
    if (!search.found) {
      std::cerr << "no passing lacunarity base found; trace:\n";
      for (const auto& t : search.trace) std::cerr << "  " << t << "\n";
      return 1;
    }
    c = search.c;
    search_note = search.trace;
  }
  if (N > 0) R = std::pow(c, N + n0);
  geometry::CurveParams params{d, c, b, 0};
  const auto family = geometry::lift_points(surface, params, R, n0, stride);

  json j = json::parse(serialize::family_to_json(family));
  if (!search_note.is_null()) j["search_trace"] = search_note;
  serialize::write_file(out, j.dump(2) + "\n");
  std::cout << "wrote " << out << " (N=" << family.params.N << ", c=" << c << ", R=" << family.R
            << ")\n";
  return 0;
}

int cmd_incidence(const std::string& family_path, std::size_t dirs, std::uint64_t seed,
                  const std::string& exhaustive_planes, const std::string& out) {
  const auto family = serialize::family_from_json(serialize::read_file(family_path));
  const auto lattice = construction::build_lattice(family, family.params.N / 2);
  std::size_t exhaustive_limit = 256;
  if (exhaustive_planes == "always") exhaustive_limit = 1u << 20;
  if (exhaustive_planes == "never") exhaustive_limit = 0;

  const double base = std::pow(family.params.c, family.stride);
  auto gate = experiment::run_gate(family, lattice, dirs, std::min<std::size_t>(dirs, 2048),
                                   seed, 200000, base);
  if (exhaustive_limit != 256) {
    gate.planes = incidence::max_plane_incidence(lattice.points(), 1.0 / family.R, 200000,
                                                 seed ^ 0x9e1ull, exhaustive_limit);
  }
  const std::string text = experiment::gate_to_json(family, gate, dirs, seed);
  serialize::write_file(out, text + "\n");
  std::cout << text << "\n";
  return gate.passed ? 0 : 1;
}

int cmd_energy(const std::string& family_path, const std::string& method, int quad_order,
               const std::string& out) {
  const auto family = serialize::family_from_json(serialize::read_file(family_path));
  const auto lattice = construction::build_lattice(family, family.params.N / 2);
  const construction::Mollifier moll{2.0};
  json j;
  j["N"] = family.params.N;
  j["R"] = family.R;
  j["lattice_size"] = lattice.size();
  if (method == "delta" || method == "both") {
    const auto delta = transforms::energy_delta(family, lattice);
    j["delta"] = {{"value", delta.result.value},
                  {"distinct_sites", delta.distinct_sites},
                  {"boundary_flags", delta.boundary_flags}};
  }
  if (method == "quadrature" || method == "both") {
    const construction::MollifierTables tables(moll, family.params.d);
    const auto caps = construction::build_caps(family, quad_order);
    const auto quad = transforms::energy_quadrature(family, lattice, tables, caps);
    j["quadrature"] = {{"value", quad.value}, {"error_bound", quad.error_bound}};
    j["f_l2_sq"] = caps.f_l2_sq();
    j["f_l1"] = caps.f_l1();
  }
  serialize::write_file(out, j.dump(2) + "\n");
  std::cout << j.dump(2) << "\n";
  return 0;
}

int cmd_xray(const std::string& family_path, std::size_t nu_samples, std::uint64_t seed,
             std::int64_t budget, const std::string& out) {
  const auto family = serialize::family_from_json(serialize::read_file(family_path));
  const auto lattice = construction::build_lattice(family, family.params.N / 2);
  const construction::Mollifier moll{2.0};
  construction::ExpSumWeight w{lattice, family.R, moll};

  std::ostringstream csv;
  csv << "nu_index,nu_coords,lambda_or_offset,value\n";
  const auto dirs = incidence::direction_family(family, nu_samples, seed);
  std::vector<double> values(dirs.size());
  std::vector<double> offsets(dirs.size());
  par::parallel_for_dynamic(dirs.size(), [&](std::size_t i) {
    // best slab offset for the direction, then the line integral there
    double lambda = 0.0;
    incidence::slab_sup(lattice, dirs[i], family.R, &lambda);
    // a line in direction nu positioned at the densest cluster: use the
    // lattice point whose projection is nearest to the cluster center
    std::size_t best = 0;
    double bestgap = std::numeric_limits<double>::infinity();
    for (std::size_t qi = 0; qi < lattice.size(); ++qi) {
      const double gap = std::abs(lattice.proj(qi, dirs[i]) - lambda);
      if (gap < bestgap) {
        bestgap = gap;
        best = qi;
      }
    }
    const auto line = transforms::make_line(dirs[i], lattice.point(best));
    values[i] = transforms::line_integral_pairs(w, line);
    offsets[i] = norm(line.z);
  });
  for (std::size_t i = 0; i < dirs.size(); ++i) {
    csv << i << ',';
    for (std::size_t c = 0; c < dirs[i].size(); ++c) {
      csv << (c ? ";" : "") << serialize::format_double(dirs[i][c]);
    }
    csv << ',' << serialize::format_double(offsets[i]) << ','
        << serialize::format_double(values[i]) << '\n';
  }
  const auto sup = transforms::sup_line_lower_bound(w, budget, seed);
  csv << "sup,";
  for (std::size_t c = 0; c < sup.witness.nu.size(); ++c) {
    csv << (c ? ";" : "") << serialize::format_double(sup.witness.nu[c]);
  }
  csv << ',' << serialize::format_double(norm(sup.witness.z)) << ','
      << serialize::format_double(sup.value) << '\n';
  serialize::write_file(out, csv.str());
  std::cout << "wrote " << out << " (sup-line lower bound " << sup.value << ")\n";
  return 0;
}

int cmd_xray_bound_check(int d, int M, std::size_t draws, std::uint64_t seed,
                         const std::string& p_arg, const std::string& out) {
  std::vector<double> ps;
  const double inf = std::numeric_limits<double>::infinity();
  if (p_arg == "all") {
    ps = {1.0, 2.0, inf};
  } else if (p_arg == "inf") {
    ps = {inf};
  } else {
    ps = {std::stod(p_arg)};
  }
  const auto suite = estimates::hy_random_suite(d, M, draws, seed, ps, true);
  std::ostringstream csv;
  csv << "draw,p,lhs,rhs,margin\n";
  for (const auto& row : suite.rows) {
    csv << row.draw << ',' << (row.p == inf ? std::string("inf") : serialize::format_double(row.p))
        << ',' << serialize::format_double(row.lhs) << ',' << serialize::format_double(row.rhs)
        << ',' << serialize::format_double(row.margin) << '\n';
  }
  serialize::write_file(out, csv.str());
  std::cout << "draws=" << suite.draws << " failures=" << suite.failures
            << " min_rel_margin=" << suite.min_rel_margin
            << " sharpness_min_ratio=" << suite.sharp_min_ratio << "\n";
  return suite.failures == 0 ? 0 : 1;
}

int cmd_ratio_sweep(const experiment::Config& cfg) {
  const auto report = experiment::ratio_sweep(cfg);
  serialize::write_file(out_path(cfg.out_dir, "ratio_sweep.csv"), report.csv());
  serialize::write_file(out_path(cfg.out_dir, "ratio_summary.json"),
                        report.summary_json() + "\n");
  std::cout << report.csv();
  std::cout << "fit: slope=" << report.fit.slope << " r2=" << report.fit.r2 << "\n";
  const bool growing = report.fit.slope > 0.0;
  std::cout << (growing ? "growth detected" : "no growth") << "\n";
  return growing ? 0 : 1;
}

int cmd_verify_all(bool quick, std::uint64_t seed) {
  const auto results = experiment::verify_all(quick, seed);
  bool all = true;
  for (const auto& r : results) {
    std::printf("[%s] %2d. %s (%.1fs)\n    %s\n", r.passed ? "PASS" : "FAIL", r.id,
                r.name.c_str(), r.seconds, r.detail.c_str());
    all = all && r.passed;
  }
  std::printf("%s\n", all ? "ALL CRITERIA PASSED" : "CRITERIA FAILED");
  return all ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"exponential-sum weight construction and X-ray estimate checks"};
  app.require_subcommand(1);

  int threads = 0;
  app.add_option("--threads", threads, "worker threads (0 = library default)");

  // points
  auto* points = app.add_subcommand("points", "construct a point family");
  std::string surface = "paraboloid";
  int d = 2;
  double R = 4096.0;
  int N = 0;
  double c = 0.0, b = 2.0;
  int n0 = 2, stride = 1;
  std::uint64_t seed = 7;
  std::string out = "family.json";
  points->add_option("--surface", surface, "paraboloid | sphere | quadratic");
  points->add_option("--d", d, "ambient dimension");
  points->add_option("--R", R, "frequency scale");
  points->add_option("--N", N, "point count (overrides --R via R = c^(N+n0))");
  points->add_option("--c", c, "lacunarity base (0 = automated search)");
  points->add_option("--b", b, "box inflation factor");
  points->add_option("--n0", n0, "discarded index prefix");
  points->add_option("--stride", stride, "index stride");
  points->add_option("--seed", seed, "search seed");
  points->add_option("--out", out, "output path");

  // incidence-check
  auto* inc = app.add_subcommand("incidence-check", "certify the incidence conclusions");
  std::string family_path = "family.json";
  std::size_t dirs = 10000;
  std::string exhaustive_planes = "auto";
  std::string inc_out = "incidence.json";
  inc->add_option("--family", family_path, "family JSON path");
  inc->add_option("--dirs", dirs, "direction sample count");
  inc->add_option("--seed", seed, "direction seed");
  inc->add_option("--exhaustive-planes", exhaustive_planes, "auto | always | never");
  inc->add_option("--out", inc_out, "report path");

  // energy
  auto* energy = app.add_subcommand("energy", "energy of the cap system under the weight");
  std::string energy_method = "both";
  int quad_order = 12;
  std::string energy_out = "energy.json";
  energy->add_option("--family", family_path, "family JSON path");
  energy->add_option("--method", energy_method, "delta | quadrature | both");
  energy->add_option("--quad-order", quad_order, "cap quadrature order");
  energy->add_option("--out", energy_out, "report path");

  // xray
  auto* xray = app.add_subcommand("xray", "line integrals over sampled directions");
  std::size_t nu_samples = 4096;
  std::int64_t line_budget = 384;
  std::string xray_out = "xray.csv";
  xray->add_option("--family", family_path, "family JSON path");
  xray->add_option("--nu-samples", nu_samples, "direction count");
  xray->add_option("--seed", seed, "seed");
  xray->add_option("--line-budget", line_budget, "sup search budget");
  xray->add_option("--out", xray_out, "CSV path");

  // xray-bound-check
  auto* hy = app.add_subcommand("xray-bound-check", "grid inequality random suite");
  int M = 64;
  std::size_t draws = 1000;
  std::string p_arg = "all";
  std::string hy_out = "hy.csv";
  hy->add_option("--d", d, "grid dimension");
  hy->add_option("--M", M, "grid side");
  hy->add_option("--draws", draws, "random draws");
  hy->add_option("--seed", seed, "root seed");
  hy->add_option("--p", p_arg, "1 | 2 | inf | all");
  hy->add_option("--out", hy_out, "CSV path");

  // ratio-sweep
  auto* sweep = app.add_subcommand("ratio-sweep", "full pipeline across scales");
  std::string config_path;
  std::string out_dir;
  std::vector<int> schedule;
  sweep->add_option("--config", config_path, "JSON config (flags override)");
  sweep->add_option("--schedule", schedule, "N values");
  sweep->add_option("--d", d, "dimension");
  sweep->add_option("--surface", surface, "surface id");
  sweep->add_option("--c", c, "lacunarity base (0 = search)");
  sweep->add_option("--seed", seed, "root seed");
  sweep->add_option("--out-dir", out_dir, "output directory");

  // verify-all
  auto* verify = app.add_subcommand("verify-all", "run every acceptance criterion");
  bool quick = false;
  verify->add_flag("--quick", quick, "reduced draw counts (smoke run)");
  verify->add_option("--seed", seed, "root seed");

  CLI11_PARSE(app, argc, argv);
  if (threads > 0) xmt::par::set_threads(threads);

  try {
    if (points->parsed()) return cmd_points(surface, d, R, N, c, b, n0, stride, seed, out);
    if (inc->parsed()) return cmd_incidence(family_path, dirs, seed, exhaustive_planes, inc_out);
    if (energy->parsed()) return cmd_energy(family_path, energy_method, quad_order, energy_out);
    if (xray->parsed()) return cmd_xray(family_path, nu_samples, seed, line_budget, xray_out);
    if (hy->parsed()) return cmd_xray_bound_check(d, M, draws, seed, p_arg, hy_out);
    if (sweep->parsed()) {
      experiment::Config cfg;
      if (!config_path.empty()) cfg = experiment::Config::from_json(serialize::read_file(config_path));
      if (!schedule.empty()) cfg.schedule = schedule;
      if (sweep->count("--d")) cfg.d = d;
      if (sweep->count("--surface")) cfg.surface = surface;
      if (sweep->count("--c")) cfg.c = c;
      if (sweep->count("--seed")) cfg.seed = seed;
      if (!out_dir.empty()) cfg.out_dir = out_dir;
      if (threads > 0) cfg.threads = threads;
      return cmd_ratio_sweep(cfg);
    }
    if (verify->parsed()) return cmd_verify_all(quick, seed);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}

#pragma once

// Orchestration: the incidence gate, the automated (c,b) search, the ratio
// sweep across scales with its growth fit, and the acceptance checks.

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "xmt/construction.hpp"
#include "xmt/geometry.hpp"
#include "xmt/incidence.hpp"
#include "xmt/transforms.hpp"

namespace xmt::experiment {

using construction::SubsetSumLattice;
using geometry::PointFamily;

struct Config {
  int d = 2;
  std::string surface = "paraboloid";
  double c = 0.0;  // 0 = automated search
  double b = 2.0;
  int stride = 1;
  int n0 = 2;
  std::vector<int> schedule{4, 6, 8, 10, 12};  // N values; R = c^(N+n0)
  std::size_t incidence_dirs = 10000;
  std::size_t distinct_dirs = 2048;
  std::size_t mixed_dirs = 96;
  std::int64_t line_budget = 384;
  std::int64_t plane_budget = 200000;
  std::uint64_t seed = 7;
  std::string energy_method = "both";  // delta | quadrature | both
  int quad_energy_max_n = 8;
  int cap_quad_order = 12;
  double mollifier_shape = 2.0;
  int threads = 0;  // 0 = leave as configured
  std::string out_dir;

  double dyadic_base() const;
  static Config from_json(const std::string& text);
  std::string to_json() const;
};

struct GateReport {
  bool passed = false;
  bool separation_ok = false;
  incidence::SweepResult sweep;
  bool sweep_ok = false;
  incidence::PlaneSearchResult planes;
  bool planes_ok = false;
  incidence::DistinctnessResult distinctness;
  bool distinctness_ok = false;
  int slab_max = 0;
  bool slab_ok = false;
  std::string failure;
  double seconds = 0.0;
};

GateReport run_gate(const PointFamily& family, const SubsetSumLattice& lattice,
                    std::size_t dirs, std::size_t distinct_dirs, std::uint64_t seed,
                    std::int64_t plane_budget, double base);

std::string gate_to_json(const PointFamily& family, const GateReport& gate,
                         std::size_t dirs, std::uint64_t seed);

struct ParamSearch {
  double c = 0.0;
  double b = 2.0;
  bool found = false;
  std::vector<std::string> trace;
};

// Smallest c from {2,4,8,16} with c > b whose incidence gate passes at the
// target N.
ParamSearch search_params(int d, const std::string& surface, int N, double b, int n0,
                          int stride, std::size_t dirs, std::uint64_t seed);

struct RatioRow {
  int N = 0;
  double R = 0.0;
  std::size_t lattice_size = 0;
  double energy_delta = 0.0;     // sum of squared multiplicities
  double energy_physical = 0.0;  // calibration * R^d * energy_delta
  double energy_quad = 0.0;      // 0 when skipped
  double energy_quad_err = 0.0;
  double f_l2_sq = 0.0;
  double sup_line_lower = 0.0;
  double sup_line_tail = 0.0;
  double mixed_norm_upper = 0.0;
  double ratio_conservative = 0.0;
  double ratio_observed = 0.0;
  int max_bad_set = 0;
  int max_plane_count = 0;
  bool plane_exhaustive = false;
  std::size_t tie_count = 0;
  int slab_sup = 0;
  double seconds = 0.0;
};

struct FitResult {
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
};

struct RatioReport {
  Config config;
  double c_used = 0.0;
  double calibration = 0.0;
  std::uint64_t table_checksum = 0;
  std::vector<RatioRow> rows;
  FitResult fit;

  std::string csv() const;
  std::string summary_json() const;
};

// One row per scheduled N; aborts with a diagnostic when any incidence gate
// fails. Deterministic for fixed config and seeds, for any thread count.
RatioReport ratio_sweep(const Config& config);

FitResult log_fit(const std::vector<std::pair<double, double>>& xy);

struct CriterionResult {
  int id = 0;
  std::string name;
  bool passed = false;
  std::string detail;
  double seconds = 0.0;
};

// The acceptance criteria; `quick` shrinks draw counts and the schedule for
// smoke runs (the shipped acceptance binary runs the full set).
std::vector<CriterionResult> verify_all(bool quick = false, std::uint64_t seed = 7);

}  // namespace xmt::experiment

// Timing comparison between the serial reference loops and the OpenMP
// kernels: direction sweeps, line integrals, mixed-norm accumulation, and
// the grid inequality suite.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <string>

#include "xmt/estimates.hpp"
#include "xmt/experiment.hpp"
#include "xmt/parallel.hpp"

namespace {

using namespace xmt;

double time_of(const std::function<void()>& f) {
  const auto t0 = std::chrono::steady_clock::now();
  f();
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

void report(const char* name, double serial, double parallel) {
  std::printf("%-34s serial %8.3fs   omp %8.3fs   speedup %.2fx\n", name, serial, parallel,
              parallel > 0.0 ? serial / parallel : 0.0);
}

}  // namespace

int main() {
  const int max_threads = par::thread_count();
  std::printf("threads available: %d\n", max_threads);

  const auto surface = geometry::Surface::make("paraboloid", 2);
  geometry::CurveParams params{2, 4.0, 2.0, 0};
  const double R = std::pow(4.0, 12);
  const auto family = geometry::lift_points(surface, params, R, 2);
  const auto lattice = construction::build_lattice(family, family.params.N / 2);
  const construction::Mollifier moll{2.0};
  construction::ExpSumWeight weight{lattice, R, moll};

  // direction sweep
  const auto dirs = incidence::direction_family(family, 20000, 11);
  double s, p;
  par::set_threads(1);
  s = time_of([&] { incidence::bad_set_sweep(family, dirs, 4.0); });
  par::set_threads(max_threads);
  p = time_of([&] { incidence::bad_set_sweep(family, dirs, 4.0); });
  report("bad-set sweep (20k directions)", s, p);

  // trapezoid line integral (serial reference accumulation vs block sums)
  const auto line = transforms::make_line(Vec{1.0, 0.0}, lattice.point(0));
  const double step = transforms::default_line_step(weight);
  par::set_threads(1);
  s = time_of([&] { transforms::line_integral(weight, line, step); });
  par::set_threads(max_threads);
  p = time_of([&] { transforms::line_integral(weight, line, step); });
  report("line integral (trapezoid)", s, p);

  // pair-decomposition route for comparison at the same scale
  const double pair_time = time_of([&] { transforms::line_integral_pairs(weight, line); });
  std::printf("%-34s %8.3fs (same line, R-independent route)\n",
              "line integral (pair route)", pair_time);

  // mixed norm over directions
  const construction::MollifierTables tables(moll, 2);
  const auto profile = tables.slice_profile(1.0);
  const auto autocorr = transforms::slice_autocorrelation(profile);
  const auto mixed_dirs = incidence::direction_family(family, 64, 13);
  const auto run_mixed = [&] {
    double mx = 0.0;
    for (const auto& nu : mixed_dirs) {
      mx = std::max(mx, transforms::mixed_norm_bound_fast(lattice, nu, R, 1.0, profile, autocorr));
    }
    return mx;
  };
  par::set_threads(1);
  s = time_of([&] { run_mixed(); });
  par::set_threads(max_threads);
  p = time_of([&] { run_mixed(); });
  report("mixed norm (64 directions)", s, p);

  // grid inequality draws
  par::set_threads(1);
  s = time_of([&] {
    estimates::hy_random_suite(3, 32, 64, 17, {1.0, 2.0, std::numeric_limits<double>::infinity()});
  });
  par::set_threads(max_threads);
  p = time_of([&] {
    estimates::hy_random_suite(3, 32, 64, 17, {1.0, 2.0, std::numeric_limits<double>::infinity()});
  });
  report("grid inequality (64 draws, 32^3)", s, p);

  return 0;
}

#pragma once

// Exact verification of the X-ray mixed-norm inequality on periodic grids.
// With h on the primal grid (spacing delta) and w = |h_hat|^2 on the dual
// grid (spacing 1/(M delta)), the discrete projection-slice identity
//   X_axis w = sum_lambda delta |FT_{d-1}(slice_lambda h)|^2
// holds exactly, so the Minkowski and Hausdorff-Young steps can be checked
// with constant one and tolerance at rounding level.

#include <complex>
#include <cstdint>
#include <string>
#include <tuple>
#include <vector>

namespace xmt::estimates {

struct GridFunction {
  int d = 1;
  int M = 1;
  double delta = 1.0;
  std::vector<std::complex<double>> v;  // M^d values, row-major

  static GridFunction zeros(int d, int M, double delta = 1.0);
  std::size_t size() const { return v.size(); }

  // p-norm with quadrature weight delta^d (p may be infinity).
  double norm_p(double p) const;
};

// DFT along every axis; sign=-1 forward. Forward multiplies by delta^d and
// sets the dual spacing 1/(M delta); inverse undoes both.
GridFunction dft(const GridFunction& g, int sign);

// (d-1)-dimensional slice with axis pinned at `index`; keeps spacing.
GridFunction grid_slice(const GridFunction& g, int axis, int index);

// delta-weighted column sums along the axis.
GridFunction grid_xray(const GridFunction& w, int axis);

// |h_hat|^2 on the dual grid.
GridFunction weight_of(const GridFunction& h);

// ||h||_2 (primal) vs ||h_hat||_2 (dual) relative gap.
double parseval_gap(const GridFunction& h);

// ||F_hat||_{q'} <= ||F||_q with q' = q/(q-1); returns rhs - lhs.
double hausdorff_young_margin(const GridFunction& f, double q);

struct HyChain {
  double lhs = 0.0;       // ||X_axis w||_p
  double mink_rhs = 0.0;  // sum_lambda delta ||FT slice||_{2p}^2
  double hy_rhs = 0.0;    // sum_lambda delta ||slice||_q^2
};

HyChain hy_chain(const GridFunction& h, int axis, double p);

// (lhs, rhs, pass) with pass iff lhs <= rhs (1 + 1e-9).
std::tuple<double, double, bool> hy_xray_check(const GridFunction& h, int axis, double p);

// Margin of the Minkowski step alone: mink_rhs - lhs.
double minkowski_step_check(const GridFunction& h, int axis, double p);

struct HyDrawRow {
  int draw = 0;
  double p = 0.0;
  double lhs = 0.0, rhs = 0.0, margin = 0.0;
};

struct HySuiteResult {
  std::size_t draws = 0;
  std::size_t failures = 0;      // lhs > rhs (1 + 1e-9)
  double min_rel_margin = 0.0;   // min (rhs-lhs)/rhs
  double sharp_min_ratio = 1.0;  // min lhs/rhs over nonnegative draws at p=inf
  std::vector<HyDrawRow> rows;   // filled when collect_rows
};

// Random complex draws (plus nonnegative draws for the sharpness witness),
// one seeded stream per draw; deterministic for any thread count.
HySuiteResult hy_random_suite(int d, int M, std::size_t draws, std::uint64_t seed,
                              const std::vector<double>& ps, bool collect_rows = false,
                              std::size_t sharp_draws = 64);

}  // namespace xmt::estimates

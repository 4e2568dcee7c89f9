#include <doctest.h>

#include <cmath>

#include "xmt/geometry.hpp"
#include "xmt/incidence.hpp"
#include "xmt/rng.hpp"

using namespace xmt;
using namespace xmt::geometry;

TEST_CASE("moment curve substitution") {
  CHECK(moment_curve(2.0, 3) == Vec{2.0, 4.0, 8.0});
  CHECK(moment_curve(0.0, 4) == Vec(4, 0.0));
  CHECK(moment_curve(0.5, 2) == Vec{0.5, 0.25});
}

TEST_CASE("axis scaling matches curve rescaling") {
  CHECK(axis_scale(moment_curve(1.0, 3), 2.0) == Vec{0.5, 0.25, 0.125});
  CHECK(axis_scale(Vec(3, 0.0), 5.0) == Vec(3, 0.0));
  Rng rng(3);
  for (int t = 0; t < 200; ++t) {
    const double tt = rng.uniform(-2.0, 2.0);
    const double c = rng.uniform(1.1, 8.0);
    const int d = 2 + static_cast<int>(rng.uniform() * 3.0);
    const Vec lhs = axis_scale(moment_curve(tt, d), c);
    const Vec rhs = moment_curve(tt / c, d);
    for (int i = 0; i < d; ++i) {
      CHECK(lhs[i] == doctest::Approx(rhs[i]).epsilon(1e-12));
    }
  }
}

TEST_CASE("phi projects the moment curve down one dimension") {
  CHECK(phi_project(Vec{1.0, 2.0, 3.0}) == Vec{2.0, 3.0});
  CHECK_THROWS_AS(phi_project(Vec{0.0, 1.0}), std::domain_error);
  Rng rng(5);
  for (int t = 0; t < 200; ++t) {
    const double tt = rng.uniform(0.05, 2.0);
    const int d = 3 + static_cast<int>(rng.uniform() * 2.0);
    const Vec lhs = phi_project(moment_curve(tt, d));
    const Vec rhs = moment_curve(tt, d - 1);
    for (int i = 0; i + 1 < d; ++i) CHECK(lhs[i] == doctest::Approx(rhs[i]).epsilon(1e-12));
  }
}

TEST_CASE("phi and the axis scaling commute") {
  Rng rng(7);
  for (int t = 0; t < 500; ++t) {
    const int d = 2 + static_cast<int>(rng.uniform() * 3.0);
    Vec p(d);
    for (auto& x : p) x = rng.uniform(-2.0, 2.0);
    if (std::abs(p[0]) < 1e-3) p[0] = 1.0;
    const double c = rng.uniform(1.1, 9.0);
    const Vec lhs = phi_project(axis_scale(p, c));
    const Vec rhs = axis_scale(phi_project(p), c);
    for (std::size_t i = 0; i < lhs.size(); ++i) {
      CHECK(lhs[i] == doctest::Approx(rhs[i]).epsilon(1e-12));
    }
  }
}

TEST_CASE("box_u direct values and the scaling relation") {
  CurveParams params{2, 4.0, 2.0, 0};
  const AxisBox box = box_u(1, params);
  CHECK(box.center == Vec{0.25, 0.0625});
  CHECK(box.halfwidths == Vec{0.125, 0.015625});

  // L_c maps box n onto box n+1 exactly
  CurveParams p3{3, 8.0, 2.0, 0};
  for (int n = 0; n < 7; ++n) {
    const AxisBox scaled_box = axis_scale(box_u(n, p3), p3.c);
    const AxisBox next = box_u(n + 1, p3);
    for (int i = 0; i < 3; ++i) {
      CHECK(scaled_box.center[i] == doctest::Approx(next.center[i]).epsilon(1e-13));
      CHECK(scaled_box.halfwidths[i] == doctest::Approx(next.halfwidths[i]).epsilon(1e-13));
    }
  }
}

TEST_CASE("origin-centered box swallows deeper curve points (membership sweep)") {
  // brute-force sweep: x_{c,k} lies in Q(M_d(b c^{-(n+1)})) exactly when k > n
  CurveParams params{3, 8.0, 2.0, 0};
  for (int n = 0; n <= 6; ++n) {
    const AxisBox q = box_q(moment_curve(params.b * std::pow(params.c, -(n + 1)), params.d));
    for (int k = 0; k <= 12; ++k) {
      const bool inside = q.contains(moment_curve(std::pow(params.c, -k), params.d));
      CHECK(inside == (k > n));
    }
  }
}

TEST_CASE("anchor offsets use the lacunary exponent pattern") {
  CurveParams d2{2, 4.0, 2.0, 0};
  CHECK(anchor_offsets(2, d2) == Vec{0.0625});
  CurveParams d3{3, 4.0, 2.0, 0};
  CHECK(anchor_offsets(1, d3) == Vec{0.25, 0.015625});
  CurveParams d4{4, 2.0, 1.5, 0};
  CHECK(anchor_offsets(1, d4) == Vec{0.5, 0.125, 0.0625});
}

TEST_CASE("lift produces graph points inside the inflated boxes") {
  const auto surface = Surface::make("paraboloid", 2);
  CurveParams params{2, 4.0, 2.0, 0};
  const double R = std::pow(4.0, 6);
  const auto fam = lift_points(surface, params, R, 0);
  CHECK(fam.params.N == 6);
  CHECK(fam.xi0 == Vec(2, 0.0));
  for (int j = 0; j < fam.params.N; ++j) {
    const int n = j + 1;
    CHECK(fam.xis[j][0] == doctest::Approx(std::pow(4.0, -n)));
    CHECK(fam.xis[j][1] == doctest::Approx(std::pow(4.0, -2 * n)));
  }

  // Lemma 4.3 with margin: xi_n - xi_0 sits in box_u(n) inflated to 2b
  for (const auto& surf_id : {"paraboloid", "sphere", "quadratic"}) {
    for (const int d : {2, 3, 4}) {
      const auto surf = Surface::make(surf_id, d);
      CurveParams p{d, 4.0, 2.0, 0};
      const auto f = lift_points(surf, p, std::pow(4.0, 8), 2);
      CurveParams inflated{d, 4.0, 4.0, 0};
      for (int j = 0; j < f.params.N; ++j) {
        const int n = f.n0 + (j + 1) * f.stride;
        CHECK(box_u(n, inflated).contains(sub(f.xis[j], f.xi0)));
      }
    }
  }
}

TEST_CASE("lift separation exceeds 1/R") {
  const auto surface = Surface::make("paraboloid", 2);
  CurveParams params{2, 4.0, 2.0, 0};
  const double R = std::pow(4.0, 8);
  const auto fam = lift_points(surface, params, R, 2);
  double min_dist = 1e300;
  for (std::size_t m = 0; m < fam.xis.size(); ++m) {
    for (std::size_t n = m + 1; n < fam.xis.size(); ++n) {
      min_dist = std::min(min_dist, dist(fam.xis[m], fam.xis[n]));
    }
  }
  CHECK(min_dist > 1.0 / R);
  CHECK(incidence::separation_check(fam));
}

TEST_CASE("lift rejects unusable scales and chart exits") {
  const auto surface = Surface::make("paraboloid", 2);
  CurveParams params{2, 4.0, 2.0, 0};
  CHECK_THROWS(lift_points(surface, params, 2.0, 2));   // no usable index
  const auto sphere = Surface::make("sphere", 2);
  CurveParams tight{2, 2.0, 1.5, 0};  // first offset 1/2 exceeds the chart radius 0.4
  CHECK_THROWS_AS(lift_points(sphere, tight, std::pow(2.0, 8), 0), std::domain_error);
}

TEST_CASE("surface quadratic forms are normalized and C2-consistent") {
  for (const auto& id : {"paraboloid", "sphere", "quadratic"}) {
    for (const int d : {2, 3, 4}) {
      const auto surf = Surface::make(id, d);
      Vec e1(d - 1, 0.0);
      e1[0] = 1.0;
      CHECK(surf.quad_form(e1) == doctest::Approx(1.0));
      CHECK(surf.value(Vec(d - 1, 0.0)) == 0.0);
      // Phi(omega) - C(omega,omega) = o(|omega|^2) at shrinking omega
      Rng rng(11);
      Vec dir(d - 1);
      for (auto& x : dir) x = rng.uniform(-1.0, 1.0);
      const double nrm = norm(dir);
      for (auto& x : dir) x /= nrm;
      double prev_ratio = 1e300;
      for (const double eps : {1e-2, 1e-3, 1e-4}) {
        const Vec omega = scaled(dir, eps);
        const double gap = std::abs(surf.value(omega) - surf.quad_form(omega));
        const double ratio = gap / (eps * eps);
        CHECK(ratio <= prev_ratio + 1e-12);
        prev_ratio = ratio;
      }
      CHECK(prev_ratio < 1e-2);
    }
  }
}

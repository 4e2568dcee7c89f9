#include "xmt/mollifier.hpp"

#include <cmath>
#include <complex>
#include <stdexcept>

#include "xmt/fft.hpp"
#include "xmt/quadrature.hpp"

namespace xmt::construction {

namespace {

constexpr double kPi = 3.14159265358979323846264338327950288;

double bump_half(double s) { return s > 0.0 ? std::exp(-1.0 / s) : 0.0; }

// Smooth monotone transition: 1 at s = 0, 0 at s = 1.
double smooth_step_down(double s) {
  const double a = bump_half(1.0 - s);
  const double b = bump_half(s);
  return a / (a + b);
}

// Surface area of the unit sphere S^{m-1} in R^m.
double sphere_area(int m) {
  return 2.0 * std::pow(kPi, 0.5 * m) / std::tgamma(0.5 * m);
}

}  // namespace

double Mollifier::fourier(double r) const {
  r = std::abs(r);
  const double inner = 1.0 / shape;
  if (r <= inner) return 1.0;
  if (r >= shape) return 0.0;
  return smooth_step_down((r - inner) / (shape - inner));
}

double UniformTable::at(double x) const {
  const double t = (x - x0) / dx;
  if (t <= 0.0) return y.front();
  const double last = static_cast<double>(y.size() - 1);
  if (t >= last) return 0.0;
  const std::size_t i = static_cast<std::size_t>(t);
  const double f = t - static_cast<double>(i);
  const double y0 = i > 0 ? y[i - 1] : y[0];
  const double y1 = y[i];
  const double y2 = y[i + 1];
  const double y3 = i + 2 < y.size() ? y[i + 2] : y[i + 1];
  // Catmull-Rom
  const double a0 = -0.5 * y0 + 1.5 * y1 - 1.5 * y2 + 0.5 * y3;
  const double a1 = y0 - 2.5 * y1 + 2.0 * y2 - 0.5 * y3;
  const double a2 = -0.5 * y0 + 0.5 * y2;
  return ((a0 * f + a1) * f + a2) * f + y1;
}

double SliceProfile::eval(double sigma) const {
  sigma = std::abs(sigma);
  if (sigma <= sigma_max) return a.at(sigma);
  return env_coeff * std::pow(1.0 + sigma, -env_pow);
}

MollifierTables::MollifierTables(const Mollifier& m, int d) : moll_(m), d_(d) {
  if (d < 2) throw std::invalid_argument("MollifierTables: d must be >= 2");
  const double C = m.shape;

  // Shadow onto a line: g(tau) = int_{R^{d-1}} profile(sqrt(tau^2+|u|^2)) du.
  // The radial profile in R^d is the 1-D transform of the shadow (the
  // projection-slice identity), which the FFT below evaluates on a fine
  // rho-grid in one pass.
  const double area = sphere_area(d - 1);
  const auto shadow = [&](double tau, bool squared) {
    const double t2 = tau * tau;
    if (t2 >= C * C) return 0.0;
    const double smax = std::sqrt(C * C - t2);
    return area * quadrature::integrate(
                      [&](double s) {
                        const double v = moll_.fourier(std::sqrt(t2 + s * s));
                        const double f = squared ? v * v : v;
                        return d_ == 2 ? f : f * std::pow(s, d_ - 2);
                      },
                      0.0, smax, 96, 8);
  };

  const std::size_t M = 2048;       // samples of the shadow over [-C, C)
  const std::size_t Mp = 32768;     // zero-padded transform length
  const double dtau = 2.0 * C / static_cast<double>(M);
  const double rho_max = 96.0;
  const double drho = 1.0 / (static_cast<double>(Mp) * dtau);

  const auto build = [&](bool squared) {
    std::vector<fftutil::cplx> a(Mp, fftutil::cplx(0.0, 0.0));
    for (std::size_t j = 0; j < M; ++j) {
      const double tau = -C + dtau * static_cast<double>(j);
      a[j] = shadow(tau, squared);
    }
    fftutil::fft_pow2(a, -1);
    UniformTable t;
    t.x0 = 0.0;
    t.dx = drho;
    const std::size_t n = static_cast<std::size_t>(rho_max / drho) + 1;
    t.y.resize(n);
    for (std::size_t k = 0; k < n; ++k) {
      const double rho = drho * static_cast<double>(k);
      const fftutil::cplx phase(std::cos(2.0 * kPi * C * rho), std::sin(2.0 * kPi * C * rho));
      t.y[k] = dtau * (phase * a[k]).real();
    }
    return t;
  };

  eta_ = build(false);
  kappa_ = build(true);

  line_l2_ = 2.0 * quadrature::integrate(
                       [&](double r) {
                         const double v = moll_.fourier(r);
                         return v * v;
                       },
                       0.0, C, 96, 8);

  // |kappa(s)| envelope constant for s beyond the calibration window.
  double env = 0.0;
  for (double s = 8.0; s <= kappa_.x_max(); s += 0.25) {
    env = std::max(env, std::abs(kappa_.at(s)) * std::pow(1.0 + s, 6.0));
  }
  kappa_env_coeff_ = env;
}

double MollifierTables::eta(double rho) const { return eta_.at(std::abs(rho)); }

double MollifierTables::kappa(double s) const {
  s = std::abs(s);
  if (s > kappa_.x_max()) return 0.0;
  return kappa_.at(s);
}

double MollifierTables::kappa_env(double s) const {
  s = std::abs(s);
  if (s < 8.0) return kappa_zero();
  return kappa_env_coeff_ * std::pow(1.0 + s, -6.0);
}

SliceProfile MollifierTables::slice_profile(double q) const {
  if (!(q >= 1.0 && q <= 2.0)) throw std::invalid_argument("slice_profile: q must be in [1,2]");
  SliceProfile p;
  p.q = q;
  p.sigma_max = 64.0;
  const double dsigma = 1.0 / 64.0;
  const double area = sphere_area(d_ - 1);
  const double vmax_abs = rho_max();
  const std::size_t n = static_cast<std::size_t>(p.sigma_max / dsigma) + 1;
  p.a.x0 = 0.0;
  p.a.dx = dsigma;
  p.a.y.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double sigma = dsigma * static_cast<double>(i);
    const double s2 = sigma * sigma;
    const double vmax = std::sqrt(std::max(0.0, vmax_abs * vmax_abs - s2));
    // |eta|^q has kinks at the sign changes of eta; keep panels shorter
    // than the oscillation scale.
    const int panels = std::max(64, static_cast<int>(vmax * 10.0));
    const double val = area * quadrature::integrate(
                                 [&](double v) {
                                   const double rho = std::sqrt(s2 + v * v);
                                   const double e = std::abs(eta(rho));
                                   const double f = std::pow(e, q);
                                   return d_ == 2 ? f : f * std::pow(v, d_ - 2);
                                 },
                                 0.0, vmax, panels, 6);
    p.a.y[i] = std::pow(val, 1.0 / q);
  }
  double env = 0.0;
  for (double s = 0.75 * p.sigma_max; s <= p.sigma_max; s += 0.25) {
    env = std::max(env, p.a.at(s) * std::pow(1.0 + s, p.env_pow));
  }
  p.env_coeff = env;
  return p;
}

std::uint64_t MollifierTables::checksum() const {
  std::uint64_t h = fnv1a(eta_.y);
  h = fnv1a(kappa_.y.data(), kappa_.y.size() * sizeof(double), h);
  return fnv1a(&line_l2_, sizeof(double), h);
}

}  // namespace xmt::construction

#pragma once

// The mollifier eta is specified through its Fourier profile: a smooth
// radial cutoff equal to 1 on |x| <= 1/C and 0 on |x| >= C. Everything the
// library needs from the physical side (the radial profile of eta, the
// autocorrelation kernel eta*eta, slice L^q norms) is derived from that
// profile by one-dimensional transforms and stored in uniform tables.

#include <cstdint>
#include <vector>

#include "xmt/common.hpp"

namespace xmt::construction {

struct UniformTable {
  double x0 = 0.0;
  double dx = 1.0;
  std::vector<double> y;

  // Catmull-Rom interpolation; clamps to the boundary values.
  double at(double x) const;
  double x_max() const { return x0 + dx * static_cast<double>(y.size() - 1); }
  std::uint64_t checksum() const { return fnv1a(y); }
};

struct Mollifier {
  double shape = 2.0;  // the constant C in the indicator sandwich

  // eta_hat as a function of radius: 1 for r <= 1/C, 0 for r >= C, smooth
  // monotone taper between.
  double fourier(double r) const;
};

// Slice L^q norm profile of the unit-scale mollifier in ambient dimension d:
//   a_q(sigma) = ( int_{R^{d-1}} |eta(sqrt(sigma^2 + |v|^2))|^q dv )^{1/q}.
// The slice norm of eta_R at physical offset s is then
// R^{d - (d-1)/q} * a_q(R s).
struct SliceProfile {
  double q = 1.0;
  UniformTable a;       // a_q(sigma), sigma in [0, sigma_max]
  double sigma_max = 0.0;
  double env_coeff = 0.0;  // a_q(sigma) <= env_coeff * (1+sigma)^-env_pow beyond the table
  double env_pow = 6.0;

  double eval(double sigma) const;  // table value inside, envelope beyond
};

class MollifierTables {
 public:
  MollifierTables(const Mollifier& m, int d);

  int dim() const { return d_; }
  const Mollifier& mollifier() const { return moll_; }

  // Radial profile of eta (inverse transform of the Fourier profile in R^d).
  double eta(double rho) const;
  // Radial profile of eta*eta (inverse transform of the squared profile).
  double kappa(double s) const;
  double kappa_zero() const { return kappa_.y.front(); }
  // Envelope bound |kappa(s)| <= kappa_env(s) for s beyond ~8.
  double kappa_env(double s) const;

  // int_R eta_hat(|t|)^2 dt; the line integral of the weight of a single
  // unit bump through the origin equals R times this.
  double eta_hat_line_l2() const { return line_l2_; }

  SliceProfile slice_profile(double q) const;

  double rho_max() const { return eta_.x_max(); }
  std::uint64_t checksum() const;

 private:
  Mollifier moll_;
  int d_;
  UniformTable eta_;    // |eta| can oscillate; table stores signed values
  UniformTable kappa_;
  double line_l2_ = 0.0;
  double kappa_env_coeff_ = 0.0;
};

}  // namespace xmt::construction

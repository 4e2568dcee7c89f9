#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace xmt {

using Vec = std::vector<double>;

inline double dot(const Vec& a, const Vec& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

inline double norm2(const Vec& a) { return dot(a, a); }
inline double norm(const Vec& a) { return std::sqrt(norm2(a)); }

inline Vec sub(const Vec& a, const Vec& b) {
  Vec r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
  return r;
}

inline Vec add(const Vec& a, const Vec& b) {
  Vec r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
  return r;
}

inline Vec scaled(const Vec& a, double s) {
  Vec r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] * s;
  return r;
}

inline void axpy(Vec& y, double a, const Vec& x) {
  for (std::size_t i = 0; i < y.size(); ++i) y[i] += a * x[i];
}

inline double dist(const Vec& a, const Vec& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double t = a[i] - b[i];
    s += t * t;
  }
  return std::sqrt(s);
}

inline Vec normalized(const Vec& a) {
  const double n = norm(a);
  if (n == 0.0) throw std::domain_error("normalized: zero vector");
  return scaled(a, 1.0 / n);
}

// Orthonormal basis of the hyperplane perpendicular to unit vector nu,
// built by Gram-Schmidt against the coordinate axes. Deterministic.
std::vector<Vec> perp_basis(const Vec& nu);

// Unit normal of the affine hyperplane through d points in R^d, or an
// empty vector when the points are affinely degenerate. Sign convention:
// first nonzero component positive.
Vec hyperplane_normal(const std::vector<Vec>& pts, double degenerate_tol = 1e-13);

// FNV-1a over raw bytes; used to fingerprint lookup tables in reports.
inline std::uint64_t fnv1a(const void* data, std::size_t n, std::uint64_t h = 1469598103934665603ull) {
  const auto* p = static_cast<const unsigned char*>(data);
  for (std::size_t i = 0; i < n; ++i) {
    h ^= p[i];
    h *= 1099511628211ull;
  }
  return h;
}

inline std::uint64_t fnv1a(const std::vector<double>& v) {
  return fnv1a(v.data(), v.size() * sizeof(double));
}

}  // namespace xmt

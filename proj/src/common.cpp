#include "xmt/common.hpp"

#include <algorithm>
#include <cmath>

namespace xmt {

std::vector<Vec> perp_basis(const Vec& nu) {
  const std::size_t d = nu.size();
  std::vector<Vec> basis;
  basis.reserve(d - 1);
  // Gram-Schmidt of the coordinate axes against nu, skipping the axis most
  // aligned with nu.
  std::size_t skip = 0;
  for (std::size_t i = 1; i < d; ++i) {
    if (std::abs(nu[i]) > std::abs(nu[skip])) skip = i;
  }
  for (std::size_t axis = 0; axis < d; ++axis) {
    if (axis == skip) continue;
    Vec v(d, 0.0);
    v[axis] = 1.0;
    axpy(v, -dot(v, nu), nu);
    for (const auto& e : basis) axpy(v, -dot(v, e), e);
    const double n = norm(v);
    if (n < 1e-12) continue;
    basis.push_back(scaled(v, 1.0 / n));
  }
  return basis;
}

Vec hyperplane_normal(const std::vector<Vec>& pts, double degenerate_tol) {
  const std::size_t d = pts.front().size();
  if (pts.size() != d) throw std::invalid_argument("hyperplane_normal: need d points");
  // Nullspace of the (d-1) x d matrix of differences, by Gaussian
  // elimination with partial pivoting.
  std::vector<Vec> m;
  m.reserve(d - 1);
  for (std::size_t i = 1; i < d; ++i) m.push_back(sub(pts[i], pts[0]));

  std::vector<std::size_t> pivot_cols;
  std::size_t row = 0;
  std::vector<bool> used(d, false);
  for (std::size_t col = 0; col < d && row < d - 1; ++col) {
    std::size_t best = row;
    for (std::size_t r = row + 1; r < d - 1; ++r) {
      if (std::abs(m[r][col]) > std::abs(m[best][col])) best = r;
    }
    if (std::abs(m[best][col]) <= degenerate_tol) continue;
    std::swap(m[best], m[row]);
    for (std::size_t r = 0; r < d - 1; ++r) {
      if (r == row) continue;
      const double f = m[r][col] / m[row][col];
      for (std::size_t cc = 0; cc < d; ++cc) m[r][cc] -= f * m[row][cc];
    }
    pivot_cols.push_back(col);
    used[col] = true;
    ++row;
  }
  if (row < d - 1) return {};  // degenerate tuple

  // Free column -> normal direction.
  std::size_t free_col = 0;
  while (used[free_col]) ++free_col;
  Vec n(d, 0.0);
  n[free_col] = 1.0;
  for (std::size_t r = 0; r < d - 1; ++r) {
    n[pivot_cols[r]] = -m[r][free_col] / m[r][pivot_cols[r]];
  }
  const double len = norm(n);
  if (!(len > 0.0) || !std::isfinite(len)) return {};
  Vec out = scaled(n, 1.0 / len);
  for (std::size_t i = 0; i < d; ++i) {
    if (out[i] != 0.0) {
      if (out[i] < 0.0) out = scaled(out, -1.0);
      break;
    }
  }
  return out;
}

}  // namespace xmt

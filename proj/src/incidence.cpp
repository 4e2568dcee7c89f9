#include "xmt/incidence.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>

#include "xmt/construction.hpp"
#include "xmt/parallel.hpp"
#include "xmt/rng.hpp"

namespace xmt::incidence {

using construction::SubsetSumLattice;

std::pair<int, bool> dyadic_index(double v, double base) {
  if (!(v > 0.0)) throw std::domain_error("dyadic_index: v must be positive");
  if (!(base > 1.0)) throw std::invalid_argument("dyadic_index: base must exceed 1");
  const double x = std::log(v) / std::log(base);
  int k = static_cast<int>(std::floor(x));
  // settle boundary rounding exactly against powers
  while (std::pow(base, k) > v) --k;
  while (std::pow(base, k + 1) <= v) ++k;
  const double lo = std::pow(base, k);
  const double hi = std::pow(base, k + 1);
  const bool tie = std::abs(v - lo) <= 1e-9 * lo || std::abs(hi - v) <= 1e-9 * hi;
  return {k, tie};
}

BadSet bad_set(const PointFamily& family, const Vec& nu, double base) {
  BadSet out;
  std::map<int, std::vector<int>> classes;
  for (std::size_t n = 0; n < family.xis.size(); ++n) {
    const double p = dot(nu, sub(family.xis[n], family.xi0));
    const int index = static_cast<int>(n) + 1;
    if (p == 0.0) {
      out.indices.insert(index);
      continue;
    }
    const auto [k, tie] = dyadic_index(std::abs(p), base);
    if (tie) out.ties.insert(index);
    classes[k].push_back(index);
  }
  for (auto& [k, members] : classes) {
    if (members.size() < 2) continue;
    // the largest colliding index survives
    std::sort(members.begin(), members.end());
    for (std::size_t i = 0; i + 1 < members.size(); ++i) out.indices.insert(members[i]);
  }
  return out;
}

bool box_projection_overlap(int n, int k, const Vec& nu, const CurveParams& params) {
  if (n == k) throw std::invalid_argument("box_projection_overlap: need n != k");
  const auto interval = [&](int idx) {
    const auto box = geometry::box_u(idx, params);
    const double c = dot(nu, box.center);
    double r = 0.0;
    for (std::size_t i = 0; i < box.halfwidths.size(); ++i) {
      r += box.halfwidths[i] * std::abs(nu[i]);
    }
    return std::pair<double, double>{c, r};
  };
  const auto [c1, r1] = interval(n);
  const auto [c2, r2] = interval(k);
  return std::abs(c1 - c2) <= r1 + r2;
}

int plane_incidence(const std::vector<Vec>& centers, double radius, const Plane& plane) {
  if (!(radius > 0.0)) throw std::invalid_argument("plane_incidence: radius must be positive");
  int count = 0;
  for (const auto& p : centers) {
    if (std::abs(dot(plane.nu, p) - plane.offset) <= radius) ++count;
  }
  return count;
}

namespace {

// Enumerate size-m index combinations of [0, n).
template <class F>
void for_each_combination(std::size_t n, std::size_t m, F&& f) {
  std::vector<std::size_t> idx(m);
  for (std::size_t i = 0; i < m; ++i) idx[i] = i;
  if (m == 0 || m > n) return;
  while (true) {
    f(idx);
    std::size_t c = m;
    while (c > 0) {
      --c;
      if (idx[c] != c + n - m) break;
      if (c == 0) return;
    }
    if (idx[c] == c + n - m) return;
    ++idx[c];
    for (std::size_t j = c + 1; j < m; ++j) idx[j] = idx[j - 1] + 1;
  }
}

}  // namespace

PlaneSearchResult max_plane_incidence(const std::vector<Vec>& centers, double radius,
                                      std::int64_t budget, std::uint64_t seed,
                                      std::size_t exhaustive_limit) {
  if (budget < 1) throw std::invalid_argument("max_plane_incidence: budget must be >= 1");
  PlaneSearchResult res;
  if (centers.empty()) return res;
  const std::size_t d = centers.front().size();
  if (centers.size() == 1) {
    res.max_count = 1;
    res.worst = Plane{Vec(d, 0.0), 0.0};
    res.worst.nu[0] = 1.0;
    res.worst.offset = centers[0][0];
    res.exhaustive = true;
    res.planes_tested = 1;
    return res;
  }

  std::vector<Plane> candidates;
  if (centers.size() <= exhaustive_limit && centers.size() >= d) {
    res.exhaustive = true;
    for_each_combination(centers.size(), d, [&](const std::vector<std::size_t>& idx) {
      std::vector<Vec> tuple;
      tuple.reserve(d);
      for (const auto i : idx) tuple.push_back(centers[i]);
      Vec nu = hyperplane_normal(tuple);
      if (nu.empty()) return;  // degenerate tuple
      candidates.push_back(Plane{nu, dot(nu, tuple[0])});
    });
  } else {
    Rng rng(seed);
    const std::int64_t n_random_tuples = budget / 2;
    for (std::int64_t t = 0; t < n_random_tuples; ++t) {
      std::vector<Vec> tuple;
      tuple.reserve(d);
      for (std::size_t j = 0; j < d; ++j) {
        tuple.push_back(centers[static_cast<std::size_t>(rng.uniform() * static_cast<double>(centers.size()))]);
      }
      Vec nu = hyperplane_normal(tuple);
      if (nu.empty()) continue;
      candidates.push_back(Plane{nu, dot(nu, tuple[0])});
    }
    for (std::size_t axis = 0; axis < d; ++axis) {
      Vec nu(d, 0.0);
      nu[axis] = 1.0;
      for (const auto& c : centers) candidates.push_back(Plane{nu, c[axis]});
    }
    const std::int64_t remaining = budget - static_cast<std::int64_t>(candidates.size());
    const std::int64_t n_dirs = std::max<std::int64_t>(1, remaining / static_cast<std::int64_t>(centers.size()));
    for (std::int64_t t = 0; t < n_dirs; ++t) {
      const Vec nu = rng.unit_vector(static_cast<int>(d));
      for (const auto& c : centers) candidates.push_back(Plane{nu, dot(nu, c)});
    }
    if (static_cast<std::int64_t>(candidates.size()) > budget) candidates.resize(static_cast<std::size_t>(budget));
  }

  res.planes_tested = static_cast<std::int64_t>(candidates.size());
  const auto [best, besti] = par::block_max(
      candidates.size(),
      [&](std::size_t i) {
        return static_cast<double>(plane_incidence(centers, radius, candidates[i]));
      },
      1024);
  res.max_count = static_cast<int>(best);
  res.worst = candidates[besti];
  return res;
}

int slab_count(const SubsetSumLattice& lattice, const Vec& nu, double lambda, double R) {
  if (!(R >= 1.0)) throw std::invalid_argument("slab_count: R must be >= 1");
  const double w = 1.0 / R;
  int count = 0;
  for (std::size_t i = 0; i < lattice.size(); ++i) {
    if (std::abs(lattice.proj(i, nu) - lambda) <= w) ++count;
  }
  return count;
}

int slab_sup(const SubsetSumLattice& lattice, const Vec& nu, double R, double* worst_lambda) {
  std::vector<double> proj(lattice.size());
  for (std::size_t i = 0; i < lattice.size(); ++i) proj[i] = lattice.proj(i, nu);
  std::sort(proj.begin(), proj.end());
  const double w = 2.0 / R;
  int best = 0;
  double best_lambda = proj.empty() ? 0.0 : proj.front();
  std::size_t j = 0;
  for (std::size_t i = 0; i < proj.size(); ++i) {
    if (j < i + 1) j = i + 1;
    while (j < proj.size() && proj[j] - proj[i] <= w) ++j;
    const int count = static_cast<int>(j - i);
    if (count > best) {
      best = count;
      best_lambda = 0.5 * (proj[i] + proj[j - 1]);
    }
  }
  if (worst_lambda) *worst_lambda = best_lambda;
  return best;
}

bool separation_check(const PointFamily& family) {
  const double inv_r = 1.0 / family.R;
  for (std::size_t m = 0; m < family.xis.size(); ++m) {
    for (std::size_t n = m + 1; n < family.xis.size(); ++n) {
      if (!(dist(family.xis[m], family.xis[n]) > inv_r)) return false;
    }
  }
  return true;
}

std::vector<Vec> direction_family(const PointFamily& family, std::size_t count,
                                  std::uint64_t seed) {
  const std::size_t d = static_cast<std::size_t>(family.params.d);
  std::vector<Vec> dirs;
  dirs.reserve(count);

  for (std::size_t axis = 0; axis < d; ++axis) {
    Vec e(d, 0.0);
    e[axis] = 1.0;
    dirs.push_back(e);
    dirs.push_back(scaled(e, -1.0));
  }

  // normals orthogonal to (d-1)-tuples of pairwise differences; these are
  // the directions that force projection collisions
  std::vector<Vec> pts = family.xis;
  pts.push_back(family.xi0);
  std::vector<Vec> diffs;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    for (std::size_t j = i + 1; j < pts.size(); ++j) diffs.push_back(sub(pts[i], pts[j]));
  }
  std::vector<Vec> adversarial;
  const std::size_t quota = count / 2 + 1;
  Rng pick(seed ^ 0x5eedULL);
  const auto add_normal = [&](const std::vector<std::size_t>& idx) {
    std::vector<Vec> tuple;
    tuple.push_back(Vec(d, 0.0));
    for (const auto i : idx) tuple.push_back(diffs[i]);
    Vec nu = hyperplane_normal(tuple);
    if (!nu.empty()) adversarial.push_back(nu);
  };
  double n_tuples = 1.0;
  for (std::size_t i = 0; i < d - 1; ++i) n_tuples *= static_cast<double>(diffs.size() - i) / static_cast<double>(i + 1);
  if (n_tuples <= static_cast<double>(quota)) {
    for_each_combination(diffs.size(), d - 1, add_normal);
  } else {
    for (std::size_t t = 0; t < quota && adversarial.size() < quota; ++t) {
      std::vector<std::size_t> idx;
      while (idx.size() < d - 1) {
        const std::size_t cand = static_cast<std::size_t>(pick.uniform() * static_cast<double>(diffs.size()));
        if (std::find(idx.begin(), idx.end(), cand) == idx.end()) idx.push_back(cand);
      }
      add_normal(idx);
    }
  }
  for (const auto& nu : adversarial) {
    if (dirs.size() + 3 > count) break;
    dirs.push_back(nu);
    const auto basis = perp_basis(nu);
    if (!basis.empty()) {
      dirs.push_back(normalized(add(nu, scaled(basis[0], 1e-6))));
      dirs.push_back(normalized(add(nu, scaled(basis[0], -1e-6))));
    }
  }

  Rng rng(seed);
  while (dirs.size() < count) dirs.push_back(rng.unit_vector(static_cast<int>(d)));
  return dirs;
}

SweepResult bad_set_sweep(const PointFamily& family, const std::vector<Vec>& dirs,
                          double base) {
  const int limit = family.params.d - 1;
  struct Row {
    int bad = 0;
    bool tie = false;
    bool retest_fail = false;
  };
  std::vector<Row> rows(dirs.size());
  par::parallel_for(dirs.size(), [&](std::size_t i) {
    const BadSet bs = bad_set(family, dirs[i], base);
    Row r;
    r.bad = static_cast<int>(bs.indices.size());
    r.tie = !bs.ties.empty();
    if (r.tie) {
      const auto basis = perp_basis(dirs[i]);
      for (const auto& t : basis) {
        for (const double eps : {1e-6, -1e-6}) {
          const Vec pert = normalized(add(dirs[i], scaled(t, eps)));
          const BadSet pbs = bad_set(family, pert, base);
          if (static_cast<int>(pbs.indices.size()) > limit) r.retest_fail = true;
        }
      }
    }
    rows[i] = r;
  });

  SweepResult res;
  res.directions = dirs.size();
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].bad > res.max_bad) {
      res.max_bad = rows[i].bad;
      res.worst_direction = dirs[i];
    }
    if (rows[i].tie) ++res.tie_directions;
    if (rows[i].bad > limit) ++res.violations;
    if (rows[i].retest_fail) ++res.retest_failures;
  }
  if (res.worst_direction.empty() && !dirs.empty()) res.worst_direction = dirs.front();
  return res;
}

DistinctnessResult projected_distinctness(const PointFamily& family,
                                          const SubsetSumLattice& lattice,
                                          const std::vector<Vec>& dirs, double base) {
  const double inv_r = 1.0 / family.R;
  struct Row {
    std::size_t violations = 0;
    double min_gap = std::numeric_limits<double>::infinity();
  };
  std::vector<Row> rows(dirs.size());

  par::parallel_for_dynamic(dirs.size(), [&](std::size_t di) {
    const Vec& nu = dirs[di];
    const BadSet bs = bad_set(family, nu, base);
    std::uint64_t mask = 0;
    for (const int idx : bs.indices) mask |= 1ull << (idx - 1);

    std::vector<std::pair<double, std::size_t>> proj(lattice.size());
    for (std::size_t i = 0; i < lattice.size(); ++i) proj[i] = {lattice.proj(i, nu), i};
    std::sort(proj.begin(), proj.end());

    Row row;
    const double horizon = 8.0 * inv_r;  // margin window for reporting
    for (std::size_t i = 0; i < proj.size(); ++i) {
      for (std::size_t j = i + 1; j < proj.size(); ++j) {
        const double gap = proj[j].first - proj[i].first;
        if (gap > horizon) break;
        const std::uint64_t xa = lattice.bits[proj[i].second];
        const std::uint64_t xb = lattice.bits[proj[j].second];
        if (((xa ^ xb) & mask) != 0) continue;  // differ on the bad set
        row.min_gap = std::min(row.min_gap, gap);
        if (gap <= inv_r) ++row.violations;
      }
    }
    rows[di] = row;
  });

  DistinctnessResult res;
  res.min_gap = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < rows.size(); ++i) {
    res.violations += rows[i].violations;
    if (rows[i].min_gap < res.min_gap) {
      res.min_gap = rows[i].min_gap;
      res.worst_direction = dirs[i];
    }
  }
  return res;
}

}  // namespace xmt::incidence

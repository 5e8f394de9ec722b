#include "metric_repair/general.hpp"

#include <algorithm>

namespace metric_repair {

namespace {

GeneralResult finish(const DistanceMatrix& dp, DistanceMatrix repaired, double tol) {
  GeneralResult r;
  r.perturbation = Perturbation::difference(repaired, dp);
  r.residual_broken = count_broken(repaired, tol);
  const std::int64_t total = triangle_count(dp.size());
  r.residual_fraction = total == 0 ? 0.0 : static_cast<double>(r.residual_broken) / total;
  r.repaired = std::move(repaired);
  return r;
}

// i > j as in the sweep; returns true if an update was made.
bool fix_triangle(DistanceMatrix& d, const ViolationCounts& c, int i, int j, int k,
                  double threshold) {
  const double lhs = d(i, j);
  const double ik = d(i, k);
  const double jk = d(j, k);
  if (lhs - ik - jk <= threshold) return false;

  const auto l = c.left(i, j);
  const auto r_ik = c.right(i, k);
  const auto r_jk = c.right(j, k);
  if (l > std::max(r_ik, r_jk)) {
    d.set(i, j, ik + jk);
  } else if (r_ik > r_jk) {
    d.set(i, k, std::max(lhs - jk, 0.0));
  } else {
    d.set(j, k, std::max(lhs - ik, 0.0));
  }
  return true;
}

}  // namespace

GeneralResult heuristic_repair(const DistanceMatrix& dp, double tol,
                               const std::optional<std::vector<Triangle>>& triangles) {
  const int n = dp.size();
  const double threshold = violation_threshold(dp, tol);
  const ViolationCounts counts = violation_counts(dp, tol);
  DistanceMatrix work = dp;

  if (triangles) {
    for (const Triangle& t : *triangles) {
      validate_triangle(t, n);
      fix_triangle(work, counts, t.j, t.i, t.k, threshold);
    }
  } else {
    for (int k = 0; k < n; ++k) {
      for (int i = 0; i < n; ++i) {
        if (i == k) continue;
        for (int j = 0; j < i; ++j) {
          if (j != k) fix_triangle(work, counts, i, j, k, threshold);
        }
      }
    }
  }
  return finish(dp, std::move(work), tol);
}

GeneralResult shift_repair(const DistanceMatrix& dp, double tol) {
  const double c = max_violation(dp);
  DistanceMatrix work = dp;
  if (c > 0.0) {
    for (int i = 0; i < dp.size(); ++i) {
      for (int j = i + 1; j < dp.size(); ++j) work.set(i, j, dp(i, j) + c);
    }
  }
  return finish(dp, std::move(work), tol);
}

}  // namespace metric_repair

#include "metric_repair/domr.hpp"

#include <algorithm>
#include <cstdint>

#include "internal/closure.hpp"

namespace metric_repair {

DomrResult fw_domr(const DistanceMatrix& dp, double tol) {
  const double threshold = violation_threshold(dp, tol);
  DomrResult result;
  result.repaired = dp;
  result.triangles_touched = detail::floyd_warshall(result.repaired, threshold);
  result.perturbation = Perturbation::difference(result.repaired, dp);
  return result;
}

DomrResult fw_prior(const DistanceMatrix& dp, const std::vector<Triangle>& broken, double tol) {
  const int n = dp.size();
  std::vector<std::vector<Pair>> at_apex(n);
  for (const Triangle& t : broken) {
    validate_triangle(t, n);
    at_apex[t.k].push_back({t.i, t.j});
  }
  const double threshold = violation_threshold(dp, tol);

  DomrResult result;
  result.repaired = dp;
  DistanceMatrix& work = result.repaired;

  // Floyd-Warshall can only relax edge ij through apex k if that triangle
  // was broken in dp or if ik or jk was decreased at an earlier apex. So per
  // apex we test the broken triangles there plus every triangle with an
  // already decreased pair on its right-hand side: extend_broken, generated
  // as edges actually change. The tests are a subset of Floyd-Warshall's in
  // the same apex order, so the result is identical bit for bit.
  std::vector<std::vector<int>> decreased(n);  // v -> a with {a, v} decreased
  SymmetricArray<std::uint8_t> changed(n, 0);
  SymmetricArray<int> stamp(n, -1);
  std::vector<Pair> tests;
  for (int k = 0; k < n; ++k) {
    tests.clear();
    auto add = [&](Pair p) {
      if (stamp(p.i, p.j) == k) return;
      stamp.set(p.i, p.j, k);
      tests.push_back(p);
    };
    for (const Pair& p : at_apex[k]) add(p);
    for (int a : decreased[k]) {
      for (int l = 0; l < n; ++l) {
        if (l != a && l != k) add(Pair::make(a, l));
      }
    }
    std::sort(tests.begin(), tests.end());
    result.triangles_touched += static_cast<std::int64_t>(tests.size());
    for (const Pair& p : tests) {
      const double via = work(p.i, k) + work(k, p.j);
      if (work(p.i, p.j) - via > threshold) {
        work.set(p.i, p.j, via);
        if (!changed(p.i, p.j)) {
          changed.set(p.i, p.j, 1);
          decreased[p.i].push_back(p.j);
          decreased[p.j].push_back(p.i);
        }
      }
    }
  }

  if (detail::any_broken(work, threshold)) {
    DomrResult full = fw_domr(dp, tol);
    full.triangles_touched += result.triangles_touched;
    full.fallback_used = true;
    return full;
  }
  result.perturbation = Perturbation::difference(work, dp);
  return result;
}

}  // namespace metric_repair

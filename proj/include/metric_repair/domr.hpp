#pragma once

// Decrease-only metric repair. The repaired matrix is the all-pairs shortest
// path closure of K_n(D'), which is simultaneously the sparsest and the
// l_p-minimal decrease-only repair.

#include <cstdint>
#include <vector>

#include "metric_repair/core.hpp"

namespace metric_repair {

struct DomrResult {
  DistanceMatrix repaired;
  Perturbation perturbation;       // all entries <= 0
  std::int64_t triangles_touched = 0;  // relaxation tests performed
  bool fallback_used = false;      // the prior-information pass left a broken triangle
};

/// Floyd-Warshall: k outer, then i, then j < i. A relaxation fires only on a
/// strict violation larger than tol * max_entry(dp).
DomrResult fw_domr(const DistanceMatrix& dp, double tol = kDefaultTolerance);

/// Floyd-Warshall restricted to the triangles that can change anything:
/// apexes in increasing order, and at apex k the broken triangles with apex k
/// plus every triangle whose right-hand side holds a pair decreased at an
/// earlier apex (extend_broken, generated as edges change, which also covers
/// cascades). A final full metricity check guards the result; if anything is
/// still broken it is recomputed with fw_domr and `fallback_used` is set.
/// triangles_touched counts the relaxation tests performed.
///
/// `broken` is expected to be broken_triangles(dp, tol); any order. Throws
/// std::invalid_argument if it contains a triangle invalid for dp.size().
DomrResult fw_prior(const DistanceMatrix& dp, const std::vector<Triangle>& broken,
                    double tol = kDefaultTolerance);

}  // namespace metric_repair

#pragma once

// Sign-unconstrained repair: the two-pass counting heuristic and the additive
// shift baseline.

#include <cstdint>
#include <optional>
#include <vector>

#include "metric_repair/core.hpp"

namespace metric_repair {

struct GeneralResult {
  DistanceMatrix repaired;
  Perturbation perturbation;
  std::int64_t residual_broken = 0;  // recomputed by a full scan
  double residual_fraction = 0.0;    // residual_broken / triangle_count(n)
};

/// Pass 1 counts left/right occurrences over the broken triangles of the
/// input. Pass 2 sweeps k, i, j < i and, at each still-broken triangle,
///   l_ij > max(r_ik, r_jk)  -> D_ij = D_ik + D_kj
///   else r_ik > r_jk        -> D_ik = D_ij - D_jk
///   else                    -> D_jk = D_ij - D_ik
/// Counts are not refreshed during pass 2, and pass 2 runs exactly once.
///
/// With `triangles` set, pass 2 visits only those triangles, in order.
GeneralResult heuristic_repair(const DistanceMatrix& dp, double tol = kDefaultTolerance,
                               const std::optional<std::vector<Triangle>>& triangles = std::nullopt);

/// Adds max_violation(dp) to every off-diagonal entry.
GeneralResult shift_repair(const DistanceMatrix& dp, double tol = kDefaultTolerance);

}  // namespace metric_repair

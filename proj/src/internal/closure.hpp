#pragma once

#include <cstdint>
#include <vector>

#include "metric_repair/core.hpp"

namespace metric_repair::detail {

/// In-place Floyd-Warshall over K_n(d) in the order k, i, j < i. Relaxes only
/// when the current entry exceeds the two-hop path by more than `threshold`.
/// If `via` is non-null it receives, per ordered pair, the last apex that
/// relaxed the pair (-1 for the direct edge). Returns the number of
/// relaxation tests.
std::int64_t floyd_warshall(DistanceMatrix& d, double threshold, std::vector<int>* via = nullptr);

/// True iff some triangle exceeds `threshold` (absolute).
bool any_broken(const DistanceMatrix& d, double threshold);

}  // namespace metric_repair::detail

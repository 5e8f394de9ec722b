#pragma once

// Increase-only metric repair: a direct sweep, oracle construction heuristics,
// and the oracle-based repair that turns IOMR into a shortest-path problem.

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "metric_repair/core.hpp"

namespace metric_repair {

struct IomrResult {
  DistanceMatrix repaired;
  Perturbation perturbation;  // all entries >= 0
  std::int64_t residual_broken = 0;
};

/// Sweep in the order k, i, j < i; on a broken triangle (edge {i,j}, apex k)
/// raise D_ik to D_ij - D_jk. Always ends metric.
///
/// With `triangles` set, only those triangles are swept (in the given order)
/// instead of all n(n-1)(n-2)/2; a final full scan reports what remains.
IomrResult iomr_repair(const DistanceMatrix& dp, double tol = kDefaultTolerance,
                       const std::optional<std::vector<Triangle>>& triangles = std::nullopt);

enum class OracleStrategy { counting, cover, routing };

std::string to_string(OracleStrategy s);
OracleStrategy parse_oracle_strategy(const std::string& text);

/// Guess the support of a decreasing corruption.
///
///  counting: greedy cover of the broken triangles by right-hand edges,
///            always taking the pair with the most still-uncovered
///            right-hand occurrences (ties: smallest pair).
///  cover:    counting, followed by reverse deletion of any marked pair
///            whose removal keeps every broken triangle covered.
///  routing:  pairs used most often by the shortest paths of fw_domr; pairs
///            whose usage reaches the 90th percentile of nonzero usages.
OracleMask build_oracle(const DistanceMatrix& dp, OracleStrategy strategy,
                        double tol = kDefaultTolerance);

/// True iff every marked pair {i,j} has an apex k with {i,k} and {j,k}
/// both unmarked. Throws std::invalid_argument if the sizes differ.
bool oracle_feasible(const DistanceMatrix& dp, const OracleMask& q);

/// First marked pair without a clean apex, if any.
std::optional<Pair> uncovered_pair(const OracleMask& q);

class InfeasibleOracleError : public std::runtime_error {
 public:
  explicit InfeasibleOracleError(Pair pair);
  Pair pair() const { return pair_; }

 private:
  Pair pair_;
};

/// Upper-bound step: U_ij = max(D'_ij, min over clean apexes of D'_ik + D'_jk)
/// for marked pairs, U_ij = D'_ij otherwise. Then the shortest-path closure of
/// U, floored at D' so the result never decreases an entry.
///
/// When D' = D + P with D metric, P <= 0 and Q = supp(P), the floor is inactive,
/// the result is metric, and only marked pairs change. For heuristic oracles
/// residual_broken may be positive.
///
/// Throws InfeasibleOracleError naming the first pair without a clean apex.
IomrResult oracle_iomr(const DistanceMatrix& dp, const OracleMask& q,
                       double tol = kDefaultTolerance);

}  // namespace metric_repair

#pragma once

// Convex-relaxation baselines: l1-minimal repair over the metric cone and
// iteratively reweighted l1.

#include <cstdint>
#include <vector>

#include "metric_repair/core.hpp"
#include "metric_repair/lp.hpp"

namespace metric_repair {

/// Relative tolerance for metricity of LP-derived repairs.
inline constexpr double kLpTolerance = 1e-7;

/// Builds  minimize sum w_ij (p+_ij + p-_ij)  over P = p+ - p-, with one row
/// per labeled triangle  P_ij - P_ik - P_jk <= D'_ik + D'_jk - D'_ij  in
/// (apex, i, j) order, one row  P_ij >= -D'_ij  per pair, and per-pair
/// fixings p+ = 0 (decrease-only) or p- = 0 (increase-only).
///
/// Variables are ordered pair by pair, (0,1), (0,2), ..., positive part first,
/// and named p_i_j_pos / p_i_j_neg with 1-based labels.
/// Throws std::invalid_argument for a negative or non-finite weight or a
/// size mismatch.
lp::LpInstance build_metric_lp(const DistanceMatrix& dp, RepairMode mode,
                               const SymmetricArray<double>& weights);

/// Unit weights.
lp::LpInstance build_metric_lp(const DistanceMatrix& dp, RepairMode mode);

/// Reads P back out of a solution of build_metric_lp. Entries with
/// |P_ij| <= 1e-12 * max_entry(dp) are dropped.
Perturbation perturbation_from_lp(const DistanceMatrix& dp, const std::vector<double>& x);

struct L1Iterate {
  std::int64_t support = 0;
  double l1_norm = 0.0;
  double weighted_objective = 0.0;
};

struct L1Result {
  Perturbation perturbation;
  DistanceMatrix repaired;
  double objective_value = 0.0;  // sum of w |P| of the final solve
  int iterations = 0;
  lp::LpStatus solver_status = lp::LpStatus::optimal;
  std::int64_t simplex_iterations = 0;
  std::int64_t residual_broken = 0;  // under kLpTolerance
  std::vector<L1Iterate> history;    // one entry per LP solve
};

/// Single l1 solve with unit weights.
L1Result l1_repair(const DistanceMatrix& dp, RepairMode mode,
                   const lp::SolverOptions& options = {});

struct Irl1Options {
  int iterations = 10;
  /// Reweighting offset relative to max_entry(dp).
  double relative_epsilon = 1e-3;
  lp::SolverOptions solver;
};

/// Iteration 1 solves with unit weights; later iterations use
/// w_ij = 1 / (|P_ij| + eps) from the most recent solution. Stops early once
/// the support is unchanged between consecutive iterations.
/// Throws std::invalid_argument if iterations < 1 or epsilon <= 0.
L1Result irl1_repair(const DistanceMatrix& dp, RepairMode mode, const Irl1Options& options = {});

}  // namespace metric_repair

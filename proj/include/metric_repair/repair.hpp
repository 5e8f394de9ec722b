#pragma once

// Uniform entry point over every repair algorithm, shared by the command-line
// tool and the bench.

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "metric_repair/core.hpp"
#include "metric_repair/iomr.hpp"
#include "metric_repair/lp.hpp"

namespace metric_repair {

/// fw-domr fw-prior iomr oracle-iomr heuristic shift l1 irl1
const std::vector<std::string>& algorithm_ids();
bool is_algorithm(const std::string& id);

/// An algorithm/mode combination that does not make sense.
class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct RepairOptions {
  std::optional<RepairMode> mode;  // unset: the algorithm's natural mode
  double tol = kDefaultTolerance;
  OracleStrategy oracle_strategy = OracleStrategy::counting;
  std::optional<OracleMask> oracle;  // overrides oracle_strategy
  int irl1_iterations = 10;
  lp::SolverOptions solver;
};

struct RepairOutcome {
  DistanceMatrix repaired;
  Perturbation perturbation;
  std::int64_t residual_broken = 0;
  /// Relative tolerance used for residual_broken: tol for combinatorial
  /// algorithms, max(tol, kLpTolerance) for l1 / irl1.
  double residual_tol = kDefaultTolerance;
  RepairMode mode = RepairMode::general;
};

/// The mode an algorithm runs in, given an optional request.
/// fw-*: decrease_only; iomr / oracle-iomr: increase_only; heuristic: general;
/// shift: general or increase_only; l1 / irl1: any (default general).
/// Throws UsageError for unknown ids and incompatible modes.
RepairMode resolve_mode(const std::string& algo, const std::optional<RepairMode>& requested);

/// Runs one algorithm. Module errors (InfeasibleOracleError,
/// lp::IterationLimitError, lp::SolverError) propagate. A non-optimal LP
/// status throws lp::SolverError.
RepairOutcome run_repair(const std::string& algo, const DistanceMatrix& dp,
                         const RepairOptions& options = {});

}  // namespace metric_repair

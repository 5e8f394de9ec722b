#pragma once

// Benchmark harness: corrupt seeded instances over a sparsity grid, run a set
// of repair algorithms, and emit one CSV row per (size, level, trial, algo)
// followed by per-level aggregates.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "metric_repair/core.hpp"
#include "metric_repair/instances.hpp"
#include "metric_repair/iomr.hpp"

namespace metric_repair::bench {

struct BenchConfig {
  InstanceKind kind = InstanceKind::euclidean;
  std::vector<int> sizes{50};
  std::vector<double> grid{0.05, 0.1, 0.15, 0.2, 0.25, 0.3, 0.35, 0.4, 0.45, 0.5};
  int trials = 10;
  std::vector<std::string> algos{"iomr", "oracle-iomr", "heuristic", "l1", "irl1"};
  std::uint64_t seed = 1;
  CorruptionSign sign = CorruptionSign::negative;
  double scale = 0.125;
  int dim = 2;
  double p = 0.0;  // er_path; <= 0 means 2 ln(n) / n
  RepairMode mode = RepairMode::general;  // for l1 and irl1
  OracleStrategy oracle = OracleStrategy::counting;
  int irl1_iterations = 10;
  double tol = kDefaultTolerance;
  int threads = 1;
  bool timing = true;

  /// Throws std::invalid_argument describing the first problem.
  void validate() const;
};

struct BenchRecord {
  std::string kind;
  int n = 0;
  int level_index = 0;
  std::optional<double> level;  // unset for random kinds
  int trial = 0;
  std::uint64_t seed = 0;
  std::string algo;
  std::optional<std::int64_t> input_support;
  std::optional<double> input_l1;
  std::int64_t initial_broken = 0;
  std::int64_t output_support = 0;
  double output_l1 = 0.0;
  bool output_integral = false;
  std::int64_t residual_broken = 0;
  double ms = 0.0;
  std::string status = "ok";  // or an error tag; numeric fields are then empty
};

/// Seed for one trial: derive_seed(base, {n, level_index, trial}).
std::uint64_t trial_seed(std::uint64_t base, int n, int level_index, int trial);

/// Runs the whole configuration. Row order is (n, level, trial, algo as
/// listed), independent of thread count.
std::vector<BenchRecord> run(const BenchConfig& config);

struct Aggregate {
  std::string kind;
  int n = 0;
  std::optional<double> level;
  std::string algo;
  int trials_ok = 0;
  int trials_failed = 0;
  std::optional<double> mean_input_support;
  double mean_output_support = 0.0;
  double median_output_support = 0.0;
  double mean_output_l1 = 0.0;
  double mean_residual_broken = 0.0;
  std::int64_t max_residual_broken = 0;
  std::optional<double> mean_ms;
};

/// Per (n, level, algo) summaries over successful trials, in row order.
std::vector<Aggregate> aggregate(const std::vector<BenchRecord>& rows);

/// Mean over trials of ||P_iomr||_0 / ||P_oracle-iomr||_0 at one level,
/// using trials where both succeeded and the oracle support is nonzero.
struct SupportRatio {
  std::string kind;
  int n = 0;
  std::optional<double> level;
  int trials = 0;
  double mean_ratio = 0.0;
  double max_ratio = 0.0;
};

std::vector<SupportRatio> iomr_oracle_ratios(const std::vector<BenchRecord>& rows);

/// Writes rows, then "# aggregate" and "# iomr_over_oracle" sections, each
/// with its own header, separated by blank lines. With timing off the ms
/// columns are left empty so output is byte-stable.
void write_csv(std::ostream& out, const std::vector<BenchRecord>& rows, bool timing);

}  // namespace metric_repair::bench

#pragma once

// Revised primal simplex on  min c^T x,  A x = b,  x >= 0,  b >= 0.
// The caller supplies an identity starting basis made of slack or
// artificial columns.
//
// Devex pricing over a working set of columns that grows whenever a full
// pricing pass finds improving columns outside it; Harris ratio test; Bland's
// rule after a long degenerate streak. Without a phase 1 the right-hand side
// is perturbed for the main solve and restored afterwards.

#include <cstdint>
#include <vector>

#include "metric_repair/lp.hpp"

namespace metric_repair::lp::detail {

struct StandardForm {
  int rows = 0;
  // compressed sparse columns
  std::vector<std::int64_t> col_start{0};
  std::vector<int> row_index;
  std::vector<double> value;
  std::vector<double> cost;
  std::vector<bool> artificial;
  std::vector<double> rhs;
  std::vector<int> initial_basis;  // unit columns, one per row

  int columns() const { return static_cast<int>(cost.size()); }

  int add_column(double c, const std::vector<std::pair<int, double>>& entries,
                 bool is_artificial = false);
};

enum class SimplexStatus { optimal, infeasible, unbounded };

struct SimplexResult {
  SimplexStatus status = SimplexStatus::infeasible;
  std::vector<double> x;       // per column
  std::vector<double> duals;   // simplex multipliers, per row
  std::int64_t iterations = 0;
};

SimplexResult run_simplex(const StandardForm& form, const SolverOptions& options);

}  // namespace metric_repair::lp::detail

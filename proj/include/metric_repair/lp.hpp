#pragma once

// A small linear-programming layer: an explicit LP model, a simplex solver,
// and export to the CPLEX LP text format.
//
// Model:  minimize  c^T x  subject to  rows (<=, >=, =),  x >= 0.
//
// The solver presolves singleton rows into bounds and then runs a sparse
// revised simplex on the LP dual, whose row count equals the number of free
// variables. Metric-repair LPs have O(n^3) rows but only O(n^2) variables,
// which makes the dual the cheap side.

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

namespace metric_repair::lp {

enum class Sense { less_equal, greater_equal, equal };

struct Term {
  int var = 0;
  double coef = 0.0;
};

struct Constraint {
  std::string name;
  std::vector<Term> terms;
  Sense sense = Sense::less_equal;
  double rhs = 0.0;
};

struct LpInstance {
  std::vector<std::string> variable_names;
  std::vector<double> objective;  // one weight per variable
  std::vector<Constraint> constraints;

  int variable_count() const { return static_cast<int>(objective.size()); }

  /// Adds a variable and returns its index.
  int add_variable(std::string name, double cost);
};

enum class LpStatus { optimal, infeasible, unbounded };

std::string to_string(LpStatus status);

struct LpSolution {
  LpStatus status = LpStatus::infeasible;
  std::vector<double> x;  // empty unless optimal
  double objective = 0.0;
  std::int64_t iterations = 0;
  double max_violation = 0.0;  // largest row or bound violation of x
};

struct SolverOptions {
  std::int64_t max_iterations = 2'000'000;
  double feasibility_tol = 1e-9;
  double optimality_tol = 1e-9;
  int refactor_interval = 64;
};

class IterationLimitError : public std::runtime_error {
 public:
  explicit IterationLimitError(std::int64_t iterations)
      : std::runtime_error("simplex iteration limit reached after " + std::to_string(iterations) +
                           " iterations"),
        iterations_(iterations) {}
  std::int64_t iterations() const { return iterations_; }

 private:
  std::int64_t iterations_;
};

class SolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Solves the LP. Deterministic for a given instance and options.
/// Throws IterationLimitError when the pivot budget is exhausted and
/// SolverError on an unrecoverable numerical failure.
LpSolution solve_lp(const LpInstance& lp, const SolverOptions& options = {});

/// Largest violation of any row or of x >= 0.
double max_violation(const LpInstance& lp, const std::vector<double>& x);

/// CPLEX LP format; grammar in docs/lp_format.md.
void write_lp_format(std::ostream& out, const LpInstance& lp, const std::string& comment = {});

}  // namespace metric_repair::lp

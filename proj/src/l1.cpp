#include "metric_repair/l1.hpp"

#include <cmath>
#include <stdexcept>

namespace metric_repair {

namespace {

std::string label(const char* prefix, int i, int j) {
  return std::string(prefix) + "_" + std::to_string(i + 1) + "_" + std::to_string(j + 1);
}

// Index of the positive part of pair (i, j), i < j, in pair-major order.
int pair_var(int n, int i, int j) {
  const int before = i * n - i * (i + 1) / 2;  // pairs (a, b) with a < i
  return 2 * (before + (j - i - 1));
}

}  // namespace

lp::LpInstance build_metric_lp(const DistanceMatrix& dp, RepairMode mode,
                               const SymmetricArray<double>& weights) {
  const int n = dp.size();
  if (weights.size() != n) throw std::invalid_argument("weight matrix size mismatch");

  lp::LpInstance lp;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const double w = weights(i, j);
      if (!std::isfinite(w) || w < 0.0) throw std::invalid_argument("weights must be nonnegative");
      lp.add_variable(label("p", i, j) + "_pos", w);
      lp.add_variable(label("p", i, j) + "_neg", w);
    }
  }

  auto p_terms = [&](int a, int b, double sign, std::vector<lp::Term>& out) {
    const int v = a < b ? pair_var(n, a, b) : pair_var(n, b, a);
    out.push_back({v, sign});
    out.push_back({v + 1, -sign});
  };

  lp.constraints.reserve(static_cast<std::size_t>(triangle_count(n) + 2 * dp.pair_count()));
  for (int k = 0; k < n; ++k) {
    for (int i = 0; i < n; ++i) {
      if (i == k) continue;
      for (int j = i + 1; j < n; ++j) {
        if (j == k) continue;
        lp::Constraint c;
        c.name = "t_" + std::to_string(i + 1) + "_" + std::to_string(j + 1) + "_" +
                 std::to_string(k + 1);
        p_terms(i, j, 1.0, c.terms);
        p_terms(i, k, -1.0, c.terms);
        p_terms(j, k, -1.0, c.terms);
        c.sense = lp::Sense::less_equal;
        c.rhs = dp(i, k) + dp(j, k) - dp(i, j);
        lp.constraints.push_back(std::move(c));
      }
    }
  }
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      lp::Constraint c;
      c.name = label("nn", i, j);
      p_terms(i, j, 1.0, c.terms);
      c.sense = lp::Sense::greater_equal;
      c.rhs = -dp(i, j);
      lp.constraints.push_back(std::move(c));
    }
  }
  if (mode != RepairMode::general) {
    const bool fix_positive = mode == RepairMode::decrease_only;
    for (int i = 0; i < n; ++i) {
      for (int j = i + 1; j < n; ++j) {
        lp::Constraint c;
        c.name = label("fix", i, j) + (fix_positive ? "_pos" : "_neg");
        c.terms.push_back({pair_var(n, i, j) + (fix_positive ? 0 : 1), 1.0});
        c.sense = lp::Sense::equal;
        c.rhs = 0.0;
        lp.constraints.push_back(std::move(c));
      }
    }
  }
  return lp;
}

lp::LpInstance build_metric_lp(const DistanceMatrix& dp, RepairMode mode) {
  SymmetricArray<double> ones(dp.size(), 1.0);
  return build_metric_lp(dp, mode, ones);
}

Perturbation perturbation_from_lp(const DistanceMatrix& dp, const std::vector<double>& x) {
  const int n = dp.size();
  if (static_cast<std::int64_t>(x.size()) != 2 * dp.pair_count()) {
    throw std::invalid_argument("solution length does not match the metric LP");
  }
  const double cut = 1e-12 * dp.max_entry();
  Perturbation p(n);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const int v = pair_var(n, i, j);
      const double value = x[v] - x[v + 1];
      if (std::abs(value) > cut) p.set(i, j, value);
    }
  }
  return p;
}

namespace {

struct Solve {
  Perturbation p;
  lp::LpStatus status;
  double weighted = 0.0;
  std::int64_t iterations = 0;
};

Solve solve_weighted(const DistanceMatrix& dp, RepairMode mode, const SymmetricArray<double>& w,
                     const lp::SolverOptions& options) {
  const lp::LpInstance lp = build_metric_lp(dp, mode, w);
  const lp::LpSolution sol = lp::solve_lp(lp, options);
  Solve s{Perturbation(dp.size()), sol.status, 0.0, sol.iterations};
  if (sol.status == lp::LpStatus::optimal) {
    s.p = perturbation_from_lp(dp, sol.x);
    for (const auto& [pair, v] : s.p.entries()) s.weighted += w(pair.i, pair.j) * std::abs(v);
  }
  return s;
}

void finish(const DistanceMatrix& dp, L1Result& r) {
  const double scale = dp.max_entry();
  if (r.solver_status == lp::LpStatus::optimal) {
    r.repaired = apply(dp, r.perturbation, 1e-9 * std::max(scale, 1.0));
    r.residual_broken = count_broken(r.repaired, kLpTolerance);
  } else {
    r.repaired = dp;
    r.residual_broken = count_broken(dp, kLpTolerance);
  }
}

}  // namespace

L1Result l1_repair(const DistanceMatrix& dp, RepairMode mode, const lp::SolverOptions& options) {
  SymmetricArray<double> ones(dp.size(), 1.0);
  Solve s = solve_weighted(dp, mode, ones, options);
  L1Result r;
  r.solver_status = s.status;
  r.iterations = 1;
  r.simplex_iterations = s.iterations;
  r.objective_value = s.weighted;
  r.perturbation = std::move(s.p);
  r.history.push_back({r.perturbation.support_size_scaled(dp.max_entry()),
                       r.perturbation.l1_norm(), r.objective_value});
  finish(dp, r);
  return r;
}

L1Result irl1_repair(const DistanceMatrix& dp, RepairMode mode, const Irl1Options& options) {
  if (options.iterations < 1) throw std::invalid_argument("irl1 needs at least one iteration");
  if (!(options.relative_epsilon > 0.0)) throw std::invalid_argument("epsilon must be positive");

  const int n = dp.size();
  const double scale = dp.max_entry();
  const double eps = options.relative_epsilon * (scale > 0.0 ? scale : 1.0);
  const double threshold = kSupportThreshold * scale;

  SymmetricArray<double> w(n, 1.0);
  L1Result r;
  std::vector<Pair> previous_support;
  for (int t = 1; t <= options.iterations; ++t) {
    Solve s = solve_weighted(dp, mode, w, options.solver);
    r.simplex_iterations += s.iterations;
    r.iterations = t;
    r.solver_status = s.status;
    if (s.status != lp::LpStatus::optimal) break;

    r.perturbation = std::move(s.p);
    r.objective_value = s.weighted;
    r.history.push_back({r.perturbation.support_size(threshold), r.perturbation.l1_norm(),
                         s.weighted});

    std::vector<Pair> support = r.perturbation.support(threshold);
    if (t > 1 && support == previous_support) break;
    previous_support = std::move(support);

    for (int i = 0; i < n; ++i) {
      for (int j = i + 1; j < n; ++j) {
        w.set(i, j, 1.0 / (std::abs(r.perturbation.get(i, j)) + eps));
      }
    }
  }
  finish(dp, r);
  return r;
}

}  // namespace metric_repair

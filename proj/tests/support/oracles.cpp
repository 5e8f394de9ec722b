#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "metric_repair/lp.hpp"

namespace oracle {

namespace lp = metric_repair::lp;

DistanceMatrix triple(double d12, double d13, double d23) {
  return DistanceMatrix::from_rows({{0, d12, d13}, {d12, 0, d23}, {d13, d23, 0}});
}

DistanceMatrix constant(int n, double fill) {
  DistanceMatrix d(n);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) d.set(i, j, fill);
  }
  return d;
}

std::vector<std::vector<double>> dijkstra_apsp(const DistanceMatrix& d) {
  const int n = d.size();
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<std::vector<double>> out(n, std::vector<double>(n, inf));
  for (int s = 0; s < n; ++s) {
    std::vector<double>& dist = out[s];
    std::vector<bool> done(n, false);
    dist[s] = 0.0;
    for (int round = 0; round < n; ++round) {
      int u = -1;
      for (int v = 0; v < n; ++v) {
        if (!done[v] && (u < 0 || dist[v] < dist[u])) u = v;
      }
      done[u] = true;
      for (int v = 0; v < n; ++v) {
        if (!done[v] && dist[u] + d(u, v) < dist[v]) dist[v] = dist[u] + d(u, v);
      }
    }
  }
  return out;
}

std::int64_t brute_broken_count(const DistanceMatrix& d, double tol) {
  const int n = d.size();
  double scale = 0.0;
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) scale = std::max(scale, d(a, b));
  }
  std::int64_t count = 0;
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) {
      for (int c = 0; c < n; ++c) {
        if (a >= b || c == a || c == b) continue;
        if (d(a, b) - d(a, c) - d(c, b) > tol * scale) ++count;
      }
    }
  }
  return count;
}

bool decrease_support_feasible(const DistanceMatrix& dp, const std::vector<Pair>& support) {
  const int n = dp.size();
  lp::LpInstance model;
  std::vector<std::vector<int>> var(n, std::vector<int>(n, -1));
  for (const Pair& p : support) {
    const int v = model.add_variable("x" + std::to_string(model.variable_count()), 0.0);
    var[p.i][p.j] = var[p.j][p.i] = v;
  }
  // (dp_ab - x_ab) <= (dp_ac - x_ac) + (dp_cb - x_cb)
  for (int a = 0; a < n; ++a) {
    for (int b = a + 1; b < n; ++b) {
      for (int c = 0; c < n; ++c) {
        if (c == a || c == b) continue;
        lp::Constraint row;
        row.sense = lp::Sense::less_equal;
        row.rhs = dp(a, c) + dp(c, b) - dp(a, b);
        if (var[a][b] >= 0) row.terms.push_back({var[a][b], -1.0});
        if (var[a][c] >= 0) row.terms.push_back({var[a][c], 1.0});
        if (var[c][b] >= 0) row.terms.push_back({var[c][b], 1.0});
        model.constraints.push_back(std::move(row));
      }
    }
  }
  for (const Pair& p : support) {
    model.constraints.push_back({"", {{var[p.i][p.j], 1.0}}, lp::Sense::less_equal, dp(p.i, p.j)});
  }
  return lp::solve_lp(model).status == lp::LpStatus::optimal;
}

bool one_sparse_repair_exists(const DistanceMatrix& dp, Pair p) {
  const int n = dp.size();
  double lo = 0.0;
  double hi = std::numeric_limits<double>::infinity();
  for (int a = 0; a < n; ++a) {
    for (int b = a + 1; b < n; ++b) {
      for (int c = 0; c < n; ++c) {
        if (c == a || c == b) continue;
        const bool left = Pair{a, b} == p;
        const bool r1 = Pair::make(a, c) == p;
        const bool r2 = Pair::make(b, c) == p;
        const double ab = dp(a, b), ac = dp(a, c), bc = dp(b, c);
        if (left) {
          hi = std::min(hi, ac + bc);  // x <= ac + bc
        } else if (r1) {
          lo = std::max(lo, ab - bc);  // ab <= x + bc
        } else if (r2) {
          lo = std::max(lo, ab - ac);
        } else if (ab > ac + bc) {
          return false;  // a broken triangle not touching p
        }
      }
    }
  }
  return lo <= hi;
}

std::optional<DistanceMatrix> max_metric_below(const DistanceMatrix& dp,
                                               const std::vector<double>& weights) {
  const int n = dp.size();
  lp::LpInstance model;
  std::vector<std::vector<int>> var(n, std::vector<int>(n, -1));
  std::size_t w = 0;
  for (int a = 0; a < n; ++a) {
    for (int b = a + 1; b < n; ++b) {
      var[a][b] = var[b][a] = model.add_variable("y", -weights.at(w++));
    }
  }
  for (int a = 0; a < n; ++a) {
    for (int b = a + 1; b < n; ++b) {
      model.constraints.push_back({"", {{var[a][b], 1.0}}, lp::Sense::less_equal, dp(a, b)});
      for (int c = 0; c < n; ++c) {
        if (c == a || c == b) continue;
        model.constraints.push_back(
            {"", {{var[a][b], 1.0}, {var[a][c], -1.0}, {var[b][c], -1.0}}, lp::Sense::less_equal, 0.0});
      }
    }
  }
  const lp::LpSolution sol = lp::solve_lp(model);
  if (sol.status != lp::LpStatus::optimal) return std::nullopt;
  DistanceMatrix out(n);
  for (int a = 0; a < n; ++a) {
    for (int b = a + 1; b < n; ++b) out.set(a, b, std::max(0.0, sol.x[var[a][b]]));
  }
  return out;
}

}  // namespace oracle

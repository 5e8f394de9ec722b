#include "metric_repair/iomr.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include "internal/closure.hpp"

namespace metric_repair {

namespace {

void raise_to(DistanceMatrix& d, int a, int b, double value) {
  // value > 0 whenever the triangle was broken; guard against -0.0 noise
  d.set(a, b, std::max(value, 0.0));
}

IomrResult finish(const DistanceMatrix& dp, DistanceMatrix repaired, double tol) {
  IomrResult r;
  r.perturbation = Perturbation::difference(repaired, dp);
  r.residual_broken = count_broken(repaired, tol);
  r.repaired = std::move(repaired);
  return r;
}

}  // namespace

IomrResult iomr_repair(const DistanceMatrix& dp, double tol,
                       const std::optional<std::vector<Triangle>>& triangles) {
  const int n = dp.size();
  const double threshold = violation_threshold(dp, tol);
  DistanceMatrix work = dp;

  if (triangles) {
    for (const Triangle& t : *triangles) {
      validate_triangle(t, n);
      // i is the larger endpoint, matching the full sweep below
      const int i = t.j, j = t.i, k = t.k;
      if (work(i, j) - work(i, k) - work(k, j) > threshold) {
        raise_to(work, i, k, work(i, j) - work(k, j));
      }
    }
  } else {
    for (int k = 0; k < n; ++k) {
      for (int i = 0; i < n; ++i) {
        if (i == k) continue;
        for (int j = 0; j < i; ++j) {
          if (j == k) continue;
          if (work(i, j) - work(i, k) - work(k, j) > threshold) {
            raise_to(work, i, k, work(i, j) - work(k, j));
          }
        }
      }
    }
  }
  return finish(dp, std::move(work), tol);
}

std::string to_string(OracleStrategy s) {
  switch (s) {
    case OracleStrategy::counting:
      return "counting";
    case OracleStrategy::cover:
      return "cover";
    case OracleStrategy::routing:
      return "routing";
  }
  return "counting";
}

OracleStrategy parse_oracle_strategy(const std::string& text) {
  if (text == "counting") return OracleStrategy::counting;
  if (text == "cover") return OracleStrategy::cover;
  if (text == "routing") return OracleStrategy::routing;
  throw std::invalid_argument("unknown oracle strategy '" + text + "'");
}

namespace {

struct CoverState {
  std::vector<Triangle> broken;
  std::vector<Pair> chosen;  // in the order they were marked
};

CoverState greedy_cover(const DistanceMatrix& dp, double tol) {
  CoverState state;
  state.broken = broken_triangles(dp, tol);
  const int n = dp.size();
  std::vector<bool> covered(state.broken.size(), false);
  std::size_t remaining = state.broken.size();
  SymmetricArray<std::int64_t> count(n, 0);
  for (const Triangle& t : state.broken) {
    count.add(t.i, t.k, 1);
    count.add(t.j, t.k, 1);
  }
  while (remaining > 0) {
    Pair best{-1, -1};
    std::int64_t best_count = 0;
    for (int a = 0; a < n; ++a) {
      for (int b = a + 1; b < n; ++b) {
        if (count(a, b) > best_count) {
          best_count = count(a, b);
          best = {a, b};
        }
      }
    }
    state.chosen.push_back(best);
    for (std::size_t t = 0; t < state.broken.size(); ++t) {
      if (covered[t]) continue;
      const Triangle& tri = state.broken[t];
      const Pair r1 = Pair::make(tri.i, tri.k);
      const Pair r2 = Pair::make(tri.j, tri.k);
      if (r1 == best || r2 == best) {
        covered[t] = true;
        --remaining;
        count.add(r1.i, r1.j, -1);
        count.add(r2.i, r2.j, -1);
      }
    }
  }
  return state;
}

OracleMask cover_oracle(const DistanceMatrix& dp, double tol, bool prune) {
  CoverState state = greedy_cover(dp, tol);
  OracleMask q(dp.size());
  for (const Pair& p : state.chosen) q.mark(p.i, p.j);
  if (!prune) return q;

  // Reverse deletion: drop a pair if every triangle it covers has its other
  // right-hand edge marked too.
  for (auto it = state.chosen.rbegin(); it != state.chosen.rend(); ++it) {
    const Pair p = *it;
    bool needed = false;
    for (const Triangle& t : state.broken) {
      const Pair r1 = Pair::make(t.i, t.k);
      const Pair r2 = Pair::make(t.j, t.k);
      if (r1 == p && !q.marked(r2.i, r2.j)) needed = true;
      if (r2 == p && !q.marked(r1.i, r1.j)) needed = true;
      if (needed) break;
    }
    if (!needed) q.mark(p.i, p.j, false);
  }
  return q;
}

void expand_path(const std::vector<int>& via, int n, int s, int t, int depth,
                 SymmetricArray<std::int64_t>& usage) {
  const int k = via[static_cast<std::size_t>(s) * n + t];
  if (k < 0 || depth > n) {
    usage.add(s, t, 1);
    return;
  }
  expand_path(via, n, s, k, depth + 1, usage);
  expand_path(via, n, k, t, depth + 1, usage);
}

OracleMask routing_oracle(const DistanceMatrix& dp, double tol) {
  const int n = dp.size();
  DistanceMatrix closure = dp;
  std::vector<int> via;
  detail::floyd_warshall(closure, violation_threshold(dp, tol), &via);

  SymmetricArray<std::int64_t> usage(n, 0);
  for (int s = 0; s < n; ++s) {
    for (int t = s + 1; t < n; ++t) {
      if (via[static_cast<std::size_t>(s) * n + t] >= 0) expand_path(via, n, s, t, 0, usage);
    }
  }

  std::vector<std::int64_t> nonzero;
  for (int a = 0; a < n; ++a) {
    for (int b = a + 1; b < n; ++b) {
      if (usage(a, b) > 0) nonzero.push_back(usage(a, b));
    }
  }
  OracleMask q(n);
  if (nonzero.empty()) return q;
  std::sort(nonzero.begin(), nonzero.end());
  // nearest-rank 90th percentile
  const auto rank = static_cast<std::size_t>(std::ceil(0.9 * static_cast<double>(nonzero.size())));
  const std::int64_t cut = nonzero[std::max<std::size_t>(rank, 1) - 1];
  for (int a = 0; a < n; ++a) {
    for (int b = a + 1; b < n; ++b) {
      if (usage(a, b) >= cut) q.mark(a, b);
    }
  }
  return q;
}

}  // namespace

OracleMask build_oracle(const DistanceMatrix& dp, OracleStrategy strategy, double tol) {
  switch (strategy) {
    case OracleStrategy::counting:
      return cover_oracle(dp, tol, false);
    case OracleStrategy::cover:
      return cover_oracle(dp, tol, true);
    case OracleStrategy::routing:
      return routing_oracle(dp, tol);
  }
  return OracleMask(dp.size());
}

std::optional<Pair> uncovered_pair(const OracleMask& q) {
  const int n = q.size();
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      if (!q.marked(i, j)) continue;
      bool clean = false;
      for (int k = 0; k < n && !clean; ++k) {
        clean = k != i && k != j && !q.marked(i, k) && !q.marked(j, k);
      }
      if (!clean) return Pair{i, j};
    }
  }
  return std::nullopt;
}

bool oracle_feasible(const DistanceMatrix& dp, const OracleMask& q) {
  if (dp.size() != q.size()) throw std::invalid_argument("oracle size does not match matrix");
  return !uncovered_pair(q).has_value();
}

InfeasibleOracleError::InfeasibleOracleError(Pair pair)
    : std::runtime_error("oracle marks pair (" + std::to_string(pair.i + 1) + "," +
                         std::to_string(pair.j + 1) +
                         ") but every apex touches another marked pair"),
      pair_(pair) {}

IomrResult oracle_iomr(const DistanceMatrix& dp, const OracleMask& q, double tol) {
  if (dp.size() != q.size()) throw std::invalid_argument("oracle size does not match matrix");
  if (auto p = uncovered_pair(q)) throw InfeasibleOracleError(*p);

  const int n = dp.size();
  DistanceMatrix upper = dp;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      if (!q.marked(i, j)) continue;
      double bound = std::numeric_limits<double>::infinity();
      for (int k = 0; k < n; ++k) {
        if (k == i || k == j || q.marked(i, k) || q.marked(j, k)) continue;
        bound = std::min(bound, dp(i, k) + dp(j, k));
      }
      upper.set(i, j, std::max(dp(i, j), bound));
    }
  }

  detail::floyd_warshall(upper, violation_threshold(upper, tol));

  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      if (upper(i, j) < dp(i, j)) upper.set(i, j, dp(i, j));
    }
  }
  return finish(dp, std::move(upper), tol);
}

}  // namespace metric_repair

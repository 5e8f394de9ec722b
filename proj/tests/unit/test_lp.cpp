#include <doctest.h>

#include <array>
#include <cmath>
#include <limits>
#include <optional>
#include <sstream>

#include "metric_repair/instances.hpp"
#include "metric_repair/l1.hpp"
#include "metric_repair/lp.hpp"

using namespace metric_repair;
using namespace metric_repair::lp;

namespace {

// Brute-force optimum of  min c^T x  over  A x <= b, x >= 0  in two variables,
// by enumerating intersections of every pair of boundary lines.
std::optional<double> vertex_optimum(const std::vector<std::array<double, 3>>& rows, double c0, double c1) {
  std::vector<std::array<double, 3>> lines = rows;
  lines.push_back({-1.0, 0.0, 0.0});
  lines.push_back({0.0, -1.0, 0.0});
  std::optional<double> best;
  for (std::size_t a = 0; a < lines.size(); ++a) {
    for (std::size_t b = a + 1; b < lines.size(); ++b) {
      const auto& p = lines[a];
      const auto& q = lines[b];
      const double det = p[0] * q[1] - p[1] * q[0];
      if (std::abs(det) < 1e-12) continue;
      const double x = (p[2] * q[1] - p[1] * q[2]) / det;
      const double y = (p[0] * q[2] - p[2] * q[0]) / det;
      bool ok = x >= -1e-9 && y >= -1e-9;
      for (const auto& r : rows) ok = ok && r[0] * x + r[1] * y <= r[2] + 1e-9;
      if (!ok) continue;
      const double v = c0 * x + c1 * y;
      if (!best || v < *best) best = v;
    }
  }
  return best;
}

}  // namespace

TEST_SUITE("lp") {
  TEST_CASE("single bound") {
    LpInstance m;
    const int x = m.add_variable("x", 1.0);
    m.constraints.push_back({"c", {{x, 1.0}}, Sense::greater_equal, 2.0});
    const LpSolution s = solve_lp(m);
    REQUIRE(s.status == LpStatus::optimal);
    CHECK(s.x[x] == doctest::Approx(2.0));
    CHECK(s.objective == doctest::Approx(2.0));
  }

  TEST_CASE("degenerate optimal face") {
    LpInstance m;
    const int x = m.add_variable("x", 1.0);
    const int y = m.add_variable("y", 1.0);
    m.constraints.push_back({"c", {{x, 1.0}, {y, 1.0}}, Sense::greater_equal, 1.0});
    const LpSolution s = solve_lp(m);
    REQUIRE(s.status == LpStatus::optimal);
    CHECK(s.objective == doctest::Approx(1.0));
    CHECK(s.max_violation <= 1e-9);
  }

  TEST_CASE("DOMR LP for 1-2-7") {
    const DistanceMatrix d = DistanceMatrix::from_upper(3, {7, 1, 2});
    const LpInstance m = build_metric_lp(d, RepairMode::decrease_only);
    const LpSolution s = solve_lp(m);
    REQUIRE(s.status == LpStatus::optimal);
    CHECK(s.objective == doctest::Approx(4.0).epsilon(1e-7));
    const Perturbation p = perturbation_from_lp(d, s.x);
    CHECK(p.entries().size() == 1);
    CHECK(p.get(0, 1) == doctest::Approx(-4.0).epsilon(1e-7));
  }

  TEST_CASE("infeasible and unbounded are reported") {
    LpInstance inf;
    const int x = inf.add_variable("x", 1.0);
    const int y = inf.add_variable("y", 1.0);
    inf.constraints.push_back({"a", {{x, 1.0}, {y, 1.0}}, Sense::less_equal, 1.0});
    inf.constraints.push_back({"b", {{x, 1.0}, {y, 1.0}}, Sense::greater_equal, 2.0});
    CHECK(solve_lp(inf).status == LpStatus::infeasible);

    LpInstance bounds;
    const int z = bounds.add_variable("z", 0.0);
    bounds.constraints.push_back({"a", {{z, 1.0}}, Sense::less_equal, 1.0});
    bounds.constraints.push_back({"b", {{z, 1.0}}, Sense::greater_equal, 2.0});
    CHECK(solve_lp(bounds).status == LpStatus::infeasible);

    LpInstance unb;
    const int u = unb.add_variable("u", -1.0);
    const int v = unb.add_variable("v", 0.0);
    unb.constraints.push_back({"a", {{u, 1.0}, {v, -1.0}}, Sense::less_equal, 1.0});
    CHECK(solve_lp(unb).status == LpStatus::unbounded);
  }

  TEST_CASE("equality rows") {
    LpInstance m;
    const int x = m.add_variable("x", 1.0);
    const int y = m.add_variable("y", 2.0);
    m.constraints.push_back({"e", {{x, 1.0}, {y, 1.0}}, Sense::equal, 3.0});
    m.constraints.push_back({"l", {{x, 1.0}, {y, -1.0}}, Sense::less_equal, 1.0});
    const LpSolution s = solve_lp(m);
    REQUIRE(s.status == LpStatus::optimal);
    CHECK(s.x[x] == doctest::Approx(2.0));
    CHECK(s.x[y] == doctest::Approx(1.0));
    CHECK(s.objective == doctest::Approx(4.0));
  }

  TEST_CASE("iteration cap is its own error") {
    const DistanceMatrix d = gen_random(InstanceKind::uniform, 8, 1.0, 3);
    SolverOptions o;
    o.max_iterations = 2;
    CHECK_THROWS_AS(solve_lp(build_metric_lp(d, RepairMode::general), o), IterationLimitError);
  }

  TEST_CASE("unknown variable in a row") {
    LpInstance m;
    m.add_variable("x", 1.0);
    m.constraints.push_back({"bad", {{5, 1.0}}, Sense::less_equal, 1.0});
    CHECK_THROWS_AS(solve_lp(m), std::invalid_argument);
  }

  TEST_CASE("random two-variable LPs match vertex enumeration") {
    Rng rng(7);
    int checked = 0;
    for (int trial = 0; trial < 200; ++trial) {
      std::vector<std::array<double, 3>> rows;
      const int m = 1 + static_cast<int>(rng.below(5));
      for (int r = 0; r < m; ++r) {
        rows.push_back({rng.uniform(-2, 2), rng.uniform(-2, 2), rng.uniform(-1, 3)});
      }
      // a box keeps every instance bounded
      rows.push_back({1.0, 0.0, 10.0});
      rows.push_back({0.0, 1.0, 10.0});
      const double c0 = rng.uniform(-1, 1), c1 = rng.uniform(-1, 1);

      LpInstance lp;
      const int x = lp.add_variable("x", c0);
      const int y = lp.add_variable("y", c1);
      for (const auto& r : rows) lp.constraints.push_back({"", {{x, r[0]}, {y, r[1]}}, Sense::less_equal, r[2]});
      const LpSolution s = solve_lp(lp);
      const auto want = vertex_optimum(rows, c0, c1);
      if (!want) {
        CHECK(s.status == LpStatus::infeasible);
        continue;
      }
      REQUIRE(s.status == LpStatus::optimal);
      CHECK(s.objective == doctest::Approx(*want).epsilon(1e-7));
      CHECK(s.max_violation <= 1e-7);
      ++checked;
    }
    CHECK(checked > 50);
  }

  TEST_CASE("LP text format") {
    LpInstance m;
    const int x = m.add_variable("x", 1.0);
    const int y = m.add_variable("y", -2.5);
    m.constraints.push_back({"r1", {{x, 1.0}, {y, -1.0}}, Sense::less_equal, 4.0});
    m.constraints.push_back({"r2", {{y, 3.0}}, Sense::greater_equal, 1.0});
    m.constraints.push_back({"r3", {{x, -1.0}}, Sense::equal, -2.0});
    std::ostringstream out;
    write_lp_format(out, m, "demo");
    CHECK(out.str() ==
          "\\ demo\n"
          "Minimize\n obj: x - 2.5 y\n"
          "Subject To\n"
          " r1: x - y <= 4\n"
          " r2: 3 y >= 1\n"
          " r3: - x = -2\n"
          "End\n");

    LpInstance unnamed;
    const int z = unnamed.add_variable("z", 0.0);
    unnamed.constraints.push_back({"", {{z, 2.0}}, Sense::less_equal, 1.0});
    std::ostringstream u;
    write_lp_format(u, unnamed);
    CHECK(u.str() == "Minimize\n obj: 0 z\nSubject To\n c1: 2 z <= 1\nEnd\n");
  }
}

#include <doctest.h>

#include "metric_repair/l1.hpp"
#include "metric_repair/repair.hpp"
#include "oracles.hpp"

using namespace metric_repair;
using oracle::triple;

TEST_SUITE("repair") {
  TEST_CASE("algorithm ids") {
    CHECK(algorithm_ids().size() == 8);
    CHECK(is_algorithm("oracle-iomr"));
    CHECK_FALSE(is_algorithm("oracle_iomr"));
  }

  TEST_CASE("mode resolution") {
    using M = RepairMode;
    CHECK(resolve_mode("fw-domr", std::nullopt) == M::decrease_only);
    CHECK(resolve_mode("fw-prior", M::decrease_only) == M::decrease_only);
    CHECK_THROWS_AS(resolve_mode("fw-domr", M::general), UsageError);
    CHECK(resolve_mode("iomr", std::nullopt) == M::increase_only);
    CHECK_THROWS_AS(resolve_mode("oracle-iomr", M::decrease_only), UsageError);
    CHECK(resolve_mode("heuristic", std::nullopt) == M::general);
    CHECK_THROWS_AS(resolve_mode("heuristic", M::increase_only), UsageError);
    CHECK(resolve_mode("shift", M::increase_only) == M::increase_only);
    CHECK_THROWS_AS(resolve_mode("shift", M::decrease_only), UsageError);
    CHECK(resolve_mode("l1", std::nullopt) == M::general);
    CHECK(resolve_mode("irl1", M::decrease_only) == M::decrease_only);
    CHECK_THROWS_AS(resolve_mode("annealing", std::nullopt), UsageError);
  }

  TEST_CASE("every algorithm repairs 1-2-7") {
    const DistanceMatrix d = triple(7, 1, 2);
    for (const std::string& algo : algorithm_ids()) {
      CAPTURE(algo);
      const RepairOutcome o = run_repair(algo, d);
      CHECK(o.residual_broken == 0);
      CHECK(is_metric(o.repaired, o.residual_tol));
      CHECK(o.mode == resolve_mode(algo, std::nullopt));
      const bool lp = algo == "l1" || algo == "irl1";
      CHECK(o.residual_tol == (lp ? kLpTolerance : kDefaultTolerance));
    }
    CHECK(run_repair("fw-prior", d).perturbation.get(0, 1) == -4.0);
  }

  TEST_CASE("explicit oracle overrides the strategy") {
    RepairOptions o;
    OracleMask q(3);
    q.mark(0, 2);
    o.oracle = q;
    const RepairOutcome r = run_repair("oracle-iomr", triple(4, 0.5, 3), o);
    CHECK(r.perturbation.get(0, 2) == 6.5);

    OracleMask all(3);
    all.mark(0, 1);
    all.mark(0, 2);
    all.mark(1, 2);
    o.oracle = all;
    CHECK_THROWS_AS(run_repair("oracle-iomr", triple(4, 0.5, 3), o), InfeasibleOracleError);
  }

  TEST_CASE("l1 in decrease mode through the dispatcher") {
    RepairOptions o;
    o.mode = RepairMode::decrease_only;
    const RepairOutcome r = run_repair("l1", triple(7, 1, 2), o);
    CHECK(r.mode == RepairMode::decrease_only);
    CHECK(r.perturbation.l1_norm() == doctest::Approx(4.0));
  }
}

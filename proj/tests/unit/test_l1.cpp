#include <doctest.h>

#include <stdexcept>

#include "metric_repair/domr.hpp"
#include "metric_repair/instances.hpp"
#include "metric_repair/l1.hpp"
#include "oracles.hpp"

using namespace metric_repair;
using oracle::triple;

namespace {

DistanceMatrix ones_with_long_12() {
  DistanceMatrix d = oracle::constant(4, 1.0);
  d.set(0, 1, 5.0);
  return d;
}

void check_sign(const Perturbation& p, RepairMode mode) {
  for (const auto& [pair, v] : p.entries()) {
    if (mode == RepairMode::decrease_only) CHECK(v <= 0.0);
    if (mode == RepairMode::increase_only) CHECK(v >= 0.0);
  }
}

}  // namespace

TEST_SUITE("l1") {
  TEST_CASE("build_metric_lp shape") {
    const lp::LpInstance g3 = build_metric_lp(triple(7, 1, 2), RepairMode::general);
    CHECK(g3.variable_count() == 6);
    CHECK(g3.constraints.size() == 3 + 3);

    const lp::LpInstance g4 = build_metric_lp(oracle::constant(4, 1.0), RepairMode::general);
    CHECK(g4.variable_count() == 12);
    CHECK(g4.constraints.size() == 12 + 6);

    const lp::LpInstance d4 = build_metric_lp(oracle::constant(4, 1.0), RepairMode::decrease_only);
    CHECK(d4.constraints.size() == 12 + 6 + 6);

    CHECK(g3.variable_names[0] == "p_1_2_pos");
    CHECK(g3.variable_names[1] == "p_1_2_neg");
    CHECK(g3.variable_names[5] == "p_2_3_neg");
  }

  TEST_CASE("zero weights give a zero objective") {
    const DistanceMatrix d = triple(7, 1, 2);
    SymmetricArray<double> zero(3, 0.0);
    const lp::LpInstance m = build_metric_lp(d, RepairMode::general, zero);
    for (double c : m.objective) CHECK(c == 0.0);
    const lp::LpSolution s = lp::solve_lp(m);
    REQUIRE(s.status == lp::LpStatus::optimal);
    CHECK(s.objective == 0.0);
    CHECK(s.max_violation <= 1e-9);
  }

  TEST_CASE("bad weights") {
    SymmetricArray<double> w(3, 1.0);
    w.set(0, 1, -1.0);
    CHECK_THROWS_AS(build_metric_lp(triple(7, 1, 2), RepairMode::general, w), std::invalid_argument);
    CHECK_THROWS_AS(build_metric_lp(triple(7, 1, 2), RepairMode::general, SymmetricArray<double>(4, 1.0)),
                    std::invalid_argument);
  }

  TEST_CASE("l1 on 1-2-7") {
    const L1Result dec = l1_repair(triple(7, 1, 2), RepairMode::decrease_only);
    REQUIRE(dec.solver_status == lp::LpStatus::optimal);
    CHECK(dec.objective_value == doctest::Approx(4.0).epsilon(1e-7));
    CHECK(dec.perturbation.get(0, 1) == doctest::Approx(-4.0).epsilon(1e-7));
    CHECK(dec.perturbation.support_size_scaled(7.0) == 1);

    const L1Result gen = l1_repair(triple(7, 1, 2), RepairMode::general);
    CHECK(gen.objective_value == doctest::Approx(4.0).epsilon(1e-7));
    CHECK(gen.residual_broken == 0);
    CHECK(gen.iterations == 1);
  }

  TEST_CASE("l1 on a metric is zero in every mode") {
    for (RepairMode m : {RepairMode::decrease_only, RepairMode::increase_only, RepairMode::general}) {
      const L1Result r = l1_repair(triple(3, 4, 5), m);
      CHECK(r.objective_value == 0.0);
      CHECK(r.perturbation.empty());
    }
  }

  TEST_CASE("irl1 examples") {
    const L1Result metric = irl1_repair(triple(3, 4, 5), RepairMode::general);
    CHECK(metric.perturbation.empty());
    CHECK(metric.iterations <= 2);

    const DistanceMatrix d = triple(7, 1, 2);
    const L1Result r = irl1_repair(d, RepairMode::general);
    CHECK(r.perturbation.support_size_scaled(d.max_entry()) == 1);
    CHECK(r.residual_broken == 0);
    for (const auto& [pair, v] : r.perturbation.entries()) {
      if (std::abs(v) > kSupportThreshold * d.max_entry()) CHECK(oracle::one_sparse_repair_exists(d, pair));
    }

    const DistanceMatrix d4 = ones_with_long_12();
    CHECK(oracle::one_sparse_repair_exists(d4, Pair{0, 1}));
    const L1Result r4 = irl1_repair(d4, RepairMode::general);
    CHECK(r4.perturbation.support_size_scaled(d4.max_entry()) == 1);
    CHECK(r4.residual_broken == 0);
  }

  TEST_CASE("irl1 argument checks") {
    Irl1Options o;
    o.iterations = 0;
    CHECK_THROWS_AS(irl1_repair(triple(7, 1, 2), RepairMode::general, o), std::invalid_argument);
    o.iterations = 3;
    o.relative_epsilon = 0.0;
    CHECK_THROWS_AS(irl1_repair(triple(7, 1, 2), RepairMode::general, o), std::invalid_argument);
  }
}

TEST_SUITE("properties") {
  TEST_CASE("l1 repairs are feasible, signed by mode, and DOMR matches APSP") {
    for (std::uint64_t seed = 1; seed <= 12; ++seed) {
      const int n = 4 + static_cast<int>(seed % 7);
      const DistanceMatrix d = gen_metric({InstanceKind::euclidean, n, 2, 0.0, 1.0, seed});
      const Corrupted c = perturb(d, {d.pair_count() / 4, CorruptionSign::mixed, 0.125, seed});
      const double scale = c.dp.max_entry();
      for (RepairMode m : {RepairMode::decrease_only, RepairMode::increase_only, RepairMode::general}) {
        const lp::LpInstance model = build_metric_lp(c.dp, m);
        const lp::LpSolution s = lp::solve_lp(model);
        REQUIRE(s.status == lp::LpStatus::optimal);
        CHECK(s.max_violation <= 1e-7 * scale);

        const L1Result r = l1_repair(c.dp, m);
        CHECK(r.residual_broken == 0);
        CHECK(is_metric(r.repaired, kLpTolerance));
        check_sign(r.perturbation, m);
        if (m == RepairMode::decrease_only) {
          const double apsp = fw_domr(c.dp).perturbation.l1_norm();
          CHECK(r.objective_value == doctest::Approx(apsp).epsilon(1e-6));
        }
      }
    }
  }

  TEST_CASE("irl1 weighted objectives and final support") {
    for (std::uint64_t seed = 1; seed <= 6; ++seed) {
      const DistanceMatrix d = gen_metric({InstanceKind::euclidean, 9, 2, 0.0, 1.0, seed});
      const Corrupted c = perturb(d, {6, CorruptionSign::mixed, 0.125, seed});
      const L1Result r = irl1_repair(c.dp, RepairMode::general);
      REQUIRE(r.history.size() >= 1);
      CHECK(r.history.size() == static_cast<std::size_t>(r.iterations));
      CHECK(r.residual_broken == 0);
      CHECK(r.history.back().support == r.perturbation.support_size_scaled(c.dp.max_entry()));
      MESSAGE("seed " << seed << ": support " << r.history.front().support << " -> "
                      << r.history.back().support);
    }
  }
}

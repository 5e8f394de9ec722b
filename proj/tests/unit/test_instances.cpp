#include <doctest.h>

#include <cmath>
#include <set>
#include <stdexcept>

#include "metric_repair/instances.hpp"

using namespace metric_repair;

namespace {

bool integral(const DistanceMatrix& d) {
  for (double v : std::vector<double>(d.row(0), d.row(0) + d.size() * d.size())) {
    if (v != std::floor(v)) return false;
  }
  return true;
}

}  // namespace

TEST_SUITE("instances") {
  TEST_CASE("splitmix64 reference values") {
    // first outputs of the reference splitmix64 generator seeded with 0
    CHECK(splitmix64(0) == 0xe220a8397b1dcdafULL);
    CHECK(derive_seed(5, {1, 2}) == derive_seed(5, {1, 2}));
    CHECK(derive_seed(5, {1, 2}) != derive_seed(5, {2, 1}));
    CHECK(derive_seed(5, {}) != derive_seed(6, {}));
  }

  TEST_CASE("Rng ranges") {
    Rng rng(42);
    for (int i = 0; i < 1000; ++i) {
      const double u = rng.uniform();
      CHECK(u >= 0.0);
      CHECK(u < 1.0);
      CHECK(rng.below(7) < 7);
      CHECK(rng.exponential(2.0) >= 0.0);
    }
    Rng a(9, Stream::support), b(9, Stream::values);
    CHECK(a.next() != b.next());
  }

  TEST_CASE("euclidean instances") {
    const DistanceMatrix two = gen_metric({InstanceKind::euclidean, 2, 2, 0.0, 1.0, 11});
    CHECK(two.size() == 2);
    CHECK(two(0, 1) > 0.0);
    CHECK(two(0, 1) <= std::sqrt(2.0));

    const DistanceMatrix five = gen_metric({InstanceKind::euclidean, 5, 2, 0.0, 1.0, 1});
    CHECK(is_metric(five, 1e-12));
    for (int i = 0; i < 5; ++i) {
      for (int j = i + 1; j < 5; ++j) CHECK(five(i, j) > 0.0);
    }
    CHECK(gen_metric({InstanceKind::euclidean, 5, 2, 0.0, 1.0, 1}) == five);
    CHECK_FALSE(gen_metric({InstanceKind::euclidean, 5, 2, 0.0, 1.0, 2}) == five);

    const DistanceMatrix cube = gen_metric({InstanceKind::euclidean, 6, 3, 0.0, 1.0, 4});
    CHECK(cube.max_entry() <= std::sqrt(3.0));
  }

  TEST_CASE("er_path instances") {
    CHECK(default_edge_probability(50) == doctest::Approx(2.0 * std::log(50.0) / 50.0));
    int diameter_le4 = 0;
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
      const DistanceMatrix d = gen_metric({InstanceKind::er_path, 50, 2, 0.0, 1.0, seed});
      CHECK(is_metric(d, 0.0));
      CHECK(integral(d));
      if (d.max_entry() <= 4.0) ++diameter_le4;
    }
    CHECK(diameter_le4 >= 15);

    // p = 1 is the complete graph
    const DistanceMatrix k = gen_metric({InstanceKind::er_path, 6, 2, 1.0, 1.0, 3});
    CHECK(k.max_entry() == 1.0);
    // p tiny cannot produce a connected graph
    CHECK_THROWS_AS(gen_metric({InstanceKind::er_path, 30, 2, 1e-6, 1.0, 3}), std::runtime_error);
  }

  TEST_CASE("random instances") {
    const DistanceMatrix u = gen_random(InstanceKind::uniform, 30, 1.0, 5);
    for (int i = 0; i < 30; ++i) {
      CHECK(u(i, i) == 0.0);
      for (int j = i + 1; j < 30; ++j) {
        CHECK(u(i, j) >= 0.0);
        CHECK(u(i, j) <= 1.0);
      }
    }
    const DistanceMatrix e = gen_random(InstanceKind::exponential, 150, 1.0, 5);
    double sum = 0.0;
    for (int i = 0; i < 150; ++i) {
      for (int j = i + 1; j < 150; ++j) sum += e(i, j);
    }
    CHECK(sum / static_cast<double>(e.pair_count()) == doctest::Approx(1.0).epsilon(0.05));
    CHECK(gen_random(InstanceKind::uniform, 30, 1.0, 5) == u);
    CHECK_THROWS_AS(gen_random(InstanceKind::euclidean, 5, 1.0, 1), std::invalid_argument);
    CHECK_THROWS_AS(gen_random(InstanceKind::exponential, 5, 0.0, 1), std::invalid_argument);
  }

  TEST_CASE("kind and sign names") {
    CHECK(parse_instance_kind("er_path") == InstanceKind::er_path);
    CHECK(parse_instance_kind("er-path") == InstanceKind::er_path);
    CHECK(to_string(InstanceKind::exponential) == "exponential");
    CHECK(parse_corruption_sign("pm1") == CorruptionSign::integer_pm1);
    CHECK(parse_corruption_sign("integer_neg1") == CorruptionSign::integer_neg1);
    CHECK_THROWS_AS(parse_instance_kind("torus"), std::invalid_argument);
  }

  TEST_CASE("perturb contracts") {
    const DistanceMatrix d = gen_metric({InstanceKind::euclidean, 12, 2, 0.0, 1.0, 8});

    const Corrupted none = perturb(d, {0, CorruptionSign::negative, 0.125, 1});
    CHECK(none.dp == d);
    CHECK(none.delta.empty());

    const Corrupted neg = perturb(d, {20, CorruptionSign::negative, 0.125, 2});
    CHECK(neg.delta.support_size(0.0) == 20);
    int decreased = 0;
    for (int i = 0; i < 12; ++i) {
      for (int j = i + 1; j < 12; ++j) {
        CHECK(neg.dp(i, j) <= d(i, j));
        if (neg.dp(i, j) < d(i, j)) ++decreased;
        CHECK(neg.dp(i, j) - neg.delta.get(i, j) == d(i, j));
      }
    }
    CHECK(decreased == 20);
    for (const auto& [pair, v] : neg.delta.entries()) CHECK(v >= -0.125 * d.max_entry());

    const Corrupted pos = perturb(d, {10, CorruptionSign::positive, 0.125, 3});
    for (const auto& [pair, v] : pos.delta.entries()) CHECK(v > 0.0);

    const Corrupted mixed = perturb(d, {30, CorruptionSign::mixed, 0.125, 3});
    CHECK(mixed.delta.support_size(0.0) == 30);

    CHECK_THROWS_AS(perturb(d, {67, CorruptionSign::negative, 0.125, 1}), std::invalid_argument);
    CHECK(perturb(d, {66, CorruptionSign::negative, 0.125, 1}).delta.support_size(0.0) == 66);
    CHECK(perturb(d, {20, CorruptionSign::negative, 0.125, 2}).dp == neg.dp);
  }

  TEST_CASE("integer corruption of path metrics") {
    const DistanceMatrix d = gen_metric({InstanceKind::er_path, 30, 2, 0.0, 1.0, 4});
    const Corrupted pm = perturb(d, {40, CorruptionSign::integer_pm1, 0.125, 9});
    CHECK(pm.delta.support_size(0.0) == 40);
    std::set<double> values;
    for (const auto& [pair, v] : pm.delta.entries()) values.insert(v);
    for (double v : values) CHECK((v == 1.0 || v == -1.0));
    CHECK(integral(pm.dp));

    const Corrupted neg1 = perturb(d, {40, CorruptionSign::integer_neg1, 0.125, 9});
    for (const auto& [pair, v] : neg1.delta.entries()) CHECK(v == -1.0);
  }

  TEST_CASE("a corruption that must go negative is an error") {
    // every distance is 1; -1 would give zero, which is allowed, so use a
    // zero matrix where any decrease is impossible
    const DistanceMatrix z(5);
    CHECK_THROWS_AS(perturb(z, {3, CorruptionSign::integer_neg1, 0.125, 1}), std::runtime_error);
  }

  TEST_CASE("broken fraction at minimal size") {
    const double f = broken_fraction(InstanceKind::uniform, 3, 1.0, 20000, 17);
    CHECK(f == doctest::Approx(1.0 / 6.0).epsilon(0.03));
  }
}

TEST_SUITE("properties") {
  TEST_CASE("generated metrics pass exact metricity") {
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
      const int n = 3 + static_cast<int>(seed * 7 % 40);
      CHECK(is_metric(gen_metric({InstanceKind::er_path, n, 2, 0.0, 1.0, seed}), 0.0));
      CHECK(is_metric(gen_metric({InstanceKind::euclidean, n, 1 + static_cast<int>(seed % 3), 0.0, 1.0, seed}),
                      1e-12));
    }
  }

  TEST_CASE("perturb round-trips bit-exactly and hits exactly k pairs") {
    for (std::uint64_t seed = 1; seed <= 30; ++seed) {
      const int n = 4 + static_cast<int>(seed % 20);
      const DistanceMatrix d = gen_metric({InstanceKind::euclidean, n, 2, 0.0, 1.0, seed});
      const std::int64_t k = static_cast<std::int64_t>(seed) % (d.pair_count() + 1);
      const auto sign = static_cast<CorruptionSign>(seed % 3);
      const Corrupted c = perturb(d, {k, sign, 0.125, seed});
      CHECK(c.delta.support_size(0.0) == k);
      for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) CHECK(c.dp(i, j) - c.delta.get(i, j) == d(i, j));
      }
    }
  }
}

#pragma once

// Seeded instance generators, corruption injection, and the Monte Carlo
// estimate of the broken-triangle fraction for random matrices.
//
// Randomness comes from std::mt19937_64 engines whose seeds are derived from
// a base seed with splitmix64, one engine per named stream. Uniform and
// exponential variates are computed here rather than through <random>
// distributions, whose output is implementation-defined.

#include <cstdint>
#include <initializer_list>
#include <random>
#include <string>
#include <utility>

#include "metric_repair/core.hpp"

namespace metric_repair {

std::uint64_t splitmix64(std::uint64_t x);

/// Folds a path of stream labels into a base seed.
std::uint64_t derive_seed(std::uint64_t base, std::initializer_list<std::uint64_t> path);

enum class Stream : std::uint64_t {
  instance = 1,
  support = 2,
  values = 3,
  trial = 4,
};

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  Rng(std::uint64_t seed, Stream stream, std::uint64_t index = 0)
      : engine_(derive_seed(seed, {static_cast<std::uint64_t>(stream), index})) {}

  std::uint64_t next() { return engine_(); }
  /// Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  /// Uniform integer in [0, bound), unbiased.
  std::uint64_t below(std::uint64_t bound);
  double exponential(double lambda);
  bool bernoulli(double p) { return uniform() < p; }

 private:
  std::mt19937_64 engine_;
};

enum class InstanceKind { euclidean, er_path, uniform, exponential };

std::string to_string(InstanceKind kind);
InstanceKind parse_instance_kind(const std::string& text);

struct InstanceSpec {
  InstanceKind kind = InstanceKind::euclidean;
  int n = 50;
  int dim = 2;          // euclidean
  double p = 0.0;       // er_path edge probability; <= 0 means 2 ln(n) / n
  double lambda = 1.0;  // exponential rate
  std::uint64_t seed = 1;
};

/// The er_path default edge probability 2 ln(n) / n.
double default_edge_probability(int n);

/// euclidean: distances between n uniform points in [0,1]^dim.
/// er_path: hop-count metric of a connected G(n, p) sample; disconnected
///          samples are redrawn from the next instance stream, at most
///          kMaxGraphRetries times.
/// Throws std::invalid_argument for random kinds or bad parameters and
/// std::runtime_error if no connected graph was drawn.
DistanceMatrix gen_metric(const InstanceSpec& spec);

inline constexpr int kMaxGraphRetries = 100;

/// i.i.d. off-diagonal entries from Unif[0,1] or Exp(param).
DistanceMatrix gen_random(InstanceKind kind, int n, double param, std::uint64_t seed);

/// Dispatches to gen_metric or gen_random.
DistanceMatrix gen_instance(const InstanceSpec& spec);

enum class CorruptionSign { negative, positive, mixed, integer_pm1, integer_neg1 };

std::string to_string(CorruptionSign sign);
CorruptionSign parse_corruption_sign(const std::string& text);

struct CorruptionSpec {
  std::int64_t k = 0;
  CorruptionSign sign = CorruptionSign::negative;
  double scale = 0.125;  // fraction of max_entry(D) for continuous signs
  std::uint64_t seed = 1;
};

struct Corrupted {
  DistanceMatrix dp;
  Perturbation delta;
};

/// Picks k distinct pairs uniformly and adds a value to each:
///   negative     U[-s M, 0)      positive  U(0, s M]     mixed  U[-s M, s M] \ {0}
///   integer_pm1  -1 or +1        integer_neg1  -1
/// with M = max_entry(D). Continuous values come from the part of their
/// range that keeps the entry nonnegative. An integer value that would make
/// an entry negative, or any value that would not round-trip exactly through
/// D' - delta, is redrawn.
/// Throws std::invalid_argument if k exceeds the pair count and
/// std::runtime_error if a pair cannot be corrupted within the retry cap.
Corrupted perturb(const DistanceMatrix& d, const CorruptionSpec& spec);

inline constexpr int kMaxValueRetries = 100;

/// Mean over trials of |broken_triangles| / triangle_count(n) for fresh
/// gen_random draws; trial t uses derive_seed(seed, {trial, t}).
double broken_fraction(InstanceKind kind, int n, double param, int trials, std::uint64_t seed);

}  // namespace metric_repair

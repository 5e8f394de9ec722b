#include "metric_repair/instances.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <stdexcept>
#include <vector>

namespace metric_repair {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t base, std::initializer_list<std::uint64_t> path) {
  std::uint64_t s = splitmix64(base);
  for (std::uint64_t label : path) s = splitmix64(s ^ splitmix64(label));
  return s;
}

std::uint64_t Rng::below(std::uint64_t bound) {
  if (bound == 0) throw std::invalid_argument("empty range");
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              std::numeric_limits<std::uint64_t>::max() % bound;
  std::uint64_t v;
  do {
    v = engine_();
  } while (v >= limit);
  return v % bound;
}

double Rng::exponential(double lambda) { return -std::log1p(-uniform()) / lambda; }

std::string to_string(InstanceKind kind) {
  switch (kind) {
    case InstanceKind::euclidean:
      return "euclidean";
    case InstanceKind::er_path:
      return "er_path";
    case InstanceKind::uniform:
      return "uniform";
    case InstanceKind::exponential:
      return "exponential";
  }
  return "euclidean";
}

InstanceKind parse_instance_kind(const std::string& text) {
  if (text == "euclidean") return InstanceKind::euclidean;
  if (text == "er_path" || text == "er-path") return InstanceKind::er_path;
  if (text == "uniform") return InstanceKind::uniform;
  if (text == "exponential") return InstanceKind::exponential;
  throw std::invalid_argument("unknown instance kind '" + text + "'");
}

double default_edge_probability(int n) {
  return n > 1 ? 2.0 * std::log(static_cast<double>(n)) / n : 1.0;
}

namespace {

DistanceMatrix euclidean(int n, int dim, std::uint64_t seed) {
  if (dim < 1) throw std::invalid_argument("dimension must be positive");
  Rng rng(seed, Stream::instance);
  std::vector<double> pts(static_cast<std::size_t>(n) * dim);
  for (double& x : pts) x = rng.uniform();
  DistanceMatrix d(n);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      double s = 0.0;
      for (int c = 0; c < dim; ++c) {
        const double diff = pts[i * dim + c] - pts[j * dim + c];
        s += diff * diff;
      }
      d.set(i, j, std::sqrt(s));
    }
  }
  return d;
}

DistanceMatrix er_path(int n, double p, std::uint64_t seed) {
  if (p <= 0.0) p = default_edge_probability(n);
  if (p > 1.0) throw std::invalid_argument("edge probability must be at most 1");
  for (int attempt = 0; attempt < kMaxGraphRetries; ++attempt) {
    Rng rng(seed, Stream::instance, static_cast<std::uint64_t>(attempt));
    std::vector<std::vector<int>> adj(n);
    for (int i = 0; i < n; ++i) {
      for (int j = i + 1; j < n; ++j) {
        if (rng.bernoulli(p)) {
          adj[i].push_back(j);
          adj[j].push_back(i);
        }
      }
    }
    DistanceMatrix d(n);
    bool connected = true;
    for (int s = 0; s < n && connected; ++s) {
      std::vector<int> hops(n, -1);
      std::queue<int> frontier;
      hops[s] = 0;
      frontier.push(s);
      while (!frontier.empty()) {
        const int u = frontier.front();
        frontier.pop();
        for (int v : adj[u]) {
          if (hops[v] < 0) {
            hops[v] = hops[u] + 1;
            frontier.push(v);
          }
        }
      }
      for (int t = s + 1; t < n; ++t) {
        if (hops[t] < 0) {
          connected = false;
          break;
        }
        d.set(s, t, hops[t]);
      }
    }
    if (connected) return d;
  }
  throw std::runtime_error("no connected G(n, p) sample after " +
                           std::to_string(kMaxGraphRetries) + " draws");
}

}  // namespace

DistanceMatrix gen_metric(const InstanceSpec& spec) {
  if (spec.n < 1) throw std::invalid_argument("n must be positive");
  switch (spec.kind) {
    case InstanceKind::euclidean:
      return euclidean(spec.n, spec.dim, spec.seed);
    case InstanceKind::er_path:
      return er_path(spec.n, spec.p, spec.seed);
    default:
      throw std::invalid_argument(to_string(spec.kind) + " is not a metric instance kind");
  }
}

DistanceMatrix gen_random(InstanceKind kind, int n, double param, std::uint64_t seed) {
  if (n < 1) throw std::invalid_argument("n must be positive");
  if (kind != InstanceKind::uniform && kind != InstanceKind::exponential) {
    throw std::invalid_argument(to_string(kind) + " is not a random instance kind");
  }
  if (kind == InstanceKind::exponential && !(param > 0.0)) {
    throw std::invalid_argument("exponential rate must be positive");
  }
  Rng rng(seed, Stream::instance);
  DistanceMatrix d(n);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      d.set(i, j, kind == InstanceKind::uniform ? rng.uniform() : rng.exponential(param));
    }
  }
  return d;
}

DistanceMatrix gen_instance(const InstanceSpec& spec) {
  switch (spec.kind) {
    case InstanceKind::uniform:
      return gen_random(spec.kind, spec.n, 1.0, spec.seed);
    case InstanceKind::exponential:
      return gen_random(spec.kind, spec.n, spec.lambda, spec.seed);
    default:
      return gen_metric(spec);
  }
}

std::string to_string(CorruptionSign sign) {
  switch (sign) {
    case CorruptionSign::negative:
      return "negative";
    case CorruptionSign::positive:
      return "positive";
    case CorruptionSign::mixed:
      return "mixed";
    case CorruptionSign::integer_pm1:
      return "integer_pm1";
    case CorruptionSign::integer_neg1:
      return "integer_neg1";
  }
  return "negative";
}

CorruptionSign parse_corruption_sign(const std::string& text) {
  if (text == "negative") return CorruptionSign::negative;
  if (text == "positive") return CorruptionSign::positive;
  if (text == "mixed") return CorruptionSign::mixed;
  if (text == "integer_pm1" || text == "pm1") return CorruptionSign::integer_pm1;
  if (text == "integer_neg1" || text == "neg1") return CorruptionSign::integer_neg1;
  throw std::invalid_argument("unknown corruption sign '" + text + "'");
}

namespace {

// `room` is how far the entry may decrease. Continuous values are drawn from
// the admissible part of their range directly, which has the same law as
// redrawing until the entry stays nonnegative.
double draw_value(Rng& rng, CorruptionSign sign, double width, double room) {
  const double down = std::min(width, room);
  switch (sign) {
    case CorruptionSign::negative:
      return -down * (1.0 - rng.uniform());  // [-down, 0)
    case CorruptionSign::positive:
      return width * (1.0 - rng.uniform());  // (0, width]
    case CorruptionSign::mixed:
      return -down + (width + down) * rng.uniform();  // [-down, width)
    case CorruptionSign::integer_pm1:
      return rng.bernoulli(0.5) ? 1.0 : -1.0;
    case CorruptionSign::integer_neg1:
      return -1.0;
  }
  return 0.0;
}

}  // namespace

Corrupted perturb(const DistanceMatrix& d, const CorruptionSpec& spec) {
  const int n = d.size();
  const std::int64_t pairs = d.pair_count();
  if (spec.k < 0 || spec.k > pairs) {
    throw std::invalid_argument("cannot corrupt " + std::to_string(spec.k) + " of " +
                                std::to_string(pairs) + " pairs");
  }
  if (!(spec.scale > 0.0)) throw std::invalid_argument("corruption scale must be positive");

  std::vector<Pair> all;
  all.reserve(static_cast<std::size_t>(pairs));
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) all.push_back({i, j});
  }
  Rng support_rng(spec.seed, Stream::support);
  for (std::int64_t t = 0; t < spec.k; ++t) {
    const auto pick = t + static_cast<std::int64_t>(support_rng.below(pairs - t));
    std::swap(all[t], all[pick]);
  }
  std::vector<Pair> chosen(all.begin(), all.begin() + spec.k);
  std::sort(chosen.begin(), chosen.end());

  const double width = spec.scale * d.max_entry();
  Rng value_rng(spec.seed, Stream::values);
  Corrupted out{d, Perturbation(n)};
  for (const Pair& pr : chosen) {
    const double base = d(pr.i, pr.j);
    bool placed = false;
    for (int attempt = 0; attempt < kMaxValueRetries && !placed; ++attempt) {
      const double v = draw_value(value_rng, spec.sign, width, base);
      const double corrupted = base + v;
      if (!(corrupted >= 0.0)) continue;
      const double delta = corrupted - base;
      if (delta == 0.0 || corrupted - delta != base) continue;
      out.dp.set(pr.i, pr.j, corrupted);
      out.delta.set(pr.i, pr.j, delta);
      placed = true;
    }
    if (!placed) {
      throw std::runtime_error("could not corrupt pair (" + std::to_string(pr.i + 1) + "," +
                               std::to_string(pr.j + 1) +
                               ") without a negative distance or a zero change");
    }
  }
  return out;
}

double broken_fraction(InstanceKind kind, int n, double param, int trials, std::uint64_t seed) {
  if (trials < 1) throw std::invalid_argument("trials must be positive");
  if (n < 3) throw std::invalid_argument("n must be at least 3");
  const double total = static_cast<double>(triangle_count(n));
  double sum = 0.0;
  for (int t = 0; t < trials; ++t) {
    const std::uint64_t s = derive_seed(seed, {static_cast<std::uint64_t>(Stream::trial),
                                               static_cast<std::uint64_t>(t)});
    sum += static_cast<double>(count_broken(gen_random(kind, n, param, s), 0.0)) / total;
  }
  return sum / trials;
}

}  // namespace metric_repair

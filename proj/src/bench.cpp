#include "metric_repair/bench.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <map>
#include <ostream>
#include <stdexcept>
#include <thread>

#include "metric_repair/lp.hpp"
#include "metric_repair/repair.hpp"

namespace metric_repair::bench {

namespace {

bool is_random(InstanceKind kind) {
  return kind == InstanceKind::uniform || kind == InstanceKind::exponential;
}

}  // namespace

void BenchConfig::validate() const {
  if (sizes.empty()) throw std::invalid_argument("no instance sizes given");
  for (int n : sizes) {
    if (n < 3) throw std::invalid_argument("instance size must be at least 3");
  }
  if (!is_random(kind)) {
    if (grid.empty()) throw std::invalid_argument("empty sparsity grid");
    for (double g : grid) {
      if (!(g >= 0.0 && g <= 1.0)) throw std::invalid_argument("grid levels must lie in [0, 1]");
    }
  }
  if (trials < 1) throw std::invalid_argument("trials must be positive");
  if (algos.empty()) throw std::invalid_argument("no algorithms given");
  for (const std::string& a : algos) {
    if (!is_algorithm(a)) throw std::invalid_argument("unknown algorithm '" + a + "'");
    if (a == "l1" || a == "irl1") resolve_mode(a, mode);
  }
  if (!(scale > 0.0)) throw std::invalid_argument("corruption scale must be positive");
  if (irl1_iterations < 1) throw std::invalid_argument("irl1 iterations must be positive");
  if (threads < 1) throw std::invalid_argument("threads must be positive");
  if (!(tol >= 0.0)) throw std::invalid_argument("tolerance must be nonnegative");
}

std::uint64_t trial_seed(std::uint64_t base, int n, int level_index, int trial) {
  return derive_seed(base, {static_cast<std::uint64_t>(n), static_cast<std::uint64_t>(level_index),
                            static_cast<std::uint64_t>(trial)});
}

namespace {

struct Job {
  int n;
  int level_index;
  std::optional<double> level;
  int trial;
};

bool integral(const Perturbation& p) {
  for (const auto& [pair, v] : p.entries()) {
    if (std::abs(v - std::round(v)) > 1e-6) return false;
  }
  return true;
}

std::vector<BenchRecord> run_job(const BenchConfig& c, const Job& job) {
  const std::uint64_t seed = trial_seed(c.seed, job.n, job.level_index, job.trial);

  InstanceSpec spec;
  spec.kind = c.kind;
  spec.n = job.n;
  spec.dim = c.dim;
  spec.p = c.p;
  spec.seed = derive_seed(seed, {static_cast<std::uint64_t>(Stream::instance)});
  const DistanceMatrix base = gen_instance(spec);

  DistanceMatrix dp = base;
  std::optional<Perturbation> delta;
  if (job.level) {
    CorruptionSpec cs;
    cs.k = std::llround(*job.level * static_cast<double>(base.pair_count()));
    cs.sign = c.sign;
    cs.scale = c.scale;
    cs.seed = derive_seed(seed, {static_cast<std::uint64_t>(Stream::support)});
    Corrupted corrupted = perturb(base, cs);
    dp = std::move(corrupted.dp);
    delta = std::move(corrupted.delta);
  }
  const double scale = dp.max_entry();
  const std::int64_t initial_broken = count_broken(dp, c.tol);

  RepairOptions options;
  options.tol = c.tol;
  options.oracle_strategy = c.oracle;
  options.irl1_iterations = c.irl1_iterations;

  std::vector<BenchRecord> out;
  for (const std::string& algo : c.algos) {
    BenchRecord r;
    r.kind = to_string(c.kind);
    r.n = job.n;
    r.level_index = job.level_index;
    r.level = job.level;
    r.trial = job.trial;
    r.seed = seed;
    r.algo = algo;
    if (delta) {
      r.input_support = delta->support_size(0.0);
      r.input_l1 = delta->l1_norm();
    }
    r.initial_broken = initial_broken;

    options.mode = (algo == "l1" || algo == "irl1") ? std::optional<RepairMode>(c.mode) : std::nullopt;
    try {
      const auto start = std::chrono::steady_clock::now();
      RepairOutcome o = run_repair(algo, dp, options);
      const auto stop = std::chrono::steady_clock::now();
      r.ms = std::chrono::duration<double, std::milli>(stop - start).count();
      r.output_support = o.perturbation.support_size_scaled(scale);
      r.output_l1 = o.perturbation.l1_norm();
      r.output_integral = integral(o.perturbation);
      r.residual_broken = o.residual_broken;
    } catch (const InfeasibleOracleError&) {
      r.status = "infeasible_oracle";
    } catch (const lp::IterationLimitError&) {
      r.status = "iteration_limit";
    } catch (const lp::SolverError&) {
      r.status = "solver_error";
    }
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace

std::vector<BenchRecord> run(const BenchConfig& config) {
  config.validate();
  std::vector<Job> jobs;
  for (int n : config.sizes) {
    if (is_random(config.kind)) {
      for (int t = 0; t < config.trials; ++t) jobs.push_back({n, 0, std::nullopt, t});
    } else {
      for (std::size_t l = 0; l < config.grid.size(); ++l) {
        for (int t = 0; t < config.trials; ++t) {
          jobs.push_back({n, static_cast<int>(l), config.grid[l], t});
        }
      }
    }
  }

  std::vector<std::vector<BenchRecord>> results(jobs.size());
  std::vector<std::exception_ptr> errors(jobs.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t j; (j = next.fetch_add(1)) < jobs.size();) {
      try {
        results[j] = run_job(config, jobs[j]);
      } catch (...) {
        errors[j] = std::current_exception();
      }
    }
  };
  const int threads = std::min<int>(config.threads, static_cast<int>(jobs.size()));
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }

  // Jobs are already in (n, level, trial) order and each job lists its
  // algorithms in config order.
  std::vector<BenchRecord> rows;
  for (auto& r : results) {
    for (auto& rec : r) rows.push_back(std::move(rec));
  }
  return rows;
}

namespace {

double median(std::vector<double> v) {
  if (v.empty()) return 0.0;
  std::sort(v.begin(), v.end());
  const std::size_t m = v.size() / 2;
  return v.size() % 2 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

double mean(const std::vector<double>& v) {
  if (v.empty()) return 0.0;
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

using LevelKey = std::tuple<std::string, int, int>;  // kind, n, level index

}  // namespace

std::vector<Aggregate> aggregate(const std::vector<BenchRecord>& rows) {
  struct Acc {
    Aggregate a;
    std::vector<double> input, output, l1, residual, ms;
  };
  std::vector<Acc> accs;
  std::map<std::tuple<std::string, int, int, std::string>, std::size_t> index;
  for (const BenchRecord& r : rows) {
    const auto key = std::make_tuple(r.kind, r.n, r.level_index, r.algo);
    auto it = index.find(key);
    if (it == index.end()) {
      it = index.emplace(key, accs.size()).first;
      Acc acc;
      acc.a.kind = r.kind;
      acc.a.n = r.n;
      acc.a.level = r.level;
      acc.a.algo = r.algo;
      accs.push_back(std::move(acc));
    }
    Acc& acc = accs[it->second];
    if (r.status != "ok") {
      ++acc.a.trials_failed;
      continue;
    }
    ++acc.a.trials_ok;
    if (r.input_support) acc.input.push_back(static_cast<double>(*r.input_support));
    acc.output.push_back(static_cast<double>(r.output_support));
    acc.l1.push_back(r.output_l1);
    acc.residual.push_back(static_cast<double>(r.residual_broken));
    acc.ms.push_back(r.ms);
    acc.a.max_residual_broken = std::max(acc.a.max_residual_broken, r.residual_broken);
  }
  std::vector<Aggregate> out;
  for (Acc& acc : accs) {
    if (!acc.input.empty()) acc.a.mean_input_support = mean(acc.input);
    acc.a.mean_output_support = mean(acc.output);
    acc.a.median_output_support = median(acc.output);
    acc.a.mean_output_l1 = mean(acc.l1);
    acc.a.mean_residual_broken = mean(acc.residual);
    if (!acc.ms.empty()) acc.a.mean_ms = mean(acc.ms);
    out.push_back(std::move(acc.a));
  }
  return out;
}

std::vector<SupportRatio> iomr_oracle_ratios(const std::vector<BenchRecord>& rows) {
  std::map<std::tuple<std::string, int, int, int>, std::pair<const BenchRecord*, const BenchRecord*>>
      trials;
  std::vector<LevelKey> order;
  std::map<LevelKey, std::pair<std::optional<double>, std::vector<double>>> levels;
  for (const BenchRecord& r : rows) {
    const LevelKey lk{r.kind, r.n, r.level_index};
    if (!levels.count(lk)) {
      order.push_back(lk);
      levels[lk].first = r.level;
    }
    auto& slot = trials[{r.kind, r.n, r.level_index, r.trial}];
    if (r.algo == "iomr") slot.first = &r;
    if (r.algo == "oracle-iomr") slot.second = &r;
  }
  for (const auto& [key, slot] : trials) {
    const auto& [iomr, oracle] = slot;
    if (!iomr || !oracle || iomr->status != "ok" || oracle->status != "ok") continue;
    if (oracle->output_support == 0) continue;
    levels[{std::get<0>(key), std::get<1>(key), std::get<2>(key)}].second.push_back(
        static_cast<double>(iomr->output_support) / static_cast<double>(oracle->output_support));
  }
  std::vector<SupportRatio> out;
  for (const LevelKey& lk : order) {
    const auto& [level, ratios] = levels[lk];
    bool has_both = false;
    for (const auto& [key, slot] : trials) {
      if (std::get<0>(key) == std::get<0>(lk) && std::get<1>(key) == std::get<1>(lk) &&
          std::get<2>(key) == std::get<2>(lk) && slot.first && slot.second) {
        has_both = true;
        break;
      }
    }
    if (!has_both) continue;
    SupportRatio s;
    s.kind = std::get<0>(lk);
    s.n = std::get<1>(lk);
    s.level = level;
    s.trials = static_cast<int>(ratios.size());
    s.mean_ratio = mean(ratios);
    s.max_ratio = ratios.empty() ? 0.0 : *std::max_element(ratios.begin(), ratios.end());
    out.push_back(s);
  }
  return out;
}

namespace {

// Shortest representation that reads back to the same double.
std::string num(double v) {
  char buf[32];
  const auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, end);
}

template <class T>
std::string opt(const std::optional<T>& v) {
  if (!v) return "";
  if constexpr (std::is_floating_point_v<T>) {
    return num(*v);
  } else {
    return std::to_string(*v);
  }
}

std::string millis(double ms) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", ms);
  return buf;
}

}  // namespace

void write_csv(std::ostream& out, const std::vector<BenchRecord>& rows, bool timing) {
  out << "kind,n,level_index,level,trial,seed,algo,status,input_support,input_fraction,"
         "input_l1,initial_broken,output_support,output_fraction,output_l1,output_integral,"
         "residual_broken,residual_triangle_fraction,residual_pair_fraction,ms\n";
  for (const BenchRecord& r : rows) {
    const double pairs = static_cast<double>(r.n) * (r.n - 1) / 2.0;
    const double triangles = static_cast<double>(triangle_count(r.n));
    out << r.kind << ',' << r.n << ',' << r.level_index << ',' << opt(r.level) << ',' << r.trial
        << ',' << r.seed << ',' << r.algo << ',' << r.status << ',' << opt(r.input_support) << ','
        << (r.input_support ? num(static_cast<double>(*r.input_support) / pairs) : "") << ','
        << opt(r.input_l1) << ',' << r.initial_broken << ',';
    if (r.status == "ok") {
      out << r.output_support << ',' << num(static_cast<double>(r.output_support) / pairs) << ','
          << num(r.output_l1) << ',' << (r.output_integral ? 1 : 0) << ',' << r.residual_broken
          << ',' << num(static_cast<double>(r.residual_broken) / triangles) << ','
          << num(static_cast<double>(r.residual_broken) / pairs) << ','
          << (timing ? millis(r.ms) : "");
    } else {
      out << ",,,,,,,";
    }
    out << '\n';
  }

  out << "\n# aggregate\n";
  out << "kind,n,level,algo,trials_ok,trials_failed,mean_input_support,mean_output_support,"
         "median_output_support,mean_output_fraction,mean_output_l1,mean_residual_broken,"
         "max_residual_broken,mean_ms\n";
  for (const Aggregate& a : aggregate(rows)) {
    const double pairs = static_cast<double>(a.n) * (a.n - 1) / 2.0;
    out << a.kind << ',' << a.n << ',' << opt(a.level) << ',' << a.algo << ',' << a.trials_ok << ','
        << a.trials_failed << ',' << opt(a.mean_input_support) << ',' << num(a.mean_output_support)
        << ',' << num(a.median_output_support) << ',' << num(a.mean_output_support / pairs) << ','
        << num(a.mean_output_l1) << ',' << num(a.mean_residual_broken) << ','
        << a.max_residual_broken << ',' << (timing && a.mean_ms ? millis(*a.mean_ms) : "") << '\n';
  }

  const auto ratios = iomr_oracle_ratios(rows);
  if (!ratios.empty()) {
    out << "\n# iomr_over_oracle\n";
    out << "kind,n,level,trials,mean_support_ratio,max_support_ratio\n";
    for (const SupportRatio& s : ratios) {
      out << s.kind << ',' << s.n << ',' << opt(s.level) << ',' << s.trials << ','
          << num(s.mean_ratio) << ',' << num(s.max_ratio) << '\n';
    }
  }
}

}  // namespace metric_repair::bench

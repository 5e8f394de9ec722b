// metric_repair: generate, check, repair and benchmark distance matrices.
//
// Exit codes: 0 ok / metric, 1 non-metric or incomplete repair,
// 2 usage or parse error, 3 internal solver failure.

#include <CLI11.hpp>

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "metric_repair/bench.hpp"
#include "metric_repair/core.hpp"
#include "metric_repair/instances.hpp"
#include "metric_repair/io.hpp"
#include "metric_repair/l1.hpp"
#include "metric_repair/lp.hpp"
#include "metric_repair/repair.hpp"

namespace mr = metric_repair;

namespace {

constexpr int kOk = 0;
constexpr int kNotMetric = 1;
constexpr int kUsage = 2;
constexpr int kSolver = 3;

struct UsageFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

double default_tolerance() {
  const char* env = std::getenv("METRIC_REPAIR_TOL");
  if (!env || !*env) return mr::kDefaultTolerance;
  char* end = nullptr;
  const double v = std::strtod(env, &end);
  if (*end != '\0' || !(v >= 0.0)) {
    throw UsageFailure(std::string("METRIC_REPAIR_TOL: not a nonnegative number '") + env + "'");
  }
  return v;
}

std::string millis(double ms) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", ms);
  return buf;
}

// Writes to a file, or to stdout for "-" or an empty path.
template <class Fn>
void emit(const std::string& path, Fn&& fn) {
  if (path.empty() || path == "-") {
    fn(std::cout);
    return;
  }
  std::ofstream out(path);
  if (!out) throw std::runtime_error(path + ": cannot open for writing");
  fn(out);
  out.flush();
  if (!out) throw std::runtime_error(path + ": write failed");
}

struct GenArgs {
  std::string kind = "euclidean";
  int n = 50;
  int dim = 2;
  double p = 0.0;
  double lambda = 1.0;
  std::uint64_t seed = 1;
  std::string out;
  std::optional<std::int64_t> k;
  std::optional<double> fraction;
  std::string sign = "negative";
  double scale = 0.125;
  std::optional<std::uint64_t> corrupt_seed;
  std::string corrupted_out;
  std::string delta_out;
};

int cmd_gen(const GenArgs& a) {
  mr::InstanceSpec spec;
  spec.kind = mr::parse_instance_kind(a.kind);
  spec.n = a.n;
  spec.dim = a.dim;
  spec.p = a.p;
  spec.lambda = a.lambda;
  spec.seed = a.seed;
  const mr::DistanceMatrix d = mr::gen_instance(spec);

  const bool corrupt = a.k || a.fraction;
  if (corrupt && (a.corrupted_out.empty() || a.delta_out.empty())) {
    throw UsageFailure("corruption needs --corrupted-out and --delta-out");
  }
  if (a.k && a.fraction) throw UsageFailure("give --corrupt or --corrupt-fraction, not both");
  emit(a.out, [&](std::ostream& o) { mr::io::write_matrix(o, d); });
  if (!corrupt) return kOk;

  mr::CorruptionSpec cs;
  cs.k = a.k ? *a.k : std::llround(*a.fraction * static_cast<double>(d.pair_count()));
  cs.sign = mr::parse_corruption_sign(a.sign);
  cs.scale = a.scale;
  cs.seed = a.corrupt_seed ? *a.corrupt_seed : mr::derive_seed(a.seed, {0xC0});
  const mr::Corrupted c = mr::perturb(d, cs);
  mr::io::save_matrix(a.corrupted_out, c.dp);
  mr::io::save_perturbation(a.delta_out, c.delta);
  return kOk;
}

int cmd_check(const std::string& path, std::optional<double> tol, bool list) {
  const mr::DistanceMatrix d = mr::io::load_matrix(path);
  const double t = tol ? *tol : default_tolerance();
  const auto broken = mr::broken_triangles(d, t);
  std::cout << broken.size() << " broken / " << mr::triangle_count(d.size()) << " triangles\n";
  if (list) {
    // edge {i,j}, apex k, 1-indexed
    for (const mr::Triangle& tr : broken) {
      std::cout << tr.i + 1 << ',' << tr.j + 1 << ',' << tr.k + 1 << '\n';
    }
  }
  return broken.empty() ? kOk : kNotMetric;
}

struct RepairArgs {
  std::string input;
  std::string algo;
  std::string mode;
  std::string oracle_file;
  std::string oracle_strategy;
  std::optional<double> tol;
  int irl1_iterations = 10;
  std::string out;
  std::string perturbation_out;
};

int cmd_repair(const RepairArgs& a) {
  if (!mr::is_algorithm(a.algo)) throw UsageFailure("unknown algorithm '" + a.algo + "'");
  if (!a.oracle_file.empty() && !a.oracle_strategy.empty()) {
    throw UsageFailure("give --oracle or --oracle-strategy, not both");
  }
  const bool oracle_algo = a.algo == "oracle-iomr";
  if (oracle_algo && a.oracle_file.empty() && a.oracle_strategy.empty()) {
    throw UsageFailure("oracle-iomr needs --oracle FILE or --oracle-strategy");
  }
  if (!oracle_algo && (!a.oracle_file.empty() || !a.oracle_strategy.empty())) {
    throw UsageFailure("--oracle and --oracle-strategy only apply to oracle-iomr");
  }

  const mr::DistanceMatrix dp = mr::io::load_matrix(a.input);
  mr::RepairOptions options;
  options.tol = a.tol ? *a.tol : default_tolerance();
  options.irl1_iterations = a.irl1_iterations;
  if (!a.mode.empty()) options.mode = mr::parse_repair_mode(a.mode);
  mr::resolve_mode(a.algo, options.mode);
  if (!a.oracle_file.empty()) options.oracle = mr::io::load_oracle(a.oracle_file, dp.size());
  if (!a.oracle_strategy.empty()) {
    options.oracle_strategy = mr::parse_oracle_strategy(a.oracle_strategy);
  }

  const auto start = std::chrono::steady_clock::now();
  const mr::RepairOutcome r = mr::run_repair(a.algo, dp, options);
  const auto stop = std::chrono::steady_clock::now();
  const double ms = std::chrono::duration<double, std::milli>(stop - start).count();

  if (!a.out.empty()) mr::io::save_matrix(a.out, r.repaired);
  if (!a.perturbation_out.empty()) mr::io::save_perturbation(a.perturbation_out, r.perturbation);

  std::cout << "algo: " << a.algo << '\n'
            << "mode: " << mr::to_string(r.mode) << '\n'
            << "support: " << r.perturbation.support_size_scaled(dp.max_entry()) << '\n'
            << "l1: " << mr::io::format_number(r.perturbation.l1_norm()) << '\n'
            << "residual_broken: " << r.residual_broken << '\n'
            << "residual_tol: " << mr::io::format_number(r.residual_tol) << '\n'
            << "elapsed_ms: " << millis(ms) << '\n';
  return r.residual_broken == 0 ? kOk : kNotMetric;
}

int cmd_export_lp(const std::string& input, const std::string& mode, const std::string& out) {
  const mr::DistanceMatrix dp = mr::io::load_matrix(input);
  const mr::RepairMode m = mr::parse_repair_mode(mode);
  const auto lp = mr::build_metric_lp(dp, m);
  emit(out, [&](std::ostream& o) {
    mr::lp::write_lp_format(o, lp, "l1 metric repair, mode " + mr::to_string(m) + ", n = " +
                                       std::to_string(dp.size()));
  });
  return kOk;
}

struct BenchArgs {
  std::string kind = "euclidean";
  std::vector<int> sizes{50};
  std::vector<double> grid;
  int trials = 10;
  std::vector<std::string> algos;
  std::uint64_t seed = 1;
  std::string sign = "negative";
  double scale = 0.125;
  int dim = 2;
  double p = 0.0;
  std::string mode = "general";
  std::string oracle_strategy = "counting";
  int irl1_iterations = 10;
  std::optional<double> tol;
  int threads = 1;
  bool no_timing = false;
  std::string out;
};

int cmd_bench(const BenchArgs& a) {
  mr::bench::BenchConfig c;
  c.kind = mr::parse_instance_kind(a.kind);
  c.sizes = a.sizes;
  if (!a.grid.empty()) c.grid = a.grid;
  c.trials = a.trials;
  if (!a.algos.empty()) c.algos = a.algos;
  c.seed = a.seed;
  c.sign = mr::parse_corruption_sign(a.sign);
  c.scale = a.scale;
  c.dim = a.dim;
  c.p = a.p;
  c.mode = mr::parse_repair_mode(a.mode);
  c.oracle = mr::parse_oracle_strategy(a.oracle_strategy);
  c.irl1_iterations = a.irl1_iterations;
  c.tol = a.tol ? *a.tol : default_tolerance();
  c.threads = a.threads;
  c.timing = !a.no_timing;
  c.validate();

  const auto rows = mr::bench::run(c);
  emit(a.out, [&](std::ostream& o) { mr::bench::write_csv(o, rows, c.timing); });
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sparse metric repair of distance matrices"};
  app.require_subcommand(1);

  GenArgs gen;
  auto* g = app.add_subcommand("gen", "Generate an instance, optionally corrupted");
  g->add_option("--kind", gen.kind, "euclidean, er_path, uniform or exponential")
      ->capture_default_str();
  g->add_option("-n,--n", gen.n, "Number of points")->capture_default_str();
  g->add_option("--dim", gen.dim, "Euclidean dimension")->capture_default_str();
  g->add_option("--p", gen.p, "er_path edge probability (default 2 ln(n)/n)");
  g->add_option("--lambda", gen.lambda, "Exponential rate")->capture_default_str();
  g->add_option("--seed", gen.seed, "Instance seed")->capture_default_str();
  g->add_option("-o,--out", gen.out, "Matrix file (default stdout)");
  g->add_option("--corrupt", gen.k, "Number of corrupted pairs");
  g->add_option("--corrupt-fraction", gen.fraction, "Corrupted pairs as a fraction of n(n-1)/2");
  g->add_option("--sign", gen.sign, "negative, positive, mixed, integer_pm1 or integer_neg1")
      ->capture_default_str();
  g->add_option("--scale", gen.scale, "Corruption width as a fraction of the largest entry")
      ->capture_default_str();
  g->add_option("--corrupt-seed", gen.corrupt_seed, "Corruption seed (default derived from --seed)");
  g->add_option("--corrupted-out", gen.corrupted_out, "Corrupted matrix file");
  g->add_option("--delta-out", gen.delta_out, "Ground-truth corruption file");

  std::string check_path;
  std::optional<double> check_tol;
  bool list_broken = false;
  auto* ch = app.add_subcommand("check", "Count broken triangles");
  ch->add_option("matrix", check_path, "Matrix file")->required();
  ch->add_option("--tol", check_tol, "Relative tolerance");
  ch->add_flag("--list-broken", list_broken, "List broken triangles as i,j,k (apex k)");

  RepairArgs rep;
  auto* r = app.add_subcommand("repair", "Repair a matrix");
  r->add_option("matrix", rep.input, "Matrix file")->required();
  r->add_option("--algo", rep.algo,
                "fw-domr, fw-prior, iomr, oracle-iomr, heuristic, shift, l1 or irl1")
      ->required();
  r->add_option("--mode", rep.mode, "decrease, increase or general");
  r->add_option("--oracle", rep.oracle_file, "Oracle file for oracle-iomr");
  r->add_option("--oracle-strategy", rep.oracle_strategy, "counting, cover or routing");
  r->add_option("--tol", rep.tol, "Relative tolerance");
  r->add_option("--irl1-iterations", rep.irl1_iterations, "IR-l1 iterations")
      ->capture_default_str();
  r->add_option("-o,--out", rep.out, "Repaired matrix file");
  r->add_option("--perturbation", rep.perturbation_out, "Perturbation file");

  std::string lp_input, lp_mode = "general", lp_out;
  auto* e = app.add_subcommand("export-lp", "Write the l1 repair LP in CPLEX LP format");
  e->add_option("matrix", lp_input, "Matrix file")->required();
  e->add_option("--mode", lp_mode, "decrease, increase or general")->capture_default_str();
  e->add_option("-o,--out", lp_out, "LP file (default stdout)");

  BenchArgs bench;
  auto* b = app.add_subcommand("bench", "Run the sparsity and runtime benchmark");
  b->add_option("--kind", bench.kind, "Instance kind")->capture_default_str();
  b->add_option("--n", bench.sizes, "Instance sizes")->delimiter(',');
  b->add_option("--grid", bench.grid, "Corruption levels as fractions of n(n-1)/2")
      ->delimiter(',');
  b->add_option("--trials", bench.trials, "Trials per level")->capture_default_str();
  b->add_option("--algos", bench.algos, "Algorithms")->delimiter(',');
  b->add_option("--seed", bench.seed, "Base seed")->capture_default_str();
  b->add_option("--sign", bench.sign, "Corruption sign")->capture_default_str();
  b->add_option("--scale", bench.scale, "Corruption width")->capture_default_str();
  b->add_option("--dim", bench.dim, "Euclidean dimension")->capture_default_str();
  b->add_option("--p", bench.p, "er_path edge probability");
  b->add_option("--mode", bench.mode, "Mode for l1 and irl1")->capture_default_str();
  b->add_option("--oracle-strategy", bench.oracle_strategy, "Oracle for oracle-iomr")
      ->capture_default_str();
  b->add_option("--irl1-iterations", bench.irl1_iterations, "IR-l1 iterations")
      ->capture_default_str();
  b->add_option("--tol", bench.tol, "Relative tolerance");
  b->add_option("--threads", bench.threads, "Worker threads")->capture_default_str();
  b->add_flag("--no-timing", bench.no_timing, "Leave timing columns empty");
  b->add_option("-o,--out", bench.out, "CSV file (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& err) {
    const int code = app.exit(err);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*g) return cmd_gen(gen);
    if (*ch) return cmd_check(check_path, check_tol, list_broken);
    if (*r) return cmd_repair(rep);
    if (*e) return cmd_export_lp(lp_input, lp_mode, lp_out);
    if (*b) return cmd_bench(bench);
  } catch (const mr::InfeasibleOracleError& err) {
    std::cerr << "error: " << err.what() << '\n';
    return kUsage;
  } catch (const mr::lp::IterationLimitError& err) {
    std::cerr << "solver failure: " << err.what() << '\n';
    return kSolver;
  } catch (const mr::lp::SolverError& err) {
    std::cerr << "solver failure: " << err.what() << '\n';
    return kSolver;
  } catch (const mr::io::ParseError& err) {
    std::cerr << "parse error: " << err.what() << '\n';
    return kUsage;
  } catch (const std::invalid_argument& err) {
    std::cerr << "error: " << err.what() << '\n';
    return kUsage;
  } catch (const UsageFailure& err) {
    std::cerr << "error: " << err.what() << '\n';
    return kUsage;
  } catch (const std::exception& err) {
    std::cerr << "error: " << err.what() << '\n';
    return kUsage;
  }
  return kUsage;
}

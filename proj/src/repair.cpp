#include "metric_repair/repair.hpp"

#include <algorithm>

#include "metric_repair/domr.hpp"
#include "metric_repair/general.hpp"
#include "metric_repair/l1.hpp"

namespace metric_repair {

const std::vector<std::string>& algorithm_ids() {
  static const std::vector<std::string> ids{"fw-domr",   "fw-prior", "iomr", "oracle-iomr",
                                            "heuristic", "shift",    "l1",   "irl1"};
  return ids;
}

bool is_algorithm(const std::string& id) {
  const auto& ids = algorithm_ids();
  return std::find(ids.begin(), ids.end(), id) != ids.end();
}

RepairMode resolve_mode(const std::string& algo, const std::optional<RepairMode>& requested) {
  if (!is_algorithm(algo)) throw UsageError("unknown algorithm '" + algo + "'");
  std::vector<RepairMode> allowed;
  if (algo == "fw-domr" || algo == "fw-prior") {
    allowed = {RepairMode::decrease_only};
  } else if (algo == "iomr" || algo == "oracle-iomr") {
    allowed = {RepairMode::increase_only};
  } else if (algo == "heuristic") {
    allowed = {RepairMode::general};
  } else if (algo == "shift") {
    allowed = {RepairMode::general, RepairMode::increase_only};
  } else {
    allowed = {RepairMode::general, RepairMode::decrease_only, RepairMode::increase_only};
  }
  if (!requested) return allowed.front();
  if (std::find(allowed.begin(), allowed.end(), *requested) == allowed.end()) {
    throw UsageError(algo + " does not support mode '" + to_string(*requested) + "'");
  }
  return *requested;
}

namespace {

template <class R>
RepairOutcome from_result(R&& r, double tol, RepairMode mode) {
  RepairOutcome out;
  out.repaired = std::move(r.repaired);
  out.perturbation = std::move(r.perturbation);
  out.residual_broken = r.residual_broken;
  out.residual_tol = tol;
  out.mode = mode;
  return out;
}

}  // namespace

RepairOutcome run_repair(const std::string& algo, const DistanceMatrix& dp,
                         const RepairOptions& options) {
  const RepairMode mode = resolve_mode(algo, options.mode);
  const double tol = options.tol;

  if (algo == "fw-domr" || algo == "fw-prior") {
    DomrResult r = algo == "fw-domr" ? fw_domr(dp, tol) : fw_prior(dp, broken_triangles(dp, tol), tol);
    RepairOutcome out;
    out.residual_broken = count_broken(r.repaired, tol);
    out.repaired = std::move(r.repaired);
    out.perturbation = std::move(r.perturbation);
    out.residual_tol = tol;
    out.mode = mode;
    return out;
  }
  if (algo == "iomr") return from_result(iomr_repair(dp, tol), tol, mode);
  if (algo == "oracle-iomr") {
    const OracleMask q = options.oracle ? *options.oracle : build_oracle(dp, options.oracle_strategy, tol);
    return from_result(oracle_iomr(dp, q, tol), tol, mode);
  }
  if (algo == "heuristic") return from_result(heuristic_repair(dp, tol), tol, mode);
  if (algo == "shift") return from_result(shift_repair(dp, tol), tol, mode);

  L1Result r;
  if (algo == "l1") {
    r = l1_repair(dp, mode, options.solver);
  } else {
    Irl1Options o;
    o.iterations = options.irl1_iterations;
    o.solver = options.solver;
    r = irl1_repair(dp, mode, o);
  }
  if (r.solver_status != lp::LpStatus::optimal) {
    throw lp::SolverError(algo + ": LP " + lp::to_string(r.solver_status));
  }
  const double lp_tol = std::max(tol, kLpTolerance);
  RepairOutcome out;
  out.residual_broken = count_broken(r.repaired, lp_tol);
  out.repaired = std::move(r.repaired);
  out.perturbation = std::move(r.perturbation);
  out.residual_tol = lp_tol;
  out.mode = mode;
  return out;
}

}  // namespace metric_repair

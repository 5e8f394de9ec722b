#include "metric_repair/lp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <ostream>

#include "internal/simplex.hpp"

namespace metric_repair::lp {

int LpInstance::add_variable(std::string name, double cost) {
  variable_names.push_back(std::move(name));
  objective.push_back(cost);
  return variable_count() - 1;
}

std::string to_string(LpStatus status) {
  switch (status) {
    case LpStatus::optimal:
      return "optimal";
    case LpStatus::infeasible:
      return "infeasible";
    case LpStatus::unbounded:
      return "unbounded";
  }
  return "infeasible";
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Row in "G x >= h" form over the free (non-fixed) variables.
struct GeRow {
  std::vector<std::pair<int, double>> terms;
  double rhs = 0.0;
};

struct Presolved {
  bool infeasible = false;
  std::vector<double> lower;
  std::vector<double> upper;
  std::vector<int> free_index;  // original var -> reduced index, -1 if fixed
  std::vector<int> original;    // reduced index -> original var
  std::vector<double> cost;     // over reduced variables
  std::vector<GeRow> rows;      // shifted so reduced variables are >= 0
};

double value_tol(double v) { return 1e-9 * (1.0 + std::abs(v)); }

Presolved presolve(const LpInstance& lp) {
  const int n = lp.variable_count();
  Presolved p;
  p.lower.assign(n, 0.0);
  p.upper.assign(n, kInf);

  struct Row {
    std::vector<std::pair<int, double>> terms;
    Sense sense;
    double rhs;
  };
  std::vector<Row> rows;

  for (const Constraint& c : lp.constraints) {
    std::map<int, double> merged;
    for (const Term& t : c.terms) {
      if (t.var < 0 || t.var >= n) throw std::invalid_argument("constraint '" + c.name +
                                                               "' references unknown variable");
      merged[t.var] += t.coef;
    }
    std::vector<std::pair<int, double>> terms;
    for (const auto& [v, a] : merged) {
      if (a != 0.0) terms.emplace_back(v, a);
    }

    if (terms.empty()) {
      const bool ok = (c.sense == Sense::less_equal && 0.0 <= c.rhs + value_tol(c.rhs)) ||
                      (c.sense == Sense::greater_equal && 0.0 >= c.rhs - value_tol(c.rhs)) ||
                      (c.sense == Sense::equal && std::abs(c.rhs) <= value_tol(c.rhs));
      if (!ok) p.infeasible = true;
      continue;
    }
    if (terms.size() == 1) {
      const auto [v, a] = terms.front();
      const double bound = c.rhs / a;
      Sense s = c.sense;
      if (a < 0.0 && s != Sense::equal) {
        s = s == Sense::less_equal ? Sense::greater_equal : Sense::less_equal;
      }
      if (s == Sense::less_equal || s == Sense::equal) p.upper[v] = std::min(p.upper[v], bound);
      if (s == Sense::greater_equal || s == Sense::equal) p.lower[v] = std::max(p.lower[v], bound);
      continue;
    }
    rows.push_back({std::move(terms), c.sense, c.rhs});
  }

  p.free_index.assign(n, -1);
  std::vector<double> fixed_value(n, 0.0);
  for (int v = 0; v < n; ++v) {
    if (p.lower[v] > p.upper[v] + value_tol(p.upper[v])) p.infeasible = true;
    if (p.upper[v] - p.lower[v] <= value_tol(p.lower[v])) {
      fixed_value[v] = p.lower[v];
    } else {
      p.free_index[v] = static_cast<int>(p.original.size());
      p.original.push_back(v);
      p.cost.push_back(lp.objective[v]);
      fixed_value[v] = p.lower[v];  // shift
    }
  }
  if (p.infeasible) return p;

  auto push = [&](std::vector<std::pair<int, double>> terms, double rhs) {
    p.rows.push_back({std::move(terms), rhs});
  };
  for (const Row& r : rows) {
    std::vector<std::pair<int, double>> reduced;
    double rhs = r.rhs;
    for (const auto& [v, a] : r.terms) {
      rhs -= a * fixed_value[v];
      if (p.free_index[v] >= 0) reduced.emplace_back(p.free_index[v], a);
    }
    auto negated = reduced;
    for (auto& t : negated) t.second = -t.second;
    switch (r.sense) {
      case Sense::greater_equal:
        push(std::move(reduced), rhs);
        break;
      case Sense::less_equal:
        push(std::move(negated), -rhs);
        break;
      case Sense::equal:
        push(std::move(reduced), rhs);
        push(std::move(negated), -rhs);
        break;
    }
  }
  for (std::size_t r = 0; r < p.original.size(); ++r) {
    const int v = p.original[r];
    if (std::isfinite(p.upper[v])) {
      push({{static_cast<int>(r), -1.0}}, -(p.upper[v] - p.lower[v]));
    }
  }
  return p;
}

// Dual of  min c^T x, G x >= h, x >= 0:  max h^T y, G^T y <= c, y >= 0,
// posed as  min -h^T y,  G^T y + s = c  with rows sign-flipped where c < 0.
detail::StandardForm build_dual(const Presolved& p, const std::vector<double>& cost,
                                std::vector<double>& row_sign) {
  const int m = static_cast<int>(cost.size());
  detail::StandardForm f;
  f.rows = m;
  row_sign.assign(m, 1.0);
  for (int r = 0; r < m; ++r) row_sign[r] = cost[r] < 0.0 ? -1.0 : 1.0;

  std::vector<std::pair<int, double>> entries;
  for (const GeRow& g : p.rows) {
    entries.clear();
    for (const auto& [r, a] : g.terms) entries.emplace_back(r, a * row_sign[r]);
    f.add_column(-g.rhs, entries);
  }
  f.initial_basis.assign(m, -1);
  for (int r = 0; r < m; ++r) {
    const int slack = f.add_column(0.0, {{r, row_sign[r]}});
    if (row_sign[r] > 0.0) f.initial_basis[r] = slack;
  }
  for (int r = 0; r < m; ++r) {
    if (row_sign[r] < 0.0) f.initial_basis[r] = f.add_column(0.0, {{r, 1.0}}, true);
  }
  f.rhs.resize(m);
  for (int r = 0; r < m; ++r) f.rhs[r] = cost[r] * row_sign[r];
  return f;
}

bool rows_feasible_at_zero(const Presolved& p) {
  return std::all_of(p.rows.begin(), p.rows.end(),
                     [](const GeRow& g) { return g.rhs <= value_tol(g.rhs); });
}

}  // namespace

double max_violation(const LpInstance& lp, const std::vector<double>& x) {
  double worst = 0.0;
  for (double v : x) worst = std::max(worst, -v);
  for (const Constraint& c : lp.constraints) {
    double lhs = 0.0;
    for (const Term& t : c.terms) lhs += t.coef * x[t.var];
    switch (c.sense) {
      case Sense::less_equal:
        worst = std::max(worst, lhs - c.rhs);
        break;
      case Sense::greater_equal:
        worst = std::max(worst, c.rhs - lhs);
        break;
      case Sense::equal:
        worst = std::max(worst, std::abs(lhs - c.rhs));
        break;
    }
  }
  return worst;
}

LpSolution solve_lp(const LpInstance& lp, const SolverOptions& options) {
  if (lp.variable_names.size() != lp.objective.size()) {
    throw std::invalid_argument("variable names and objective differ in length");
  }
  const Presolved p = presolve(lp);
  LpSolution sol;
  if (p.infeasible) {
    sol.status = LpStatus::infeasible;
    return sol;
  }

  std::vector<double> reduced(p.original.size(), 0.0);
  if (p.original.empty()) {
    if (!rows_feasible_at_zero(p)) {
      sol.status = LpStatus::infeasible;
      return sol;
    }
  } else {
    std::vector<double> row_sign;
    detail::StandardForm dual = build_dual(p, p.cost, row_sign);
    detail::SimplexResult res = detail::run_simplex(dual, options);
    sol.iterations = res.iterations;
    if (res.status == detail::SimplexStatus::unbounded) {
      sol.status = LpStatus::infeasible;
      return sol;
    }
    if (res.status == detail::SimplexStatus::infeasible) {
      // The dual is infeasible: the primal is unbounded if it is feasible at
      // all, which the zero-cost dual decides.
      std::vector<double> zero(p.original.size(), 0.0);
      detail::StandardForm probe = build_dual(p, zero, row_sign);
      detail::SimplexResult check = detail::run_simplex(probe, options);
      sol.iterations += check.iterations;
      sol.status = check.status == detail::SimplexStatus::unbounded ? LpStatus::infeasible
                                                                    : LpStatus::unbounded;
      return sol;
    }
    for (std::size_t r = 0; r < reduced.size(); ++r) {
      reduced[r] = std::max(0.0, -row_sign[r] * res.duals[r]);
    }
  }

  sol.status = LpStatus::optimal;
  sol.x.assign(lp.variable_count(), 0.0);
  for (int v = 0; v < lp.variable_count(); ++v) {
    const int r = p.free_index[v];
    double value = p.lower[v] + (r >= 0 ? reduced[r] : 0.0);
    if (std::isfinite(p.upper[v])) value = std::min(value, p.upper[v]);
    sol.x[v] = value;
  }
  sol.objective = 0.0;
  for (int v = 0; v < lp.variable_count(); ++v) sol.objective += lp.objective[v] * sol.x[v];
  sol.max_violation = max_violation(lp, sol.x);
  return sol;
}

namespace {

void write_terms(std::ostream& out, const std::vector<Term>& terms,
                 const std::vector<std::string>& names) {
  bool first = true;
  for (const Term& t : terms) {
    if (t.coef == 0.0) continue;
    const double mag = std::abs(t.coef);
    if (first) {
      out << (t.coef < 0 ? "- " : "");
    } else {
      out << (t.coef < 0 ? " - " : " + ");
    }
    if (mag != 1.0) out << mag << ' ';
    out << names[t.var];
    first = false;
  }
  if (first) out << "0 " << (names.empty() ? "x" : names.front());
}

}  // namespace

void write_lp_format(std::ostream& out, const LpInstance& lp, const std::string& comment) {
  const auto old_precision = out.precision(17);
  if (!comment.empty()) out << "\\ " << comment << '\n';
  out << "Minimize\n obj: ";
  std::vector<Term> obj;
  for (int v = 0; v < lp.variable_count(); ++v) obj.push_back({v, lp.objective[v]});
  write_terms(out, obj, lp.variable_names);
  out << "\nSubject To\n";
  for (std::size_t r = 0; r < lp.constraints.size(); ++r) {
    const Constraint& c = lp.constraints[r];
    out << ' ' << (c.name.empty() ? "c" + std::to_string(r + 1) : c.name) << ": ";
    write_terms(out, c.terms, lp.variable_names);
    switch (c.sense) {
      case Sense::less_equal:
        out << " <= ";
        break;
      case Sense::greater_equal:
        out << " >= ";
        break;
      case Sense::equal:
        out << " = ";
        break;
    }
    out << c.rhs << '\n';
  }
  out << "End\n";
  out.precision(old_precision);
}

}  // namespace metric_repair::lp

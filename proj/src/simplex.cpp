#include "internal/simplex.hpp"

#include <Eigen/SparseCore>
#include <Eigen/SparseLU>

#include <algorithm>
#include <cmath>
#include <limits>

namespace metric_repair::lp::detail {

int StandardForm::add_column(double c, const std::vector<std::pair<int, double>>& entries,
                             bool is_artificial) {
  for (const auto& [row, v] : entries) {
    row_index.push_back(row);
    value.push_back(v);
  }
  col_start.push_back(static_cast<std::int64_t>(row_index.size()));
  cost.push_back(c);
  artificial.push_back(is_artificial);
  return columns() - 1;
}

namespace {

using Vector = Eigen::VectorXd;
using SparseMatrix = Eigen::SparseMatrix<double>;
using SparseLu = Eigen::SparseLU<SparseMatrix, Eigen::COLAMDOrdering<int>>;

// LU of a reference basis plus product-form eta updates.
class BasisFactor {
 public:
  explicit BasisFactor(int m) : m_(m) {}

  void factor(const StandardForm& f, const std::vector<int>& basis) {
    std::vector<Eigen::Triplet<double>> b;
    std::vector<Eigen::Triplet<double>> bt;
    for (int r = 0; r < m_; ++r) {
      const int col = basis[r];
      for (auto p = f.col_start[col]; p < f.col_start[col + 1]; ++p) {
        b.emplace_back(f.row_index[p], r, f.value[p]);
        bt.emplace_back(r, f.row_index[p], f.value[p]);
      }
    }
    SparseMatrix bm(m_, m_);
    SparseMatrix btm(m_, m_);
    bm.setFromTriplets(b.begin(), b.end());
    btm.setFromTriplets(bt.begin(), bt.end());
    bm.makeCompressed();
    btm.makeCompressed();
    lu_.analyzePattern(bm);
    lu_.factorize(bm);
    lut_.analyzePattern(btm);
    lut_.factorize(btm);
    if (lu_.info() != Eigen::Success || lut_.info() != Eigen::Success) {
      throw SolverError("simplex basis became numerically singular");
    }
    etas_.clear();
  }

  void ftran(Vector& x) const {
    x = lu_.solve(x).eval();
    for (const Eta& e : etas_) {
      const double xr = x[e.row] / e.pivot;
      x[e.row] = xr;
      if (xr == 0.0) continue;
      for (std::size_t t = 0; t < e.index.size(); ++t) x[e.index[t]] -= e.value[t] * xr;
    }
  }

  void btran(Vector& y) const {
    for (auto it = etas_.rbegin(); it != etas_.rend(); ++it) {
      double s = y[it->row];
      for (std::size_t t = 0; t < it->index.size(); ++t) s -= it->value[t] * y[it->index[t]];
      y[it->row] = s / it->pivot;
    }
    y = lut_.solve(y).eval();
  }

  void update(int row, const Vector& alpha) {
    Eta e;
    e.row = row;
    e.pivot = alpha[row];
    for (int i = 0; i < m_; ++i) {
      if (i != row && alpha[i] != 0.0) {
        e.index.push_back(i);
        e.value.push_back(alpha[i]);
      }
    }
    etas_.push_back(std::move(e));
  }

  int updates() const { return static_cast<int>(etas_.size()); }

 private:
  struct Eta {
    int row = 0;
    double pivot = 1.0;
    std::vector<int> index;
    std::vector<double> value;
  };

  int m_;
  SparseLu lu_;
  SparseLu lut_;
  std::vector<Eta> etas_;
};

class Simplex {
 public:
  Simplex(const StandardForm& f, const SolverOptions& opt)
      : f_(f), opt_(opt), m_(f.rows), n_(f.columns()), factor_(f.rows) {
    basis_ = f.initial_basis;
    position_.assign(n_, -1);
    for (int r = 0; r < m_; ++r) position_[basis_[r]] = r;
    x_ = Eigen::Map<const Vector>(f.rhs.data(), m_);
    rhs_ = x_;
    d_.assign(n_, 0.0);
    weight_.assign(n_, 1.0);
    prow_.assign(n_, 0.0);
    touched_flag_.assign(n_, 0);

    in_set_.assign(n_, 0);
    for (int j = 0; j < n_; ++j) {
      if (position_[j] >= 0 || f.cost[j] < 0.0) add_to_set(j);
    }
    build_rows();
  }

  SimplexResult run() {
    SimplexResult result;
    const bool needs_phase1 =
        std::any_of(basis_.begin(), basis_.end(), [&](int c) { return f_.artificial[c]; });
    if (needs_phase1) {
      std::vector<double> c1(n_, 0.0);
      for (int j = 0; j < n_; ++j) c1[j] = f_.artificial[j] ? 1.0 : 0.0;
      const SimplexStatus s = iterate(c1, true);
      (void)s;  // phase 1 is bounded below by zero
      double infeasibility = 0.0;
      for (int r = 0; r < m_; ++r) {
        if (f_.artificial[basis_[r]]) infeasibility += std::max(x_[r], 0.0);
      }
      const double rhs_scale = 1.0 + (m_ > 0 ? rhs_.cwiseAbs().maxCoeff() : 0.0);
      if (infeasibility > 1e-8 * rhs_scale) {
        result.status = SimplexStatus::infeasible;
        result.iterations = iterations_;
        return result;
      }
    }
    if (needs_phase1) {
      result.status = iterate(f_.cost, false);
    } else {
      result.status = solve_perturbed();
    }
    result.iterations = iterations_;
    result.x.assign(n_, 0.0);
    for (int r = 0; r < m_; ++r) result.x[basis_[r]] = std::max(x_[r], 0.0);
    result.duals.assign(duals_.data(), duals_.data() + m_);
    return result;
  }

 private:
  // Phase 2 from a feasible slack basis. The right-hand side is first raised
  // by small deterministic amounts, which removes most degenerate pivots;
  // the original right-hand side is then restored, primal feasibility is
  // recovered with dual simplex pivots, and a final primal pass confirms
  // optimality.
  SimplexStatus solve_perturbed() {
    const Vector original = rhs_;
    for (int r = 0; r < m_; ++r) {
      const double u = static_cast<double>(mix(static_cast<std::uint64_t>(r)) >> 11) * 0x1.0p-53;
      rhs_[r] += kPerturbation * (1.0 + std::abs(rhs_[r])) * (1.0 + u);
    }
    const SimplexStatus perturbed = iterate(f_.cost, false);
    rhs_ = original;
    if (perturbed == SimplexStatus::unbounded) return perturbed;
    refactor();
    if (!dual_cleanup(f_.cost)) {
      basis_ = f_.initial_basis;
      std::fill(position_.begin(), position_.end(), -1);
      for (int r = 0; r < m_; ++r) position_[basis_[r]] = r;
    }
    return iterate(f_.cost, false);
  }

  static std::uint64_t mix(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
  }

  // Dual simplex pivots until the basic solution is nonnegative. Returns
  // false if some negative row has no eligible entering column.
  bool dual_cleanup(const std::vector<double>& cost) {
    const double rhs_scale = 1.0 + (m_ > 0 ? rhs_.cwiseAbs().maxCoeff() : 0.0);
    const double ftol = opt_.feasibility_tol * rhs_scale;
    Vector rho(m_);
    Vector alpha(m_);
    for (;;) {
      if (factor_.updates() >= opt_.refactor_interval) refactor();
      int row = -1;
      for (int r = 0; r < m_; ++r) {
        if (x_[r] < -ftol && (row < 0 || x_[r] < x_[row])) row = r;
      }
      if (row < 0) return true;
      if (iterations_ >= opt_.max_iterations) throw IterationLimitError(iterations_);

      compute_duals(cost);
      rho.setZero();
      rho[row] = 1.0;
      factor_.btran(rho);
      int entering = -1;
      double best_ratio = std::numeric_limits<double>::infinity();
      double best_alpha = 0.0;
      for (int j = 0; j < n_; ++j) {
        if (position_[j] >= 0 || f_.artificial[j]) continue;
        double a = 0.0;
        for (auto p = f_.col_start[j]; p < f_.col_start[j + 1]; ++p) {
          a += rho[f_.row_index[p]] * f_.value[p];
        }
        if (a >= -kPivotTol) continue;
        const double ratio = std::max(reduced_cost(cost, j), 0.0) / -a;
        if (ratio < best_ratio || (ratio == best_ratio && -a > best_alpha)) {
          best_ratio = ratio;
          best_alpha = -a;
          entering = j;
        }
      }
      if (entering < 0) return false;

      alpha.setZero();
      for (auto p = f_.col_start[entering]; p < f_.col_start[entering + 1]; ++p) {
        alpha[f_.row_index[p]] = f_.value[p];
      }
      factor_.ftran(alpha);
      if (alpha[row] >= -kPivotTol) {
        refactor();
        continue;
      }
      const double theta = x_[row] / alpha[row];
      ++iterations_;
      x_ -= theta * alpha;
      x_[row] = theta;
      position_[basis_[row]] = -1;
      basis_[row] = entering;
      position_[entering] = row;
      factor_.update(row, alpha);
    }
  }

  void refactor() {
    factor_.factor(f_, basis_);
    x_ = rhs_;
    factor_.ftran(x_);
  }

  void compute_duals(const std::vector<double>& cost) {
    duals_.resize(m_);
    for (int r = 0; r < m_; ++r) duals_[r] = cost[basis_[r]];
    factor_.btran(duals_);
  }

  double reduced_cost(const std::vector<double>& cost, int j) const {
    double d = cost[j];
    for (auto p = f_.col_start[j]; p < f_.col_start[j + 1]; ++p) {
      d -= duals_[f_.row_index[p]] * f_.value[p];
    }
    return d;
  }

  void add_to_set(int j) {
    in_set_[j] = 1;
    set_.push_back(j);
  }

  // Row-wise copy of the working-set columns.
  void build_rows() {
    std::sort(set_.begin(), set_.end());
    row_start_.assign(m_ + 1, 0);
    for (int j : set_) {
      for (auto p = f_.col_start[j]; p < f_.col_start[j + 1]; ++p) ++row_start_[f_.row_index[p] + 1];
    }
    for (int r = 0; r < m_; ++r) row_start_[r + 1] += row_start_[r];
    row_col_.resize(static_cast<std::size_t>(row_start_[m_]));
    row_value_.resize(row_col_.size());
    std::vector<std::int64_t> fill(row_start_.begin(), row_start_.end() - 1);
    for (int j : set_) {
      for (auto p = f_.col_start[j]; p < f_.col_start[j + 1]; ++p) {
        const auto q = fill[f_.row_index[p]]++;
        row_col_[q] = j;
        row_value_[q] = f_.value[p];
      }
    }
  }

  // Reduced costs of the working-set columns from fresh duals.
  void recompute_reduced(const std::vector<double>& cost) {
    compute_duals(cost);
    for (int j : set_) d_[j] = position_[j] >= 0 ? 0.0 : reduced_cost(cost, j);
  }

  // Full pricing pass over the columns outside the working set. Adds every
  // improving column and returns how many were added.
  int grow_set(const std::vector<double>& cost, bool allow_artificial, double tol) {
    compute_duals(cost);
    int added = 0;
    for (int j = 0; j < n_; ++j) {
      if (in_set_[j] || (!allow_artificial && f_.artificial[j])) continue;
      const double d = reduced_cost(cost, j);
      if (d < -tol) {
        add_to_set(j);
        d_[j] = d;
        weight_[j] = 1.0;
        ++added;
      }
    }
    if (added > 0) build_rows();
    return added;
  }

  // Devex pricing: the eligible column maximizing d_j^2 / w_j. Bland's rule
  // takes the lowest-index improving column instead.
  int price(bool allow_artificial, double tol) const {
    int best = -1;
    double best_score = 0.0;
    for (int j : set_) {
      if (position_[j] >= 0 || (!allow_artificial && f_.artificial[j])) continue;
      const double d = d_[j];
      if (d >= -tol) continue;
      if (bland_) return j;
      const double score = d * d / weight_[j];
      if (score > best_score) {
        best_score = score;
        best = j;
      }
    }
    return best;
  }

  // Row `row` of B^-1 A over the columns, accumulated row-wise so the cost
  // follows the sparsity of e_row^T B^-1.
  void pivot_row(int row, Vector& rho) {
    rho.setZero();
    rho[row] = 1.0;
    factor_.btran(rho);
    for (int i = 0; i < m_; ++i) {
      const double r = rho[i];
      if (r == 0.0) continue;
      for (auto p = row_start_[i]; p < row_start_[i + 1]; ++p) {
        const int j = row_col_[p];
        if (!touched_flag_[j]) {
          touched_flag_[j] = 1;
          touched_.push_back(j);
        }
        prow_[j] += r * row_value_[p];
      }
    }
  }

  // Returns the leaving row or -1 if the direction is unbounded.
  int ratio_test(const Vector& alpha, bool phase2, double& theta) const {
    const double amax = m_ > 0 ? alpha.cwiseAbs().maxCoeff() : 0.0;
    const double ptol = 1e-9 * std::max(1.0, amax);

    if (phase2) {
      // A zero-level artificial left over from phase 1 must not grow.
      int row = -1;
      for (int i = 0; i < m_; ++i) {
        if (f_.artificial[basis_[i]] && std::abs(alpha[i]) > ptol &&
            (row < 0 || std::abs(alpha[i]) > std::abs(alpha[row]))) {
          row = i;
        }
      }
      if (row >= 0) {
        theta = 0.0;
        return row;
      }
    }

    if (bland_) {
      int row = -1;
      double best = std::numeric_limits<double>::infinity();
      for (int i = 0; i < m_; ++i) {
        if (alpha[i] <= ptol) continue;
        const double t = std::max(x_[i], 0.0) / alpha[i];
        const double slack = 1e-12 * std::max(1.0, std::abs(t));
        if (row < 0 || t < best - slack) {
          best = t;
          row = i;
        } else if (t <= best + slack && basis_[i] < basis_[row]) {
          row = i;
        }
      }
      theta = row >= 0 ? std::max(x_[row], 0.0) / alpha[row] : 0.0;
      return row;
    }

    // Harris two-pass test: bound the step with relaxed feasibility, then
    // take the largest pivot among rows that block within that bound.
    double bound = std::numeric_limits<double>::infinity();
    for (int i = 0; i < m_; ++i) {
      if (alpha[i] > ptol) {
        bound = std::min(bound, (std::max(x_[i], 0.0) + opt_.feasibility_tol) / alpha[i]);
      }
    }
    if (!std::isfinite(bound)) return -1;
    int row = -1;
    for (int i = 0; i < m_; ++i) {
      if (alpha[i] <= ptol) continue;
      if (std::max(x_[i], 0.0) / alpha[i] > bound) continue;
      if (row < 0 || alpha[i] > alpha[row] ||
          (alpha[i] == alpha[row] && basis_[i] < basis_[row])) {
        row = i;
      }
    }
    theta = std::max(x_[row], 0.0) / alpha[row];
    return row;
  }

  SimplexStatus iterate(const std::vector<double>& cost, bool allow_artificial) {
    double cost_scale = 1.0;
    for (int j = 0; j < n_; ++j) cost_scale = std::max(cost_scale, std::abs(cost[j]));
    const double tol = opt_.optimality_tol * cost_scale;
    const int bland_trigger = std::max(200, m_);

    bool grew = false;
    for (int j : basis_) {
      if (!in_set_[j]) {
        add_to_set(j);
        grew = true;
      }
    }
    if (grew) build_rows();
    refactor();
    recompute_reduced(cost);
    std::fill(weight_.begin(), weight_.end(), 1.0);
    bool fresh = true;
    int degenerate_streak = 0;
    bland_ = false;

    Vector alpha(m_);
    Vector rho(m_);
    for (;;) {
      if (factor_.updates() >= opt_.refactor_interval) {
        refactor();
        recompute_reduced(cost);
        fresh = true;
      }
      const int entering = price(allow_artificial, tol);
      if (entering < 0) {
        if (!fresh) {
          refactor();
          recompute_reduced(cost);
          fresh = true;
          continue;
        }
        if (grow_set(cost, allow_artificial, tol) > 0) continue;
        return SimplexStatus::optimal;
      }
      if (iterations_ >= opt_.max_iterations) throw IterationLimitError(iterations_);

      alpha.setZero();
      for (auto p = f_.col_start[entering]; p < f_.col_start[entering + 1]; ++p) {
        alpha[f_.row_index[p]] = f_.value[p];
      }
      factor_.ftran(alpha);

      double theta = 0.0;
      const int row = ratio_test(alpha, !allow_artificial, theta);
      if (row < 0) return SimplexStatus::unbounded;

      pivot_row(row, rho);
      const double pivot = alpha[row];
      const double step = d_[entering] / pivot;
      const double wq = weight_[entering];
      double max_weight = 0.0;
      for (int j : touched_) {
        const double a = prow_[j];
        prow_[j] = 0.0;
        touched_flag_[j] = 0;
        if (position_[j] >= 0 || j == entering) continue;
        d_[j] -= step * a;
        const double ratio = a / pivot;
        weight_[j] = std::max(weight_[j], ratio * ratio * wq);
        max_weight = std::max(max_weight, weight_[j]);
      }
      touched_.clear();
      const int leaving = basis_[row];
      d_[leaving] = -step;
      weight_[leaving] = std::max(wq / (pivot * pivot), 1.0);
      d_[entering] = 0.0;
      if (max_weight > kDevexReset) std::fill(weight_.begin(), weight_.end(), 1.0);

      ++iterations_;
      x_ -= theta * alpha;
      x_[row] = theta;
      position_[leaving] = -1;
      basis_[row] = entering;
      position_[entering] = row;
      factor_.update(row, alpha);
      fresh = false;

      if (theta <= 1e-12) {
        if (++degenerate_streak > bland_trigger) bland_ = true;
      } else {
        degenerate_streak = 0;
        bland_ = false;
      }
    }
  }

  const StandardForm& f_;
  const SolverOptions& opt_;
  int m_;
  int n_;
  BasisFactor factor_;
  std::vector<int> basis_;
  std::vector<int> position_;
  Vector x_;
  Vector rhs_;
  Vector duals_;
  std::vector<double> d_;       // reduced costs, maintained across pivots
  std::vector<double> weight_;  // Devex reference weights
  std::vector<std::int64_t> row_start_;
  std::vector<int> row_col_;
  std::vector<double> row_value_;
  std::vector<double> prow_;
  std::vector<char> touched_flag_;
  std::vector<char> in_set_;
  std::vector<int> set_;  // working set of priced columns, sorted
  std::vector<int> touched_;
  bool bland_ = false;
  std::int64_t iterations_ = 0;

  static constexpr double kPerturbation = 1e-6;
  static constexpr double kPivotTol = 1e-9;
  static constexpr double kDevexReset = 1e8;
};

}  // namespace

SimplexResult run_simplex(const StandardForm& form, const SolverOptions& options) {
  if (form.rows == 0) {
    SimplexResult r;
    r.x.assign(form.columns(), 0.0);
    // Any column with negative cost and no rows is an unbounded ray.
    const bool unbounded = std::any_of(form.cost.begin(), form.cost.end(),
                                       [&](double c) { return c < -options.optimality_tol; });
    r.status = unbounded ? SimplexStatus::unbounded : SimplexStatus::optimal;
    return r;
  }
  Simplex s(form, options);
  return s.run();
}

}  // namespace metric_repair::lp::detail

#include "metric_repair/core.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

namespace metric_repair {

std::string to_string(RepairMode mode) {
  switch (mode) {
    case RepairMode::decrease_only:
      return "decrease";
    case RepairMode::increase_only:
      return "increase";
    case RepairMode::general:
      return "general";
  }
  return "general";
}

RepairMode parse_repair_mode(const std::string& text) {
  if (text == "decrease" || text == "domr") return RepairMode::decrease_only;
  if (text == "increase" || text == "iomr") return RepairMode::increase_only;
  if (text == "general") return RepairMode::general;
  throw std::invalid_argument("unknown repair mode '" + text + "'");
}

DistanceMatrix::DistanceMatrix(int n) : d_(n, 0.0) {
  if (n < 0) throw std::invalid_argument("vertex count must be nonnegative");
}

DistanceMatrix DistanceMatrix::from_rows(const std::vector<std::vector<double>>& rows) {
  const int n = static_cast<int>(rows.size());
  DistanceMatrix m(n);
  for (int i = 0; i < n; ++i) {
    if (static_cast<int>(rows[i].size()) != n) {
      throw std::invalid_argument("row " + std::to_string(i + 1) + " has " +
                                  std::to_string(rows[i].size()) + " entries, expected " +
                                  std::to_string(n));
    }
  }
  for (int i = 0; i < n; ++i) {
    if (rows[i][i] != 0.0) {
      throw std::invalid_argument("nonzero diagonal entry at row " + std::to_string(i + 1));
    }
    for (int j = i + 1; j < n; ++j) {
      if (rows[i][j] != rows[j][i]) {
        throw std::invalid_argument("asymmetric entry (" + std::to_string(i + 1) + "," +
                                    std::to_string(j + 1) + ")");
      }
      m.set(i, j, rows[i][j]);
    }
  }
  return m;
}

DistanceMatrix DistanceMatrix::from_upper(int n, const std::vector<double>& upper) {
  DistanceMatrix m(n);
  if (static_cast<std::int64_t>(upper.size()) != m.pair_count()) {
    throw std::invalid_argument("upper triangle has wrong length");
  }
  std::size_t idx = 0;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) m.set(i, j, upper[idx++]);
  }
  return m;
}

void DistanceMatrix::set(int i, int j, double value) {
  if (!std::isfinite(value) || value < 0.0) {
    throw std::invalid_argument("distance (" + std::to_string(i + 1) + "," +
                                std::to_string(j + 1) + ") must be finite and nonnegative");
  }
  if (i == j) {
    if (value != 0.0) throw std::invalid_argument("diagonal must be zero");
    return;
  }
  d_.set(i, j, value);
}

double DistanceMatrix::max_entry() const {
  double m = 0.0;
  for (double v : d_.values()) m = std::max(m, v);
  return m;
}

std::int64_t DistanceMatrix::pair_count() const {
  const std::int64_t n = size();
  return n * (n - 1) / 2;
}

Triangle Triangle::make(int a, int b, int apex) {
  return a < b ? Triangle{a, b, apex} : Triangle{b, a, apex};
}

Pair Pair::make(int a, int b) { return a < b ? Pair{a, b} : Pair{b, a}; }

Perturbation Perturbation::difference(const DistanceMatrix& after, const DistanceMatrix& before) {
  if (after.size() != before.size()) throw std::invalid_argument("size mismatch");
  Perturbation p(after.size());
  for (int i = 0; i < after.size(); ++i) {
    for (int j = i + 1; j < after.size(); ++j) {
      const double delta = after(i, j) - before(i, j);
      if (delta != 0.0) p.entries_[{i, j}] = delta;
    }
  }
  return p;
}

void Perturbation::set(int i, int j, double value) {
  if (i == j || i < 0 || j < 0 || i >= n_ || j >= n_) {
    throw std::invalid_argument("perturbation index out of range");
  }
  const Pair key = Pair::make(i, j);
  if (value == 0.0) {
    entries_.erase(key);
  } else {
    entries_[key] = value;
  }
}

double Perturbation::get(int i, int j) const {
  if (i == j) return 0.0;
  auto it = entries_.find(Pair::make(i, j));
  return it == entries_.end() ? 0.0 : it->second;
}

std::int64_t Perturbation::support_size(double threshold) const {
  return std::count_if(entries_.begin(), entries_.end(),
                       [&](const auto& e) { return std::abs(e.second) > threshold; });
}

std::vector<Pair> Perturbation::support(double threshold) const {
  std::vector<Pair> out;
  for (const auto& [pair, v] : entries_) {
    if (std::abs(v) > threshold) out.push_back(pair);
  }
  return out;
}

double Perturbation::l1_norm() const {
  double s = 0.0;
  for (const auto& [pair, v] : entries_) s += std::abs(v);
  return s;
}

DistanceMatrix apply(const DistanceMatrix& base, const Perturbation& p, double clamp) {
  if (base.size() != p.size()) throw std::invalid_argument("size mismatch");
  DistanceMatrix out = base;
  for (const auto& [pair, v] : p.entries()) {
    double value = base(pair.i, pair.j) + v;
    if (value < 0.0 && value >= -clamp) value = 0.0;
    out.set(pair.i, pair.j, value);
  }
  return out;
}

void OracleMask::mark(int i, int j, bool on) {
  if (i == j) throw std::invalid_argument("oracle diagonal must be zero");
  q_.set(i, j, on ? 1 : 0);
}

std::int64_t OracleMask::marked_count() const {
  std::int64_t c = 0;
  for (int i = 0; i < size(); ++i) {
    for (int j = i + 1; j < size(); ++j) c += marked(i, j) ? 1 : 0;
  }
  return c;
}

std::vector<Pair> OracleMask::marked_pairs() const {
  std::vector<Pair> out;
  for (int i = 0; i < size(); ++i) {
    for (int j = i + 1; j < size(); ++j) {
      if (marked(i, j)) out.push_back({i, j});
    }
  }
  return out;
}

std::int64_t triangle_count(std::int64_t n) {
  if (n < 3) return 0;
  return n * (n - 1) * (n - 2) / 2;
}

double violation_threshold(const DistanceMatrix& d, double tol) { return tol * d.max_entry(); }

namespace {

// Visits every broken triangle in (apex, i, j) order.
template <class Visit>
void for_each_broken(const DistanceMatrix& d, double tol, Visit&& visit) {
  const int n = d.size();
  const double threshold = violation_threshold(d, tol);
  for (int k = 0; k < n; ++k) {
    const double* dk = d.row(k);
    for (int i = 0; i < n; ++i) {
      if (i == k) continue;
      const double* di = d.row(i);
      for (int j = i + 1; j < n; ++j) {
        if (j == k) continue;
        if (di[j] - dk[i] - dk[j] > threshold) {
          if (!visit(Triangle{i, j, k})) return;
        }
      }
    }
  }
}

}  // namespace

bool is_metric(const DistanceMatrix& d, double tol) {
  bool metric = true;
  for_each_broken(d, tol, [&](const Triangle&) {
    metric = false;
    return false;
  });
  return metric;
}

std::vector<Triangle> broken_triangles(const DistanceMatrix& d, double tol) {
  std::vector<Triangle> out;
  for_each_broken(d, tol, [&](const Triangle& t) {
    out.push_back(t);
    return true;
  });
  return out;
}

std::int64_t count_broken(const DistanceMatrix& d, double tol) {
  std::int64_t c = 0;
  for_each_broken(d, tol, [&](const Triangle&) {
    ++c;
    return true;
  });
  return c;
}

ViolationCounts violation_counts(const DistanceMatrix& d, double tol) {
  ViolationCounts counts{SymmetricArray<std::int64_t>(d.size(), 0),
                         SymmetricArray<std::int64_t>(d.size(), 0)};
  for_each_broken(d, tol, [&](const Triangle& t) {
    counts.left.add(t.i, t.j, 1);
    counts.right.add(t.i, t.k, 1);
    counts.right.add(t.j, t.k, 1);
    return true;
  });
  return counts;
}

void validate_triangle(const Triangle& t, int n) {
  const bool ok = t.i >= 0 && t.j >= 0 && t.k >= 0 && t.i < n && t.j < n && t.k < n &&
                  t.i < t.j && t.k != t.i && t.k != t.j;
  if (!ok) {
    throw std::invalid_argument("invalid triangle (" + std::to_string(t.i + 1) + "," +
                                std::to_string(t.j + 1) + ";" + std::to_string(t.k + 1) +
                                ") for n=" + std::to_string(n));
  }
}

std::vector<Triangle> extend_broken(const std::vector<Triangle>& triangles, int n) {
  std::set<Pair> left_edges;
  for (const Triangle& t : triangles) {
    validate_triangle(t, n);
    left_edges.insert({t.i, t.j});
  }
  std::vector<Triangle> out(triangles.begin(), triangles.end());
  for (const Pair& e : left_edges) {
    for (int l = 0; l < n; ++l) {
      if (l == e.i || l == e.j) continue;
      out.push_back(Triangle::make(l, e.i, e.j));
      out.push_back(Triangle::make(l, e.j, e.i));
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

double max_violation(const DistanceMatrix& d) {
  const int n = d.size();
  double worst = 0.0;
  for (int k = 0; k < n; ++k) {
    for (int i = 0; i < n; ++i) {
      if (i == k) continue;
      for (int j = i + 1; j < n; ++j) {
        if (j == k) continue;
        worst = std::max(worst, d(i, j) - d(i, k) - d(j, k));
      }
    }
  }
  return worst;
}

}  // namespace metric_repair

#pragma once

// Domain types for sparse metric repair: distance matrices, labeled triangle
// inequalities, sparse perturbations, and the O(n^3) scans over them.
//
// Indices are 0-based throughout the library. Files and user-facing text use
// 1-based vertex labels (see io.hpp).

#include <compare>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

namespace metric_repair {

/// A triangle counts as broken iff D_ij - D_ik - D_jk > tol * scale, where
/// scale is the largest entry of the matrix under test.
inline constexpr double kDefaultTolerance = 1e-9;

/// A perturbation entry is part of the support iff |value| > this * scale.
inline constexpr double kSupportThreshold = 1e-6;

enum class RepairMode { decrease_only, increase_only, general };

std::string to_string(RepairMode mode);
RepairMode parse_repair_mode(const std::string& text);

/// Dense symmetric n x n storage. Writes go to both halves.
template <class T>
class SymmetricArray {
 public:
  SymmetricArray() = default;
  explicit SymmetricArray(int n, T fill = T{})
      : n_(n), data_(static_cast<std::size_t>(n) * static_cast<std::size_t>(n), fill) {}

  int size() const { return n_; }

  T operator()(int i, int j) const { return data_[index(i, j)]; }

  void set(int i, int j, T value) {
    data_[index(i, j)] = value;
    data_[index(j, i)] = value;
  }

  void add(int i, int j, T delta) { set(i, j, (*this)(i, j) + delta); }

  /// Row-major view of the full square.
  std::span<const T> values() const { return data_; }

  const T* row(int i) const { return data_.data() + static_cast<std::size_t>(i) * n_; }

  friend bool operator==(const SymmetricArray&, const SymmetricArray&) = default;

 private:
  std::size_t index(int i, int j) const {
    return static_cast<std::size_t>(i) * static_cast<std::size_t>(n_) + static_cast<std::size_t>(j);
  }

  int n_ = 0;
  std::vector<T> data_;
};

/// Symmetric, nonnegative, zero-diagonal matrix of pairwise distances.
/// Metricity is a queried property, not an invariant.
class DistanceMatrix {
 public:
  DistanceMatrix() = default;

  /// All-zero matrix on n vertices.
  explicit DistanceMatrix(int n);

  /// Validates shape, exact symmetry, nonnegativity and zero diagonal.
  /// Throws std::invalid_argument on the first offending entry.
  static DistanceMatrix from_rows(const std::vector<std::vector<double>>& rows);

  /// Builds a matrix from the upper triangle listed row by row:
  /// (0,1), (0,2), ..., (0,n-1), (1,2), ...
  static DistanceMatrix from_upper(int n, const std::vector<double>& upper);

  int size() const { return d_.size(); }
  double operator()(int i, int j) const { return d_(i, j); }
  const double* row(int i) const { return d_.row(i); }

  /// Symmetric write. Throws std::invalid_argument for i == j with a nonzero
  /// value, or for negative / non-finite values.
  void set(int i, int j, double value);

  /// Largest entry; 0 for the empty or all-zero matrix.
  double max_entry() const;

  /// Number of unordered pairs, n(n-1)/2.
  std::int64_t pair_count() const;

  friend bool operator==(const DistanceMatrix&, const DistanceMatrix&) = default;

 private:
  SymmetricArray<double> d_;
};

/// Inequality D_ij <= D_ik + D_jk. Canonical form keeps i < j; k is the apex.
struct Triangle {
  int i = 0;
  int j = 0;
  int k = 0;

  static Triangle make(int a, int b, int apex);

  /// Ordered by (apex, i, j).
  friend auto operator<=>(const Triangle& a, const Triangle& b) {
    if (auto c = a.k <=> b.k; c != 0) return c;
    if (auto c = a.i <=> b.i; c != 0) return c;
    return a.j <=> b.j;
  }
  friend bool operator==(const Triangle&, const Triangle&) = default;
};

struct Pair {
  int i = 0;
  int j = 0;

  static Pair make(int a, int b);

  friend auto operator<=>(const Pair&, const Pair&) = default;
};

/// Sparse symmetric adjustment keyed on unordered pairs.
class Perturbation {
 public:
  Perturbation() = default;
  explicit Perturbation(int n) : n_(n) {}

  /// after - before, keeping every entry that differs.
  static Perturbation difference(const DistanceMatrix& after, const DistanceMatrix& before);

  int size() const { return n_; }

  /// Sets (or erases, for 0) the entry for {i, j}.
  void set(int i, int j, double value);
  double get(int i, int j) const;

  const std::map<Pair, double>& entries() const { return entries_; }
  bool empty() const { return entries_.empty(); }

  /// Number of entries with |value| > threshold.
  std::int64_t support_size(double threshold) const;

  /// Support under the default relative threshold for a matrix of this scale.
  std::int64_t support_size_scaled(double scale) const {
    return support_size(kSupportThreshold * scale);
  }

  std::vector<Pair> support(double threshold) const;

  double l1_norm() const;

  friend bool operator==(const Perturbation&, const Perturbation&) = default;

 private:
  int n_ = 0;
  std::map<Pair, double> entries_;
};

/// base + p. Results within `clamp` below zero are clamped to zero (LP noise);
/// anything more negative throws std::invalid_argument.
DistanceMatrix apply(const DistanceMatrix& base, const Perturbation& p, double clamp = 0.0);

struct ViolationCounts {
  SymmetricArray<std::int64_t> left;
  SymmetricArray<std::int64_t> right;
};

/// 0/1 mask over pairs marking suspected-corrupted distances.
class OracleMask {
 public:
  OracleMask() = default;
  explicit OracleMask(int n) : q_(n, 0) {}

  int size() const { return q_.size(); }
  bool marked(int i, int j) const { return q_(i, j) != 0; }
  void mark(int i, int j, bool on = true);

  std::int64_t marked_count() const;
  std::vector<Pair> marked_pairs() const;

  friend bool operator==(const OracleMask&, const OracleMask&) = default;

 private:
  SymmetricArray<std::uint8_t> q_;
};

std::int64_t triangle_count(std::int64_t n);

/// Absolute slack below which a triangle is not considered broken.
double violation_threshold(const DistanceMatrix& d, double tol);

bool is_metric(const DistanceMatrix& d, double tol = kDefaultTolerance);

/// Broken triangles sorted by (apex, i, j).
std::vector<Triangle> broken_triangles(const DistanceMatrix& d, double tol = kDefaultTolerance);

std::int64_t count_broken(const DistanceMatrix& d, double tol = kDefaultTolerance);

ViolationCounts violation_counts(const DistanceMatrix& d, double tol = kDefaultTolerance);

/// T plus every triangle with a left-hand edge of T on its right-hand side.
/// Throws std::invalid_argument for a triangle that is not valid on n vertices.
std::vector<Triangle> extend_broken(const std::vector<Triangle>& triangles, int n);

/// max(0, max over triangles of D_ij - D_ik - D_jk). Adding it to every
/// off-diagonal entry yields a metric.
double max_violation(const DistanceMatrix& d);

void validate_triangle(const Triangle& t, int n);

}  // namespace metric_repair

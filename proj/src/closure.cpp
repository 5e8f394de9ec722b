#include "internal/closure.hpp"

namespace metric_repair::detail {

std::int64_t floyd_warshall(DistanceMatrix& d, double threshold, std::vector<int>* via) {
  const int n = d.size();
  if (via != nullptr) via->assign(static_cast<std::size_t>(n) * n, -1);
  std::int64_t tests = 0;
  for (int k = 0; k < n; ++k) {
    for (int i = 0; i < n; ++i) {
      if (i == k) continue;
      for (int j = 0; j < i; ++j) {
        if (j == k) continue;
        ++tests;
        const double path = d(i, k) + d(k, j);
        if (d(i, j) - path > threshold) {
          d.set(i, j, path);
          if (via != nullptr) {
            (*via)[static_cast<std::size_t>(i) * n + j] = k;
            (*via)[static_cast<std::size_t>(j) * n + i] = k;
          }
        }
      }
    }
  }
  return tests;
}

bool any_broken(const DistanceMatrix& d, double threshold) {
  const int n = d.size();
  for (int k = 0; k < n; ++k) {
    const double* dk = d.row(k);
    for (int i = 0; i < n; ++i) {
      if (i == k) continue;
      const double* di = d.row(i);
      for (int j = i + 1; j < n; ++j) {
        if (j != k && di[j] - dk[i] - dk[j] > threshold) return true;
      }
    }
  }
  return false;
}

}  // namespace metric_repair::detail

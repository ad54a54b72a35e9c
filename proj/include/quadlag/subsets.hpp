#pragma once

#include <algorithm>
#include <cstddef>
#include <set>
#include <span>
#include <sstream>
#include <string>
#include <vector>

namespace quadlag {

/// Sorted, 0-based set of coordinate / inequality indices.
using IndexSet = std::vector<std::size_t>;

/// Calls `visit(span of k indices)` for every k-subset of {0..n-1} in
/// lexicographic order; stops early when `visit` returns false.
/// Returns false if stopped early.
template <class Visit> bool for_each_subset(std::size_t n, std::size_t k, Visit &&visit) {
  if (k > n) return true;
  std::vector<std::size_t> idx(k);
  for (std::size_t i = 0; i < k; ++i) idx[i] = i;
  for (;;) {
    if (!visit(std::span<const std::size_t>(idx))) return false;
    std::size_t i = k;
    while (i > 0 && idx[i - 1] == n - k + (i - 1)) --i;
    if (i == 0) return true;
    ++idx[i - 1];
    for (std::size_t j = i; j < k; ++j) idx[j] = idx[j - 1] + 1;
  }
}

inline IndexSet complement(const IndexSet &s, std::size_t n) {
  IndexSet out;
  for (std::size_t i = 0, j = 0; i < n; ++i) {
    if (j < s.size() && s[j] == i) {
      ++j;
      continue;
    }
    out.push_back(i);
  }
  return out;
}

/// 1-based rendering, e.g. "{1,2}", the convention used in reports.
inline std::string format_index_set(const IndexSet &s) {
  std::ostringstream os;
  os << '{';
  for (std::size_t i = 0; i < s.size(); ++i) os << (i ? "," : "") << s[i] + 1;
  os << '}';
  return os.str();
}

} // namespace quadlag

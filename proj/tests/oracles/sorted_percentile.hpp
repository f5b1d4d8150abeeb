#pragma once

// Nearest-rank percentile by scanning ranks: the smallest sorted value whose
// rank r satisfies r / n >= p / 100.

#include <algorithm>
#include <vector>

namespace oracle {

inline double nearest_rank(std::vector<double> v, double p) {
  std::sort(v.begin(), v.end());
  const double n = static_cast<double>(v.size());
  for (std::size_t r = 1; r <= v.size(); ++r) {
    if (static_cast<double>(r) * 100.0 >= p * n) return v[r - 1];
  }
  return v.back();
}

}  // namespace oracle

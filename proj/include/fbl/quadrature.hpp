#pragma once

#include <cstddef>
#include <vector>

namespace fbl {

/// Integral of uniformly spaced samples: composite Simpson, with a 3/8 panel
/// at the end when the interval count is odd, trapezoid below three samples.
inline double simpson(const std::vector<double>& v, double h) {
  const std::size_t m = v.size();
  if (m < 2) return 0.0;
  if (m == 2) return 0.5 * h * (v[0] + v[1]);
  const std::size_t intervals = m - 1;
  std::size_t even = intervals % 2 == 0 ? intervals : intervals - 3;
  double s = 0.0;
  for (std::size_t i = 0; i + 2 <= even; i += 2) s += h / 3.0 * (v[i] + 4.0 * v[i + 1] + v[i + 2]);
  if (even != intervals) {
    const std::size_t i = even;
    s += 3.0 * h / 8.0 * (v[i] + 3.0 * v[i + 1] + 3.0 * v[i + 2] + v[i + 3]);
  }
  return s;
}

/// Cumulative version: out[i] is the integral from sample 0 to sample i.
inline std::vector<double> cumulative_simpson(const std::vector<double>& v, double h) {
  std::vector<double> out(v.size(), 0.0);
  for (std::size_t i = 1; i < v.size(); ++i) {
    std::vector<double> head(v.begin(), v.begin() + static_cast<long>(i) + 1);
    out[i] = simpson(head, h);
  }
  return out;
}

}  // namespace fbl

#pragma once

#include <cmath>

namespace fbl {

namespace detail {
inline double smooth_ramp(double x) { return x > 0.0 ? std::exp(-1.0 / x) : 0.0; }
}  // namespace detail

/// Radial cutoff Upsilon: even, C-infinity, equal to 1 on [-1, 1], vanishing
/// outside [-2, 2], monotone on [1, 2]. The transition is the normalized
/// ratio e(2-|t|) / (e(2-|t|) + e(|t|-1)) with e(x) = exp(-1/x).
inline double upsilon(double t) {
  const double a = std::abs(t);
  if (a <= 1.0) return 1.0;
  if (a >= 2.0) return 0.0;
  const double up = detail::smooth_ramp(2.0 - a);
  const double down = detail::smooth_ramp(a - 1.0);
  return up / (up + down);
}

/// Annular bump zeta(r) = Upsilon(r) - Upsilon(2r), supported in 1/2 < r < 2.
inline double zeta(double r) { return upsilon(r) - upsilon(2.0 * r); }

/// zeta(2^-j r): symbol of the j-th Littlewood-Paley block at radius r.
inline double zeta_j(int j, double r) { return zeta(std::ldexp(r, -j)); }

}  // namespace fbl

#pragma once

#include <cmath>
#include <limits>

#include "fbl/error.hpp"
#include "fbl/field.hpp"
#include "fbl/multiplier.hpp"

namespace fbl {

inline constexpr double infinity = std::numeric_limits<double>::infinity();

/// L^p norm over the box by the rectangle rule; p = infinity is the grid max.
inline double lp_norm(const SpectralField& f, double p) {
  require(p >= 1.0, "L^p exponent must be >= 1");
  if (std::isinf(p)) return f.max_abs();
  const double h2 = f.grid().cell_area();
  double s = 0.0;
  if (p == 2.0) {
    for (double v : f.physical()) s += v * v;
    return std::sqrt(h2 * s);
  }
  for (double v : f.physical()) s += std::pow(std::abs(v), p);
  return std::pow(h2 * s, 1.0 / p);
}

/// L^p norm of the pointwise Euclidean length of a vector field.
inline double lp_norm(const VectorField& v, double p) {
  require(p >= 1.0, "L^p exponent must be >= 1");
  const auto a = v.x.physical();
  const auto b = v.y.physical();
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double m = std::hypot(a[i], b[i]);
    s = std::isinf(p) ? std::max(s, m) : s + std::pow(m, p);
  }
  if (std::isinf(p)) return s;
  return std::pow(v.grid().cell_area() * s, 1.0 / p);
}

/// Grid inner product h^2 sum a_i b_i.
inline double inner(const SpectralField& a, const SpectralField& b) {
  require_same_grid(a.grid(), b.grid());
  const auto x = a.physical();
  const auto y = b.physical();
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) s += x[i] * y[i];
  return a.grid().cell_area() * s;
}

/// Homogeneous norm ||Lambda^s f||_{L^p}. Negative s needs a mean-free f.
inline double homogeneous_norm(const SpectralField& f, double s, double p) {
  require(s >= 0.0 || f.is_mean_free(1e-10),
          "negative-order norm of a field with nonzero mean is undefined");
  return lp_norm(lambda(f, s), p);
}

/// ||f||_{W^{s,p}} = ||Lambda^s f||_{L^p} + ||f||_{L^p}.
inline double sobolev_norm(const SpectralField& f, double s, double p) {
  require(s >= 0.0 || f.is_mean_free(1e-10),
          "negative-order norm of a field with nonzero mean is undefined");
  return lp_norm(lambda(f, s), p) + lp_norm(f, p);
}

/// ||Lambda^s f||_{L^2} evaluated from coefficients by Parseval.
inline double parseval_norm(const SpectralField& f, double s) {
  const Grid& g = f.grid();
  const std::size_t n = g.n(), h = g.half();
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < h; ++j) {
      const long k1 = g.lattice(i), k2 = g.lattice(j);
      const double w = (j == 0 || j == n / 2) ? 1.0 : 2.0;
      const double r = std::hypot(g.xi1(i), g.xi2(j));
      double sym;
      if (k1 == 0 && k2 == 0)
        sym = s == 0.0 ? 1.0 : 0.0;
      else
        sym = s == 0.0 ? 1.0 : std::pow(r, s);
      acc += w * sym * sym * std::norm(f.half_coeff(i, j));
    }
  return std::sqrt(g.area() * acc);
}

}  // namespace fbl

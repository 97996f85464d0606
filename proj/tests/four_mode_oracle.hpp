#pragma once

// Closed-form commutator of single-mode fields. With V = grad-perp
// Lambda^-1 (p e^{i k.x} + c.c.) and phi = q e^{i m.x} + c.c., the product
// V.grad phi lives on the four wavenumbers +-k +-m, and
//   [sigma, V.grad] phi ^(a + b) = (sigma(a + b) - sigma(b)) (V^(a) . i b) phi^(b).

#include <cmath>
#include <complex>
#include <map>
#include <utility>

#include "fbl/field.hpp"

namespace oracle {

using C = std::complex<double>;
using Coeffs = std::map<std::pair<long, long>, C>;

inline fbl::VectorField single_mode_velocity(const fbl::Grid& g, long k1, long k2, C p) {
  const double u = g.wavenumber_unit();
  const double x1 = u * k1, x2 = u * k2, r = std::hypot(x1, x2);
  const C a = C(0.0, -x2 / r) * p, b = C(0.0, x1 / r) * p;
  auto mode = [&](C c) {
    return fbl::SpectralField::sample(g, [=](double x, double y) {
      return 2.0 * (c * std::exp(C(0.0, x1 * x + x2 * y))).real();
    });
  };
  return {mode(a), mode(b)};
}

inline fbl::SpectralField single_mode_scalar(const fbl::Grid& g, long m1, long m2, C q) {
  const double u = g.wavenumber_unit();
  return fbl::SpectralField::sample(
      g, [=](double x, double y) { return 2.0 * (q * std::exp(C(0.0, u * (m1 * x + m2 * y)))).real(); });
}

template <class Sym>
Coeffs four_mode_commutator(double unit, long k1, long k2, C p, long m1, long m2, C q, Sym sigma) {
  Coeffs out;
  for (int sa : {1, -1})
    for (int sb : {1, -1}) {
      const long a1 = sa * k1, a2 = sa * k2, b1 = sb * m1, b2 = sb * m2;
      const double xa1 = unit * a1, xa2 = unit * a2, xb1 = unit * b1, xb2 = unit * b2;
      const double ra = std::hypot(xa1, xa2);
      const C pa = sa > 0 ? p : std::conj(p);
      const C qb = sb > 0 ? q : std::conj(q);
      const C v1 = C(0.0, -xa2 / ra) * pa, v2 = C(0.0, xa1 / ra) * pa;
      const C adv = (v1 * C(0.0, xb1) + v2 * C(0.0, xb2)) * qb;
      const C w = sigma(xa1 + xb1, xa2 + xb2) - sigma(xb1, xb2);
      out[{a1 + b1, a2 + b2}] += w * adv;
    }
  return out;
}

/// Largest coefficient mismatch over the whole lattice.
inline double max_coeff_error(const fbl::SpectralField& f, const Coeffs& want) {
  const long h = static_cast<long>(f.grid().n() / 2);
  double e = 0.0;
  for (long a = -h + 1; a < h; ++a)
    for (long b = -h + 1; b < h; ++b) {
      const auto it = want.find({a, b});
      const C w = it == want.end() ? C(0.0) : it->second;
      e = std::max(e, std::abs(f.coeff(a, b) - w));
    }
  return e;
}

}  // namespace oracle

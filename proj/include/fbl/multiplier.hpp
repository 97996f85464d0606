#pragma once

#include <cmath>
#include <complex>
#include <functional>
#include <string>
#include <vector>

#include "fbl/bump.hpp"
#include "fbl/error.hpp"
#include "fbl/field.hpp"

namespace fbl {

/// What a multiplier does with the xi = 0 coefficient.
enum class ZeroMode {
  annihilate,  ///< the zero mode is set to 0
  identity,    ///< the zero mode passes through unchanged
};

/// A Fourier symbol acting on periodic fields.
///
///   lambda_pow(s)          |xi|^s
///   riesz(alpha)           i xi_1 |xi|^-alpha   (d_1 Lambda^-alpha)
///   partial(axis)          i xi_axis
///   inv_lap_perp_grad(c)   component c of grad-perp Delta^-1,
///                          i.e. (i xi_2, -i xi_1) / |xi|^2
///   dyadic_bump(j)         zeta(2^-j |xi|)
///   composite(parts)       product of the parts' symbols
class MultiplierSpec {
 public:
  enum class Kind { lambda_pow, riesz, partial, inv_lap_perp_grad, dyadic_bump, composite };

  static MultiplierSpec lambda_pow(double s) { return MultiplierSpec(Kind::lambda_pow, s); }
  static MultiplierSpec riesz(double alpha) { return MultiplierSpec(Kind::riesz, alpha); }
  static MultiplierSpec partial(int axis) {
    require(axis == 0 || axis == 1, "partial derivative axis must be 0 or 1");
    MultiplierSpec m(Kind::partial, 0.0);
    m.index_ = axis;
    return m;
  }
  static MultiplierSpec inv_lap_perp_grad(int component) {
    require(component == 0 || component == 1, "velocity component must be 0 or 1");
    MultiplierSpec m(Kind::inv_lap_perp_grad, 0.0);
    m.index_ = component;
    return m;
  }
  static MultiplierSpec dyadic_bump(int j) {
    MultiplierSpec m(Kind::dyadic_bump, 0.0);
    m.index_ = j;
    return m;
  }
  static MultiplierSpec composite(std::vector<MultiplierSpec> parts) {
    MultiplierSpec m(Kind::composite, 0.0);
    m.parts_ = std::move(parts);
    return m;
  }

  MultiplierSpec with_zero_mode(ZeroMode z) const {
    MultiplierSpec m = *this;
    m.zero_mode_ = z;
    return m;
  }

  Kind kind() const { return kind_; }
  ZeroMode zero_mode() const { return zero_mode_; }
  double exponent() const { return s_; }

  /// Symbol value at a nonzero frequency.
  cplx symbol(double xi1, double xi2) const {
    const double r = std::hypot(xi1, xi2);
    const cplx I{0.0, 1.0};
    switch (kind_) {
      case Kind::lambda_pow:
        return s_ == 0.0 ? 1.0 : std::pow(r, s_);
      case Kind::riesz:
        return I * xi1 * std::pow(r, -s_);
      case Kind::partial:
        return I * (index_ == 0 ? xi1 : xi2);
      case Kind::inv_lap_perp_grad:
        return index_ == 0 ? I * xi2 / (r * r) : -I * xi1 / (r * r);
      case Kind::dyadic_bump:
        return zeta_j(index_, r);
      case Kind::composite: {
        cplx v = 1.0;
        for (const auto& p : parts_) v *= p.symbol(xi1, xi2);
        return v;
      }
    }
    return 0.0;
  }

  bool singular_at_zero() const {
    switch (kind_) {
      case Kind::lambda_pow: return s_ < 0.0;
      case Kind::riesz: return s_ >= 1.0;
      case Kind::inv_lap_perp_grad: return true;
      case Kind::partial:
      case Kind::dyadic_bump: return false;
      case Kind::composite:
        for (const auto& p : parts_)
          if (p.singular_at_zero()) return true;
        return false;
    }
    return true;
  }

  /// Limit of the symbol at xi -> 0 for symbols regular there.
  double value_at_zero() const {
    switch (kind_) {
      case Kind::lambda_pow: return s_ == 0.0 ? 1.0 : 0.0;
      case Kind::composite: {
        double v = 1.0;
        for (const auto& p : parts_) v *= p.value_at_zero();
        return v;
      }
      default: return 0.0;
    }
  }

  std::string name() const {
    switch (kind_) {
      case Kind::lambda_pow: return "Lambda^" + std::to_string(s_);
      case Kind::riesz: return "R_" + std::to_string(s_);
      case Kind::partial: return "d_" + std::to_string(index_ + 1);
      case Kind::inv_lap_perp_grad: return "gradperp_invlap_" + std::to_string(index_ + 1);
      case Kind::dyadic_bump: return "Delta_" + std::to_string(index_);
      case Kind::composite: {
        std::string s;
        for (const auto& p : parts_) s += (s.empty() ? "" : "*") + p.name();
        return s;
      }
    }
    return "?";
  }

 private:
  MultiplierSpec(Kind k, double s) : kind_(k), s_(s) {}

  Kind kind_;
  double s_ = 0.0;
  int index_ = 0;
  std::vector<MultiplierSpec> parts_;
  ZeroMode zero_mode_ = ZeroMode::annihilate;
};

/// Coefficientwise product with an arbitrary symbol; zero_value is the
/// factor applied to the mean. On the self-conjugate Nyquist lines the
/// symbol is replaced by its Hermitian part (sigma(k) + conj sigma(-k)) / 2,
/// which annihilates odd symbols there and keeps the output real.
template <class Symbol>
SpectralField apply_symbol(const SpectralField& f, Symbol&& sigma, cplx zero_value) {
  const Grid& g = f.grid();
  const std::size_t n = g.n();
  const std::size_t h = g.half();
  const double unit = g.wavenumber_unit();
  auto spec = std::vector<cplx>(f.spectrum().begin(), f.spectrum().end());
  for (std::size_t i = 0; i < n; ++i) {
    const long k1 = g.lattice(i);
    for (std::size_t j = 0; j < h; ++j) {
      const long k2 = g.lattice(j);
      cplx& c = spec[i * h + j];
      if (k1 == 0 && k2 == 0) {
        c *= zero_value;
        continue;
      }
      const double xi1 = unit * static_cast<double>(k1);
      const double xi2 = unit * static_cast<double>(k2);
      cplx s = sigma(xi1, xi2);
      const bool ny1 = g.is_nyquist(k1), ny2 = g.is_nyquist(k2);
      if (ny1 || ny2) {
        const double m1 = ny1 ? xi1 : -xi1;
        const double m2 = ny2 ? xi2 : -xi2;
        s = 0.5 * (s + std::conj(sigma(m1, m2)));
      }
      c *= s;
    }
  }
  return SpectralField::from_spectrum(g, std::move(spec));
}

inline SpectralField apply_multiplier(const SpectralField& f, const MultiplierSpec& m) {
  cplx zero_value = 0.0;
  if (m.zero_mode() == ZeroMode::identity) {
    require(!m.singular_at_zero(),
            "multiplier " + m.name() + " is singular at xi = 0; use zero_mode = annihilate");
    require(m.value_at_zero() == 1.0,
            "multiplier " + m.name() + " does not equal 1 at xi = 0; use zero_mode = annihilate");
    zero_value = 1.0;
  }
  return apply_symbol(f, [&m](double a, double b) { return m.symbol(a, b); }, zero_value);
}

/// Lambda^s f with the zero mode annihilated; for s = 0 the field is
/// returned unchanged (mean included).
inline SpectralField lambda(const SpectralField& f, double s) {
  if (s == 0.0) return f;
  return apply_multiplier(f, MultiplierSpec::lambda_pow(s));
}

inline SpectralField riesz(const SpectralField& f, double alpha) {
  return apply_multiplier(f, MultiplierSpec::riesz(alpha));
}

inline SpectralField partial(const SpectralField& f, int axis) {
  return apply_multiplier(f, MultiplierSpec::partial(axis));
}

}  // namespace fbl

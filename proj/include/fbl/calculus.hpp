#pragma once

#include <cmath>
#include <vector>

#include "fbl/error.hpp"
#include "fbl/field.hpp"
#include "fbl/multiplier.hpp"

namespace fbl {

inline VectorField gradient(const SpectralField& f) { return {partial(f, 0), partial(f, 1)}; }

inline SpectralField divergence(const VectorField& v) { return partial(v.x, 0) + partial(v.y, 1); }

/// Scalar curl d1 v2 - d2 v1.
inline SpectralField curl(const VectorField& v) { return partial(v.y, 0) - partial(v.x, 1); }

/// grad-perp Delta^-1 applied to a scalar field with any zero mode dropped.
inline VectorField perp_inverse_laplacian(const SpectralField& f) {
  return {apply_multiplier(f, MultiplierSpec::inv_lap_perp_grad(0)),
          apply_multiplier(f, MultiplierSpec::inv_lap_perp_grad(1))};
}

/// Velocity u = grad-perp Delta^-1 omega of a mean-free vorticity.
inline VectorField biot_savart(const SpectralField& omega) {
  require(omega.is_mean_free(1e-10), "biot_savart needs a mean-free vorticity");
  return perp_inverse_laplacian(omega);
}

/// R_alpha (I + Lambda^(beta - alpha)) theta with beta = 1 - alpha.
inline SpectralField riesz_buoyancy(const SpectralField& theta, double alpha) {
  const double beta = 1.0 - alpha;
  return apply_symbol(
      theta,
      [alpha, beta](double a, double b) {
        const double r = std::hypot(a, b);
        return cplx{0.0, a} * std::pow(r, -alpha) * (1.0 + std::pow(r, beta - alpha));
      },
      0.0);
}

inline void require_alpha(double alpha) {
  require(alpha > 0.5 && alpha < 1.0, "alpha must lie in (1/2, 1)");
}

struct VelocitySplit {
  VectorField u_f;
  VectorField u_theta;
  VectorField total() const { return u_f + u_theta; }
};

/// u = u_f + u_theta with u_f = grad-perp Delta^-1 f and
/// u_theta = grad-perp Delta^-1 R_alpha (I + Lambda^(beta - alpha)) theta.
inline VelocitySplit velocity_decomposition(const SpectralField& f, const SpectralField& theta,
                                            double alpha) {
  require_alpha(alpha);
  require_same_grid(f.grid(), theta.grid());
  require(f.is_mean_free(1e-10), "velocity_decomposition needs a mean-free f");
  return {perp_inverse_laplacian(f), perp_inverse_laplacian(riesz_buoyancy(theta, alpha))};
}

namespace detail {

// Copies a half spectrum of size n into a zero-padded half spectrum of size m > n.
// Nyquist modes of the source are dropped.
inline std::vector<cplx> pad_spectrum(const Grid& g, std::span<const cplx> c, std::size_t m) {
  const std::size_t n = g.n(), h = g.half(), hm = m / 2 + 1;
  std::vector<cplx> out(m * hm);
  for (std::size_t i = 0; i < n; ++i) {
    const long k1 = g.lattice(i);
    if (g.is_nyquist(k1)) continue;
    const std::size_t im = static_cast<std::size_t>((k1 + static_cast<long>(m)) % static_cast<long>(m));
    for (std::size_t j = 0; j < n / 2; ++j) out[im * hm + j] = c[i * h + j];
  }
  return out;
}

// Inverse of pad_spectrum: keeps the modes representable on the n grid and
// zeroes the Nyquist lines.
inline std::vector<cplx> truncate_spectrum(const Grid& g, std::span<const cplx> c, std::size_t m) {
  const std::size_t n = g.n(), h = g.half(), hm = m / 2 + 1;
  std::vector<cplx> out(g.spectral_size());
  for (std::size_t i = 0; i < n; ++i) {
    const long k1 = g.lattice(i);
    if (g.is_nyquist(k1)) continue;
    const std::size_t im = static_cast<std::size_t>((k1 + static_cast<long>(m)) % static_cast<long>(m));
    for (std::size_t j = 0; j < n / 2; ++j) out[i * h + j] = c[im * hm + j];
  }
  return out;
}

inline std::vector<double> padded_samples(const SpectralField& f, std::size_t m) {
  return inverse_fft(m, pad_spectrum(f.grid(), f.spectrum(), m));
}

inline std::size_t padded_size(const Grid& g) { return 3 * g.n() / 2; }

}  // namespace detail

/// Dealiased product a*b: zero-pad to 3n/2 points, multiply, truncate.
/// The result carries no Nyquist content.
inline SpectralField dealiased_product(const SpectralField& a, const SpectralField& b) {
  require_same_grid(a.grid(), b.grid());
  const Grid& g = a.grid();
  const std::size_t m = detail::padded_size(g);
  auto pa = detail::padded_samples(a, m);
  const auto pb = detail::padded_samples(b, m);
  for (std::size_t i = 0; i < pa.size(); ++i) pa[i] *= pb[i];
  return SpectralField::from_spectrum(g, detail::truncate_spectrum(g, forward_fft(m, pa), m));
}

/// Dealiased advection term u . grad(phi).
inline SpectralField advect(const VectorField& u, const SpectralField& phi) {
  require_same_grid(u.grid(), phi.grid());
  const Grid& g = phi.grid();
  const std::size_t m = detail::padded_size(g);
  auto p1 = detail::padded_samples(u.x, m);
  const auto p2 = detail::padded_samples(u.y, m);
  const auto d1 = detail::padded_samples(partial(phi, 0), m);
  const auto d2 = detail::padded_samples(partial(phi, 1), m);
  for (std::size_t i = 0; i < p1.size(); ++i) p1[i] = p1[i] * d1[i] + p2[i] * d2[i];
  return SpectralField::from_spectrum(g, detail::truncate_spectrum(g, forward_fft(m, p1), m));
}

/// Leray projection onto divergence-free vector fields; the mean velocity is kept.
inline VectorField leray_project(const VectorField& v) {
  const Grid& g = v.grid();
  const std::size_t n = g.n(), h = g.half();
  std::vector<cplx> a(v.x.spectrum().begin(), v.x.spectrum().end());
  std::vector<cplx> b(v.y.spectrum().begin(), v.y.spectrum().end());
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < h; ++j) {
      const long k1 = g.lattice(i), k2 = g.lattice(j);
      if (k1 == 0 && k2 == 0) continue;
      // Nyquist components have no consistent sign; drop them.
      if (g.is_nyquist(k1) || g.is_nyquist(k2)) {
        a[i * h + j] = 0.0;
        b[i * h + j] = 0.0;
        continue;
      }
      const double x1 = static_cast<double>(k1), x2 = static_cast<double>(k2);
      const double r2 = x1 * x1 + x2 * x2;
      const cplx dot = (x1 * a[i * h + j] + x2 * b[i * h + j]) / r2;
      a[i * h + j] -= x1 * dot;
      b[i * h + j] -= x2 * dot;
    }
  return {SpectralField::from_spectrum(g, std::move(a)), SpectralField::from_spectrum(g, std::move(b))};
}

/// Spectral interpolation of f onto a grid with the same length and m >= n
/// points (Nyquist content of f is dropped).
inline SpectralField prolong(const SpectralField& f, std::size_t m) {
  const Grid& g = f.grid();
  require(m >= g.n(), "prolong target must be at least as fine as the source");
  const Grid gm = make_grid(m, g.length());
  if (m == g.n()) return f;
  return SpectralField::from_spectrum(gm, detail::pad_spectrum(g, f.spectrum(), m));
}

/// Spectral restriction of f onto a coarser grid with m <= n points.
inline SpectralField restrict_to(const SpectralField& f, std::size_t m) {
  const Grid& g = f.grid();
  require(m <= g.n(), "restriction target must be at most as fine as the source");
  if (m == g.n()) return f;
  const Grid gm = make_grid(m, g.length());
  const std::size_t hm = gm.half(), h = g.half();
  std::vector<cplx> out(gm.spectral_size());
  for (std::size_t i = 0; i < m; ++i) {
    const long k1 = gm.lattice(i);
    if (gm.is_nyquist(k1)) continue;
    for (std::size_t j = 0; j < m / 2; ++j) out[i * hm + j] = f.spectrum()[g.index_of(k1) * h + j];
  }
  return SpectralField::from_spectrum(gm, std::move(out));
}

}  // namespace fbl

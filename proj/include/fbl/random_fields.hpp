#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "fbl/error.hpp"
#include "fbl/field.hpp"

namespace fbl {

/// Seeded random mean-free field whose coefficients at radius |xi| are
/// Gaussian with standard deviation |xi|^-decay, restricted to the annulus
/// lo <= |xi| < hi (physical wavenumbers) and rescaled so that the grid max
/// equals amplitude. A zero amplitude returns the unscaled draw.
inline SpectralField random_band_field(const Grid& g, std::uint64_t seed, double lo, double hi,
                                       double decay = 0.0, double amplitude = 0.0) {
  require(hi > lo && lo >= 0.0, "random field band must satisfy 0 <= lo < hi");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> d;
  const std::size_t n = g.n(), h = g.half();
  std::vector<cplx> c(g.spectral_size());
  bool any = false;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < h; ++j) {
      // Draws are made for every slot so that the stream does not depend on the band.
      const double re = d(rng), im = d(rng);
      const long k1 = g.lattice(i), k2 = g.lattice(j);
      if ((k1 == 0 && k2 == 0) || g.is_nyquist(k1) || g.is_nyquist(k2)) continue;
      const double r = std::hypot(g.xi1(i), g.xi2(j));
      if (r < lo || r >= hi) continue;
      c[i * h + j] = cplx{re, im} * std::pow(r, -decay);
      any = true;
    }
  require(any, "random field band contains no grid modes");
  auto f = SpectralField::from_spectrum(g, std::move(c));
  if (amplitude > 0.0) f = (amplitude / f.max_abs()) * f;
  return f;
}

/// Smooth random initial datum: |xi|^-decay spectrum cut at one third of the
/// grid's Nyquist radius, normalized to the given sup amplitude.
inline SpectralField random_smooth_field(const Grid& g, std::uint64_t seed, double decay = 4.0,
                                         double amplitude = 1.0) {
  const double kc = g.wavenumber_unit() * static_cast<double>(g.n()) / 6.0;
  return random_band_field(g, seed, g.wavenumber_unit(), std::max(kc, 2.0 * g.wavenumber_unit()), decay,
                           amplitude);
}

/// Random field with modes drawn only from |k|_inf <= kmax in lattice units,
/// independent of the grid size so that draws on n and 2n agree.
inline SpectralField random_lattice_field(const Grid& g, std::uint64_t seed, long kmax, double decay = 0.0) {
  require(kmax >= 1 && kmax < static_cast<long>(g.n() / 2), "lattice band exceeds grid");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> d;
  const std::size_t h = g.half();
  std::vector<cplx> c(g.spectral_size());
  for (long k1 = -kmax; k1 <= kmax; ++k1)
    for (long k2 = 0; k2 <= kmax; ++k2) {
      const double re = d(rng), im = d(rng);
      if (k2 == 0 && k1 <= 0) continue;
      const double r = std::hypot(static_cast<double>(k1), static_cast<double>(k2)) * g.wavenumber_unit();
      c[g.index_of(k1) * h + static_cast<std::size_t>(k2)] = cplx{re, im} * std::pow(r, -decay);
    }
  return SpectralField::from_spectrum(g, std::move(c));
}

/// Sum of isotropic Gaussian bumps centred in the box; the mean is removed.
inline SpectralField gaussian_bump(const Grid& g, double amplitude, double width) {
  require(width > 0.0, "bump width must be positive");
  const double L = g.length();
  auto f = SpectralField::sample(g, [&](double x, double y) {
    double s = 0.0;
    for (int a = -1; a <= 1; ++a)
      for (int b = -1; b <= 1; ++b) {
        const double dx = x - 0.5 * L + a * L, dy = y - 0.5 * L + b * L;
        s += std::exp(-(dx * dx + dy * dy) / (2.0 * width * width));
      }
    return amplitude * s;
  });
  return f.without_mean();
}

}  // namespace fbl

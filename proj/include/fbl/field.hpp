#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <span>
#include <utility>
#include <vector>

#include "fbl/error.hpp"
#include "fbl/fft.hpp"
#include "fbl/grid.hpp"

namespace fbl {

/// Real scalar field on a periodic grid, holding both its physical samples
/// and its normalized half-spectrum. Values are immutable once built; every
/// operation returns a new field.
///
/// Fields are always real-valued in physical space. Hermitian symmetry of the
/// spectrum is structural for the stored half plane and is enforced on the
/// self-conjugate columns (k2 = 0 and k2 = -n/2) when a field is built from
/// coefficients.
class SpectralField {
 public:
  SpectralField() = default;

  static SpectralField from_physical(const Grid& g, std::vector<double> samples) {
    require(samples.size() == g.size(), "sample count does not match grid");
    SpectralField f;
    f.grid_ = g;
    f.spec_ = forward_fft(g.n(), samples);
    f.phys_ = std::move(samples);
    return f;
  }

  static SpectralField from_spectrum(const Grid& g, std::vector<cplx> coeffs) {
    require(coeffs.size() == g.spectral_size(), "coefficient count does not match grid");
    hermitian_project(g, coeffs);
    SpectralField f;
    f.grid_ = g;
    f.phys_ = inverse_fft(g.n(), coeffs);
    f.spec_ = std::move(coeffs);
    return f;
  }

  static SpectralField zeros(const Grid& g) {
    SpectralField f;
    f.grid_ = g;
    f.phys_.assign(g.size(), 0.0);
    f.spec_.assign(g.spectral_size(), cplx{});
    return f;
  }

  static SpectralField constant(const Grid& g, double c) {
    SpectralField f = zeros(g);
    std::fill(f.phys_.begin(), f.phys_.end(), c);
    f.spec_[0] = c;
    return f;
  }

  /// Samples fn(x1, x2) at the grid nodes.
  template <class Fn>
  static SpectralField sample(const Grid& g, Fn&& fn) {
    std::vector<double> s(g.size());
    for (std::size_t i = 0; i < g.n(); ++i)
      for (std::size_t j = 0; j < g.n(); ++j) s[i * g.n() + j] = fn(g.coord(i), g.coord(j));
    return from_physical(g, std::move(s));
  }

  bool empty() const { return phys_.empty(); }
  const Grid& grid() const { return grid_; }
  std::span<const double> physical() const { return phys_; }
  std::span<const cplx> spectrum() const { return spec_; }

  double at(std::size_t i, std::size_t j) const { return phys_[i * grid_.n() + j]; }
  cplx half_coeff(std::size_t i, std::size_t j) const { return spec_[i * grid_.half() + j]; }

  /// Coefficient at any signed lattice point (k1, k2).
  cplx coeff(long k1, long k2) const {
    const long h = static_cast<long>(grid_.n() / 2);
    long a = k1, b = k2;
    bool conj = false;
    if (b < 0 && b != -h) {
      a = -a;
      b = -b;
      conj = true;
    }
    const std::size_t j = b == -h ? grid_.n() / 2 : static_cast<std::size_t>(b);
    const cplx c = spec_[grid_.index_of(a) * grid_.half() + j];
    return conj ? std::conj(c) : c;
  }

  double mean() const { return spec_.empty() ? 0.0 : spec_[0].real(); }

  double max_abs_coeff() const {
    double m = 0.0;
    for (const auto& c : spec_) m = std::max(m, std::abs(c));
    return m;
  }

  double max_abs() const {
    double m = 0.0;
    for (double v : phys_) m = std::max(m, std::abs(v));
    return m;
  }

  bool is_mean_free(double rtol = 1e-12) const {
    return std::abs(mean()) <= rtol * std::max(max_abs_coeff(), 1e-300);
  }

  bool all_finite() const {
    return std::all_of(phys_.begin(), phys_.end(), [](double v) { return std::isfinite(v); });
  }

  /// Same samples with the zero mode removed.
  SpectralField without_mean() const {
    auto c = spec_;
    c[0] = 0.0;
    std::vector<double> p(phys_);
    const double m = mean();
    for (auto& v : p) v -= m;
    return assemble(grid_, std::move(p), std::move(c));
  }

  /// Rebuild from the physical samples alone, discarding any rounding
  /// mismatch between the two representations.
  SpectralField canonical() const { return from_physical(grid_, phys_); }

  friend SpectralField operator+(const SpectralField& a, const SpectralField& b) {
    return combine(1.0, a, 1.0, b);
  }
  friend SpectralField operator-(const SpectralField& a, const SpectralField& b) {
    return combine(1.0, a, -1.0, b);
  }
  friend SpectralField operator*(double s, const SpectralField& a) {
    std::vector<double> p(a.phys_);
    std::vector<cplx> c(a.spec_);
    for (auto& v : p) v *= s;
    for (auto& v : c) v *= s;
    return assemble(a.grid_, std::move(p), std::move(c));
  }
  friend SpectralField operator-(const SpectralField& a) { return -1.0 * a; }

  /// ca * a + cb * b, evaluated in both representations.
  static SpectralField combine(double ca, const SpectralField& a, double cb, const SpectralField& b) {
    require_same_grid(a.grid_, b.grid_);
    std::vector<double> p(a.phys_.size());
    std::vector<cplx> c(a.spec_.size());
    for (std::size_t i = 0; i < p.size(); ++i) p[i] = ca * a.phys_[i] + cb * b.phys_[i];
    for (std::size_t i = 0; i < c.size(); ++i) c[i] = ca * a.spec_[i] + cb * b.spec_[i];
    return assemble(a.grid_, std::move(p), std::move(c));
  }

  /// Largest violation of coeff(-k) = conj(coeff(k)) over the full lattice,
  /// reconstructed from the stored half plane and the physical samples.
  double hermitian_defect() const {
    const auto full = full_spectrum();
    const std::size_t n = grid_.n();
    double worst = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        const cplx a = full[i * n + j];
        const cplx b = full[((n - i) % n) * n + (n - j) % n];
        worst = std::max(worst, std::abs(a - std::conj(b)));
      }
    return worst;
  }

 private:
  static SpectralField assemble(const Grid& g, std::vector<double> p, std::vector<cplx> c) {
    SpectralField f;
    f.grid_ = g;
    f.phys_ = std::move(p);
    f.spec_ = std::move(c);
    return f;
  }

  // Full n x n DFT of the physical samples (complex-to-complex, direct
  // summation by rows then columns); only used for symmetry diagnostics.
  std::vector<cplx> full_spectrum() const {
    const std::size_t n = grid_.n();
    std::vector<cplx> rows(n * n), out(n * n);
    std::vector<cplx> tw(n);
    for (std::size_t m = 0; m < n; ++m)
      tw[m] = std::polar(1.0, -2.0 * std::numbers::pi * static_cast<double>(m) / static_cast<double>(n));
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t kj = 0; kj < n; ++kj) {
        cplx s{};
        for (std::size_t j = 0; j < n; ++j) s += phys_[i * n + j] * tw[(kj * j) % n];
        rows[i * n + kj] = s;
      }
    for (std::size_t ki = 0; ki < n; ++ki)
      for (std::size_t kj = 0; kj < n; ++kj) {
        cplx s{};
        for (std::size_t i = 0; i < n; ++i) s += rows[i * n + kj] * tw[(ki * i) % n];
        out[ki * n + kj] = s / static_cast<double>(n * n);
      }
    return out;
  }

  static void hermitian_project(const Grid& g, std::vector<cplx>& c) {
    const std::size_t n = g.n();
    const std::size_t h = g.half();
    for (std::size_t j : {std::size_t{0}, n / 2}) {
      for (std::size_t i = 0; i <= n / 2; ++i) {
        const std::size_t ip = (n - i) % n;
        const cplx avg = 0.5 * (c[i * h + j] + std::conj(c[ip * h + j]));
        c[i * h + j] = avg;
        c[ip * h + j] = std::conj(avg);
      }
    }
  }

  Grid grid_;
  std::vector<double> phys_;
  std::vector<cplx> spec_;
};

/// Two-component vector field (e.g. a velocity).
struct VectorField {
  SpectralField x;
  SpectralField y;

  const Grid& grid() const { return x.grid(); }

  friend VectorField operator+(const VectorField& a, const VectorField& b) { return {a.x + b.x, a.y + b.y}; }
  friend VectorField operator-(const VectorField& a, const VectorField& b) { return {a.x - b.x, a.y - b.y}; }
  friend VectorField operator*(double s, const VectorField& a) { return {s * a.x, s * a.y}; }

  static VectorField constant(const Grid& g, double cx, double cy) {
    return {SpectralField::constant(g, cx), SpectralField::constant(g, cy)};
  }
};

}  // namespace fbl

#pragma once

#include <cmath>
#include <cstddef>
#include <numbers>
#include <string>

#include "fbl/error.hpp"

namespace fbl {

/// Uniform periodic grid on the box [0, L)^2 with n points per axis.
///
/// Physical samples are stored row-major: index i along x1 is the slow
/// index, j along x2 the fast one. The spectral side uses the real-to-complex
/// half layout n x (n/2 + 1); lattice index m maps to the signed integer
/// wavenumber m for m < n/2 and m - n otherwise, so the Nyquist index n/2 is
/// read as -n/2. Physical wavenumbers are integers times 2*pi/L.
class Grid {
 public:
  Grid() = default;

  std::size_t n() const { return n_; }
  double length() const { return length_; }
  double spacing() const { return length_ / static_cast<double>(n_); }
  double cell_area() const { return spacing() * spacing(); }
  double area() const { return length_ * length_; }
  double wavenumber_unit() const { return 2.0 * std::numbers::pi / length_; }

  std::size_t size() const { return n_ * n_; }
  std::size_t half() const { return n_ / 2 + 1; }
  std::size_t spectral_size() const { return n_ * half(); }

  /// Signed integer lattice coordinate of array index m.
  long lattice(std::size_t m) const {
    const long ln = static_cast<long>(n_);
    const long lm = static_cast<long>(m);
    return lm < ln / 2 ? lm : lm - ln;
  }
  /// Array index of a signed lattice coordinate (taken modulo n).
  std::size_t index_of(long k) const {
    const long ln = static_cast<long>(n_);
    return static_cast<std::size_t>(((k % ln) + ln) % ln);
  }
  bool is_nyquist(long k) const { return k == -static_cast<long>(n_ / 2); }

  double xi1(std::size_t i) const { return wavenumber_unit() * static_cast<double>(lattice(i)); }
  double xi2(std::size_t j) const { return wavenumber_unit() * static_cast<double>(lattice(j)); }

  double coord(std::size_t i) const { return spacing() * static_cast<double>(i); }

  /// Largest |xi| present on the lattice (the corner mode).
  double max_wavenumber() const {
    return std::sqrt(2.0) * 0.5 * static_cast<double>(n_) * wavenumber_unit();
  }
  /// Smallest nonzero |xi|.
  double min_wavenumber() const { return wavenumber_unit(); }

  bool operator==(const Grid& o) const { return n_ == o.n_ && length_ == o.length_; }
  bool operator!=(const Grid& o) const { return !(*this == o); }

  friend Grid make_grid(std::size_t n, double length);

 private:
  Grid(std::size_t n, double length) : n_(n), length_(length) {}
  std::size_t n_ = 0;
  double length_ = 0.0;
};

inline bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

inline Grid make_grid(std::size_t n, double length) {
  require(n >= 8 && is_power_of_two(n),
          "grid size must be a power of two >= 8, got " + std::to_string(n));
  require(length > 0.0 && std::isfinite(length), "box length must be positive");
  return Grid(n, length);
}

inline void require_same_grid(const Grid& a, const Grid& b) {
  require(a == b, "fields live on different grids");
}

}  // namespace fbl

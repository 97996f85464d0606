#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "fbl/bump.hpp"
#include "fbl/calculus.hpp"
#include "fbl/error.hpp"
#include "fbl/field.hpp"
#include "fbl/multiplier.hpp"
#include "fbl/norms.hpp"

namespace fbl {

/// Dyadic blocks j = jmin..jmax with symbols zeta(2^-j |xi|), plus a low
/// remainder block (index jmin - 1, symbol Upsilon(2^(1-jmin) |xi|)) that
/// carries the mean and anything below 2^jmin.
struct DyadicPartition {
  Grid grid;
  int jmin = 0;
  int jmax = 0;

  int low_index() const { return jmin - 1; }
  int count() const { return jmax - jmin + 2; }

  /// Symbol of block j (j = jmin - 1 is the low remainder) at radius r.
  double symbol(int j, double r) const {
    if (j == low_index()) return upsilon(std::ldexp(r, 1 - jmin));
    return zeta_j(j, r);
  }

  /// Sum of the block symbols jmin..jmax, equal to
  /// Upsilon(2^-jmax r) - Upsilon(2^(1-jmin) r).
  double coverage(double r) const {
    double s = 0.0;
    for (int j = jmin; j <= jmax; ++j) s += zeta_j(j, r);
    return s;
  }
};

inline DyadicPartition build_partition(const Grid& g, int jmin, int jmax) {
  require(jmax >= jmin, "partition needs jmax >= jmin");
  require(std::ldexp(1.0, jmax) >= g.max_wavenumber() * (1.0 - 1e-12),
          "jmax too small: 2^jmax must cover the grid's largest wavenumber");
  require(std::ldexp(1.0, jmin) <= g.min_wavenumber() * (1.0 + 1e-12),
          "jmin too large: 2^jmin must not exceed the smallest nonzero wavenumber");
  return DyadicPartition{g, jmin, jmax};
}

/// Tightest partition for the grid.
inline DyadicPartition build_partition(const Grid& g) {
  const int jmin = static_cast<int>(std::floor(std::log2(g.min_wavenumber()) + 1e-12));
  const int jmax = static_cast<int>(std::ceil(std::log2(g.max_wavenumber()) - 1e-12));
  return build_partition(g, jmin, jmax);
}

/// Delta_j f for j in [jmin, jmax], or the low remainder for j = jmin - 1.
inline SpectralField dyadic_block(const DyadicPartition& P, const SpectralField& f, int j) {
  require_same_grid(P.grid, f.grid());
  require(j >= P.low_index() && j <= P.jmax, "block index outside the partition");
  const double zero = j == P.low_index() ? 1.0 : 0.0;
  return apply_symbol(
      f, [&P, j](double a, double b) { return cplx{P.symbol(j, std::hypot(a, b))}; }, zero);
}

/// All blocks of one field with cached partial sums.
class BlockSet {
 public:
  BlockSet(const DyadicPartition& P, const SpectralField& f) : P_(P) {
    for (int j = P.low_index(); j <= P.jmax; ++j) blocks_.push_back(dyadic_block(P, f, j));
  }

  const DyadicPartition& partition() const { return P_; }

  /// Block j, or zero outside [jmin - 1, jmax].
  SpectralField block(int j) const {
    if (j < P_.low_index() || j > P_.jmax) return SpectralField::zeros(P_.grid);
    return blocks_[static_cast<std::size_t>(j - P_.low_index())];
  }

  /// Sum of blocks with lo <= j <= hi, truncated at the partition bounds.
  SpectralField range(int lo, int hi) const {
    lo = std::max(lo, P_.low_index());
    hi = std::min(hi, P_.jmax);
    SpectralField s = SpectralField::zeros(P_.grid);
    for (int j = lo; j <= hi; ++j) s = s + blocks_[static_cast<std::size_t>(j - P_.low_index())];
    return s;
  }

  /// f_{<k}: all blocks below k, including the low remainder.
  SpectralField below(int k) const { return range(P_.low_index(), k - 1); }
  /// f_{~k}: blocks with |j - k| <= width.
  SpectralField near(int k, int width) const { return range(k - width, k + width); }
  /// f_{>=k}.
  SpectralField from(int k) const { return range(k, P_.jmax); }

  SpectralField reconstruct() const { return range(P_.low_index(), P_.jmax); }

 private:
  DyadicPartition P_;
  std::vector<SpectralField> blocks_;
};

/// S(x) = (sum_j 2^(2 j w) |Delta_j f(x)|^2)^(1/2) over j in [jmin, jmax].
inline SpectralField square_function(const DyadicPartition& P, const SpectralField& f, double weight) {
  require(f.is_mean_free(1e-10), "square function needs a mean-free field");
  std::vector<double> acc(f.grid().size(), 0.0);
  for (int j = P.jmin; j <= P.jmax; ++j) {
    const auto b = dyadic_block(P, f, j);
    const double w = std::exp2(2.0 * j * weight);
    const auto p = b.physical();
    for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += w * p[i] * p[i];
  }
  for (auto& v : acc) v = std::sqrt(v);
  return SpectralField::from_physical(f.grid(), std::move(acc));
}

/// ||f||_{B^s_{r,inf}} = sup_j 2^(j s) ||Delta_j f||_{L^r} over [jmin, jmax].
inline double besov_norm(const DyadicPartition& P, const SpectralField& f, double s, double r) {
  require(r >= 1.0, "Besov integrability index must be >= 1");
  require(f.is_mean_free(1e-10), "Besov norm needs a mean-free field");
  double best = 0.0;
  for (int j = P.jmin; j <= P.jmax; ++j)
    best = std::max(best, std::exp2(j * s) * lp_norm(dyadic_block(P, f, j), r));
  return best;
}

inline double besov_norm(const SpectralField& f, double s, double r) {
  return besov_norm(build_partition(f.grid()), f, s, r);
}

struct Paraproduct {
  SpectralField lowhigh;
  SpectralField highlow;
  SpectralField highhigh;
  SpectralField sum() const { return lowhigh + highlow + highhigh; }
};

/// Splits Delta_k(f g) into
///   lowhigh  = Delta_k(f_{<k-N} g_{~k}),
///   highlow  = Delta_k(f_{~k} g_{<k+N}),
///   highhigh = Delta_k(f_{~k} g_{>=k+N}) + Delta_k(sum_{j>k+N} f_j g_{~j}),
/// where ~ means within N blocks. The pieces cover every block pair whose
/// product can reach block k, so their sum is Delta_k(f g) for N >= 2.
inline Paraproduct paraproduct_split(const DyadicPartition& P, const SpectralField& f,
                                     const SpectralField& g, int k, int offset = 10) {
  require(k >= P.jmin && k <= P.jmax, "paraproduct block outside the partition");
  require(offset >= 2, "paraproduct offset must be >= 2");
  const BlockSet F(P, f), G(P, g);
  const int N = offset;
  auto Dk = [&](const SpectralField& a, const SpectralField& b) {
    return dyadic_block(P, dealiased_product(a, b), k);
  };
  Paraproduct out;
  out.lowhigh = Dk(F.below(k - N), G.near(k, N));
  out.highlow = Dk(F.near(k, N), G.below(k + N));
  SpectralField hh = Dk(F.near(k, N), G.from(k + N));
  for (int j = k + N + 1; j <= P.jmax; ++j) hh = hh + Dk(F.block(j), G.near(j, N));
  out.highhigh = hh;
  return out;
}

namespace detail {

// Periodic window sums of width 2r + 1 (r < n) along both axes.
inline std::vector<double> box_sum(const std::vector<double>& a, std::size_t n, std::size_t r) {
  std::vector<double> rows(n * n), out(n * n), pre(3 * n + 1);
  auto window = [&](auto get, auto put) {
    pre[0] = 0.0;
    for (std::size_t t = 0; t < 3 * n; ++t) pre[t + 1] = pre[t] + get(t % n);
    for (std::size_t c = 0; c < n; ++c) put(c, pre[c + n + r + 1] - pre[c + n - r]);
  };
  for (std::size_t i = 0; i < n; ++i)
    window([&](std::size_t t) { return a[i * n + t]; }, [&](std::size_t c, double s) { rows[i * n + c] = s; });
  for (std::size_t j = 0; j < n; ++j)
    window([&](std::size_t t) { return rows[t * n + j]; }, [&](std::size_t c, double s) { out[c * n + j] = s; });
  return out;
}

}  // namespace detail

/// Discrete Hardy-Littlewood maximal function: pointwise max of the averages
/// of |f| over square windows of radius 0, 1, 2, 4, ..., n/4 cells centred at
/// the point, and over the whole box.
inline SpectralField maximal_function(const SpectralField& f) {
  const std::size_t n = f.grid().n();
  std::vector<double> a(f.physical().begin(), f.physical().end());
  for (auto& v : a) v = std::abs(v);
  std::vector<double> m(a);
  double total = 0.0;
  for (double v : a) total += v;
  const double box_mean = total / static_cast<double>(n * n);
  for (std::size_t r = 1; r <= n / 4; r *= 2) {
    const auto s = detail::box_sum(a, n, r);
    const double area = static_cast<double>((2 * r + 1) * (2 * r + 1));
    for (std::size_t i = 0; i < m.size(); ++i) m[i] = std::max(m[i], s[i] / area);
  }
  for (auto& v : m) v = std::max(v, box_mean);
  return SpectralField::from_physical(f.grid(), std::move(m));
}

/// max_x |h(x)| / M[f](x) over points where M[f] is not negligible.
inline double domination_ratio(const SpectralField& h, const SpectralField& maximal) {
  const auto a = h.physical();
  const auto m = maximal.physical();
  const double floor = 1e-12 * maximal.max_abs();
  double c = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (m[i] > floor) c = std::max(c, std::abs(a[i]) / m[i]);
  return c;
}

struct DominationReport {
  double block = 0.0;  ///< max_k sup |Delta_k f| / M[f]
  double low = 0.0;    ///< max_k sup |f_{<k}| / M[f]
};

inline DominationReport measure_domination(const DyadicPartition& P, const SpectralField& f) {
  const auto M = maximal_function(f);
  const BlockSet B(P, f);
  DominationReport r;
  for (int k = P.jmin; k <= P.jmax; ++k) {
    r.block = std::max(r.block, domination_ratio(B.block(k), M));
    r.low = std::max(r.low, domination_ratio(B.below(k), M));
  }
  return r;
}

/// ||(sum_k (M g_k)^2)^(1/2)||_p / ||(sum_k |g_k|^2)^(1/2)||_p.
inline double fefferman_stein_ratio(const std::vector<SpectralField>& family, double p) {
  require(!family.empty(), "Fefferman-Stein check needs a non-empty family");
  const Grid& g = family.front().grid();
  std::vector<double> lhs(g.size(), 0.0), rhs(g.size(), 0.0);
  for (const auto& h : family) {
    const auto M = maximal_function(h);
    for (std::size_t i = 0; i < lhs.size(); ++i) {
      lhs[i] += M.physical()[i] * M.physical()[i];
      rhs[i] += h.physical()[i] * h.physical()[i];
    }
  }
  for (auto& v : lhs) v = std::sqrt(v);
  for (auto& v : rhs) v = std::sqrt(v);
  return lp_norm(SpectralField::from_physical(g, std::move(lhs)), p) /
         lp_norm(SpectralField::from_physical(g, std::move(rhs)), p);
}

}  // namespace fbl

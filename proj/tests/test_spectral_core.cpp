#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "fbl/calculus.hpp"
#include "fbl/multiplier.hpp"
#include "fbl/norms.hpp"

using namespace fbl;
using std::numbers::pi;

namespace {

struct Mode {
  int k1, k2;
  double a, b;
};

std::vector<Mode> random_modes(int count, int kmax, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> k(-kmax, kmax);
  std::normal_distribution<double> c;
  std::vector<Mode> out;
  while (static_cast<int>(out.size()) < count) {
    Mode m{k(rng), k(rng), c(rng), c(rng)};
    if (m.k1 == 0 && m.k2 == 0) continue;
    out.push_back(m);
  }
  return out;
}

// Samples sum_m w(k) (a cos(k.x) + b sin(k.x)) directly, with an optional
// phase shift applied to odd symbols (w imaginary).
template <class W>
SpectralField sum_modes(const Grid& g, const std::vector<Mode>& modes, W&& w) {
  const double u = g.wavenumber_unit();
  return SpectralField::sample(g, [&](double x, double y) {
    double s = 0.0;
    for (const auto& m : modes) {
      const double ph = u * (m.k1 * x + m.k2 * y);
      const cplx c = w(m.k1, m.k2);
      // Re[c * (a - i b) e^{i ph}] = Re(c)(a cos + b sin) + Im(c)(b cos - a sin)
      s += c.real() * (m.a * std::cos(ph) + m.b * std::sin(ph)) +
           c.imag() * (m.b * std::cos(ph) - m.a * std::sin(ph));
    }
    return s;
  });
}

double max_diff(const SpectralField& a, const SpectralField& b) { return (a - b).max_abs(); }

}  // namespace

TEST(Grid, LatticeOnTwoPiBox) {
  const Grid g = make_grid(8, 2 * pi);
  std::vector<long> ks;
  for (std::size_t i = 0; i < 8; ++i) ks.push_back(g.lattice(i));
  std::sort(ks.begin(), ks.end());
  EXPECT_EQ(ks, (std::vector<long>{-4, -3, -2, -1, 0, 1, 2, 3}));
  EXPECT_NEAR(g.wavenumber_unit(), 1.0, 1e-15);
}

TEST(Grid, SpacingOnPiBox) { EXPECT_NEAR(make_grid(16, pi).wavenumber_unit(), 2.0, 1e-15); }

TEST(Grid, RejectsBadInput) {
  EXPECT_THROW(make_grid(7, 2 * pi), ValidationError);
  EXPECT_THROW(make_grid(4, 2 * pi), ValidationError);
  EXPECT_THROW(make_grid(16, 0.0), ValidationError);
  EXPECT_THROW(make_grid(16, -1.0), ValidationError);
}

TEST(SpectralField, RoundTripAndHermitian) {
  const Grid g = make_grid(32, 2 * pi);
  std::mt19937_64 rng(3);
  std::normal_distribution<double> d;
  std::vector<double> s(g.size());
  for (auto& v : s) v = d(rng);
  const auto f = SpectralField::from_physical(g, s);
  const auto back = SpectralField::from_spectrum(g, {f.spectrum().begin(), f.spectrum().end()});
  double err = 0.0, scale = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    err = std::max(err, std::abs(back.physical()[i] - s[i]));
    scale = std::max(scale, std::abs(s[i]));
  }
  EXPECT_LE(err, 1e-12 * scale);
  EXPECT_LE(f.hermitian_defect(), 1e-13 * f.max_abs_coeff());
}

TEST(Multiplier, LambdaHalfOnSingleMode) {
  const Grid g = make_grid(32, 2 * pi);
  const auto f = SpectralField::sample(g, [](double x, double) { return std::cos(2 * x); });
  const auto out = apply_multiplier(f, MultiplierSpec::lambda_pow(0.5));
  EXPECT_LE(max_diff(out, std::sqrt(2.0) * f), 1e-13);
}

TEST(Multiplier, RieszOnConstantVanishes) {
  const Grid g = make_grid(16, 2 * pi);
  EXPECT_EQ(riesz(SpectralField::constant(g, 3.0), 0.75).max_abs(), 0.0);
}

TEST(Multiplier, FractionalPowerMatchesModeSum) {
  const Grid g = make_grid(32, 2 * pi);
  const auto modes = random_modes(10, 7, 11);
  const auto f = sum_modes(g, modes, [](int, int) { return cplx{1.0}; });
  const auto expect = sum_modes(g, modes, [](int a, int b) { return cplx{std::pow(std::hypot(a, b), 0.63)}; });
  const auto got = apply_multiplier(f, MultiplierSpec::lambda_pow(0.63));
  EXPECT_LE(max_diff(got, expect), 1e-13 * std::max(1.0, expect.max_abs()));
}

TEST(Multiplier, RieszMatchesModeSum) {
  const Grid g = make_grid(32, 2 * pi);
  const auto modes = random_modes(10, 7, 12);
  const auto f = sum_modes(g, modes, [](int, int) { return cplx{1.0}; });
  const auto expect = sum_modes(g, modes, [](int a, int b) {
    return cplx{0.0, static_cast<double>(a)} * std::pow(std::hypot(a, b), -0.75);
  });
  EXPECT_LE(max_diff(riesz(f, 0.75), expect), 1e-13 * std::max(1.0, expect.max_abs()));
}

TEST(Multiplier, IdentityZeroModeRules) {
  const Grid g = make_grid(16, 2 * pi);
  const auto f = SpectralField::constant(g, 2.0);
  EXPECT_THROW(apply_multiplier(f, MultiplierSpec::lambda_pow(-0.5).with_zero_mode(ZeroMode::identity)),
               ValidationError);
  EXPECT_THROW(apply_multiplier(f, MultiplierSpec::riesz(0.75).with_zero_mode(ZeroMode::identity)),
               ValidationError);
  EXPECT_THROW(apply_multiplier(f, MultiplierSpec::lambda_pow(0.5).with_zero_mode(ZeroMode::identity)),
               ValidationError);
  const auto id = apply_multiplier(f, MultiplierSpec::lambda_pow(0.0).with_zero_mode(ZeroMode::identity));
  EXPECT_NEAR(id.mean(), 2.0, 1e-15);
}

TEST(Multiplier, CompositionCommutes) {
  const Grid g = make_grid(32, 2 * pi);
  const auto f = sum_modes(g, random_modes(12, 15, 5), [](int, int) { return cplx{1.0}; });
  for (auto [a, b] : {std::pair{0.3, -0.8}, std::pair{-0.25, 1.1}, std::pair{0.7, 0.6}}) {
    const auto lhs = lambda(lambda(f, a), b);
    const auto rhs = lambda(f, a + b);
    double err = 0.0;
    for (std::size_t i = 0; i < lhs.spectrum().size(); ++i)
      err = std::max(err, std::abs(lhs.spectrum()[i] - rhs.spectrum()[i]));
    EXPECT_LE(err, 1e-13 * rhs.max_abs_coeff());
  }
}

TEST(Multiplier, OddSymbolKeepsHermitian) {
  const Grid g = make_grid(16, 2 * pi);
  std::mt19937_64 rng(9);
  std::normal_distribution<double> d;
  std::vector<double> s(g.size());
  for (auto& v : s) v = d(rng);
  const auto f = SpectralField::from_physical(g, s).without_mean();
  const auto r = riesz(lambda(f, 0.2), 0.6);
  EXPECT_LE(r.hermitian_defect(), 1e-13 * std::max(1.0, r.max_abs_coeff()));
  const auto dd = partial(partial(f, 0), 1);
  EXPECT_LE(dd.hermitian_defect(), 1e-13 * std::max(1.0, dd.max_abs_coeff()));
}

TEST(BiotSavart, SineInX1) {
  const Grid g = make_grid(32, 2 * pi);
  const auto w = SpectralField::sample(g, [](double x, double) { return std::sin(x); });
  const auto u = biot_savart(w);
  EXPECT_LE(u.x.max_abs(), 1e-14);
  const auto want = SpectralField::sample(g, [](double x, double) { return -std::cos(x); });
  EXPECT_LE(max_diff(u.y, want), 1e-14);
}

TEST(BiotSavart, SineInX2) {
  const Grid g = make_grid(32, 2 * pi);
  const auto w = SpectralField::sample(g, [](double, double y) { return std::sin(y); });
  const auto u = biot_savart(w);
  const auto want = SpectralField::sample(g, [](double, double y) { return std::cos(y); });
  EXPECT_LE(max_diff(u.x, want), 1e-14);
  EXPECT_LE(u.y.max_abs(), 1e-14);
}

TEST(BiotSavart, CurlAndDivergence) {
  const Grid g = make_grid(32, 3.0);
  const auto w = sum_modes(g, random_modes(15, 10, 21), [](int, int) { return cplx{1.0}; });
  const auto u = biot_savart(w);
  EXPECT_LE(divergence(u).max_abs_coeff(), 1e-14 * w.max_abs_coeff());
  EXPECT_LE(max_diff(curl(u), w), 1e-12 * w.max_abs());
}

TEST(BiotSavart, RejectsMean) {
  const Grid g = make_grid(16, 2 * pi);
  EXPECT_THROW(biot_savart(SpectralField::constant(g, 1.0)), ValidationError);
}

TEST(VelocityDecomposition, ZeroThetaGivesBiotSavart) {
  const Grid g = make_grid(32, 2 * pi);
  const auto f = sum_modes(g, random_modes(8, 6, 2), [](int, int) { return cplx{1.0}; });
  const auto split = velocity_decomposition(f, SpectralField::zeros(g), 0.75);
  EXPECT_EQ(split.u_theta.x.max_abs(), 0.0);
  const auto bs = biot_savart(f);
  EXPECT_LE(max_diff(split.u_f.x, bs.x) + max_diff(split.u_f.y, bs.y), 1e-15);
}

TEST(VelocityDecomposition, CosineThetaClosedForm) {
  // theta = cos x1: R_a(I + L^(b-a)) theta = -2 sin x1 (|k| = 1), and
  // grad-perp Delta^-1 of -2 sin x1 is (0, 2 cos x1).
  const Grid g = make_grid(32, 2 * pi);
  const auto th = SpectralField::sample(g, [](double x, double) { return std::cos(x); });
  const auto split = velocity_decomposition(SpectralField::zeros(g), th, 0.75);
  EXPECT_LE(split.u_theta.x.max_abs(), 1e-14);
  const auto want = SpectralField::sample(g, [](double x, double) { return 2.0 * std::cos(x); });
  EXPECT_LE(max_diff(split.u_theta.y, want), 1e-13);
  EXPECT_NEAR(split.u_theta.y.coeff(1, 0).real(), 1.0, 1e-13);
  EXPECT_NEAR(split.u_theta.y.coeff(-1, 0).real(), 1.0, 1e-13);
}

TEST(VelocityDecomposition, ScaledBoxClosedForm) {
  // L = pi so xi = 2 k; theta = cos(2 x1) has |xi| = 2.
  const double a = 0.7, b = 0.3;
  const Grid g = make_grid(32, pi);
  const auto th = SpectralField::sample(g, [](double x, double) { return std::cos(2 * x); });
  const auto split = velocity_decomposition(SpectralField::zeros(g), th, a);
  // symbol i xi1 |xi|^-a (1 + |xi|^(b-a)) times (i xi2, -i xi1)/|xi|^2 -> u2 = xi1^2 ... / |xi|^2
  const double amp = std::pow(2.0, -a) * (1.0 + std::pow(2.0, b - a));
  const auto want = SpectralField::sample(g, [&](double x, double) { return amp * std::cos(2 * x); });
  EXPECT_LE(max_diff(split.u_theta.y, want), 1e-13);
}

TEST(VelocityDecomposition, RejectsAlpha) {
  const Grid g = make_grid(16, 2 * pi);
  EXPECT_THROW(velocity_decomposition(SpectralField::zeros(g), SpectralField::zeros(g), 0.4), ValidationError);
  EXPECT_THROW(velocity_decomposition(SpectralField::zeros(g), SpectralField::zeros(g), 1.0), ValidationError);
}

TEST(Dealias, ProductOfLowModesIsExact) {
  const Grid g = make_grid(32, 2 * pi);
  const auto a = SpectralField::sample(g, [](double x, double y) { return std::cos(3 * x + y); });
  const auto b = SpectralField::sample(g, [](double x, double y) { return std::sin(2 * x - 5 * y); });
  const auto prod = dealiased_product(a, b);
  const auto want = SpectralField::sample(
      g, [](double x, double y) { return std::cos(3 * x + y) * std::sin(2 * x - 5 * y); });
  EXPECT_LE(max_diff(prod, want), 1e-14);
}

TEST(Dealias, HighProductsAreTruncatedNotAliased) {
  // The product of modes 10 and 10 on n = 32 lands at 20 > 15 and must vanish
  // instead of folding onto 20 - 32 = -12.
  const Grid g = make_grid(32, 2 * pi);
  const auto a = SpectralField::sample(g, [](double x, double) { return std::cos(10 * x); });
  const auto prod = dealiased_product(a, a);
  EXPECT_NEAR(prod.mean(), 0.5, 1e-14);
  EXPECT_LE(std::abs(prod.coeff(12, 0)), 1e-15);
  EXPECT_LE(std::abs(prod.coeff(-12, 0)), 1e-15);
}

TEST(Leray, ProjectsOutGradients) {
  const Grid g = make_grid(32, 2 * pi);
  const auto p = sum_modes(g, random_modes(8, 8, 4), [](int, int) { return cplx{1.0}; });
  const auto w = sum_modes(g, random_modes(8, 8, 5), [](int, int) { return cplx{1.0}; });
  const auto u = biot_savart(w);
  const auto proj = leray_project(u + gradient(p));
  EXPECT_LE(max_diff(proj.x, u.x) + max_diff(proj.y, u.y), 1e-12);
}

TEST(Prolong, PreservesSamplesOfBandLimitedField) {
  const Grid g = make_grid(16, 2 * pi);
  const auto f = SpectralField::sample(g, [](double x, double y) { return std::sin(3 * x - 2 * y); });
  const auto fine = prolong(f, 64);
  const auto want = SpectralField::sample(fine.grid(), [](double x, double y) { return std::sin(3 * x - 2 * y); });
  EXPECT_LE(max_diff(fine, want), 1e-14);
  EXPECT_LE(max_diff(restrict_to(fine, 16), f), 1e-14);
}

TEST(Norms, ConstantL2) {
  const Grid g = make_grid(16, 2 * pi);
  EXPECT_NEAR(lp_norm(SpectralField::constant(g, 1.0), 2.0), 2 * pi, 1e-13);
}

TEST(Norms, SineSupAndL2) {
  const Grid g = make_grid(64, 2 * pi);
  const auto f = SpectralField::sample(g, [](double x, double) { return std::sin(x); });
  EXPECT_NEAR(lp_norm(f, infinity), 1.0, 1e-3);
  EXPECT_LE(lp_norm(f, infinity), 1.0 + 1e-15);
  EXPECT_NEAR(lp_norm(f, 2.0), std::sqrt(2 * pi * pi), 1e-12);
}

TEST(Norms, SobolevForms) {
  const Grid g = make_grid(32, 2 * pi);
  const auto f = SpectralField::sample(g, [](double x, double y) { return std::cos(3 * x) + 0.2 + std::sin(y); });
  EXPECT_NEAR(sobolev_norm(f, 0.0, 3.0), 2 * lp_norm(f, 3.0), 1e-13);
  const auto c = SpectralField::sample(g, [](double x, double) { return std::cos(3 * x); });
  EXPECT_NEAR(homogeneous_norm(c, 1.0, 2.0), 3 * lp_norm(c, 2.0), 1e-12);
  EXPECT_THROW(homogeneous_norm(f, -0.5, 2.0), ValidationError);
  EXPECT_THROW(lp_norm(f, 0.5), ValidationError);
}

TEST(Norms, ParsevalMatchesQuadrature) {
  const Grid g = make_grid(32, 5.0);
  std::mt19937_64 rng(17);
  std::normal_distribution<double> d;
  std::vector<double> s(g.size());
  for (auto& v : s) v = d(rng);
  const auto f = SpectralField::from_physical(g, s);
  const double l2 = lp_norm(f, 2.0);
  EXPECT_NEAR(parseval_norm(f, 0.0), l2, 1e-12 * l2);
  for (double sp : {0.4, 1.3}) {
    const double q = homogeneous_norm(f, sp, 2.0);
    EXPECT_NEAR(parseval_norm(f, sp), q, 1e-12 * q);
  }
}

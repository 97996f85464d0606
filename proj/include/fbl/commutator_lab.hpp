#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "fbl/calculus.hpp"
#include "fbl/error.hpp"
#include "fbl/field.hpp"
#include "fbl/littlewood_paley.hpp"
#include "fbl/multiplier.hpp"
#include "fbl/norms.hpp"
#include "fbl/random_fields.hpp"

namespace fbl {

// ---------------------------------------------------------------------------
// Commutators and random velocities.

inline VectorField lambda(const VectorField& v, double s) { return {lambda(v.x, s), lambda(v.y, s)}; }

/// Largest |xi . V^(xi)| relative to the largest |xi| |V^(xi)|.
inline double relative_divergence(const VectorField& v) {
  const double d = divergence(v).max_abs_coeff();
  const double ref = std::max(partial(v.x, 0).max_abs_coeff() + partial(v.x, 1).max_abs_coeff(),
                              partial(v.y, 0).max_abs_coeff() + partial(v.y, 1).max_abs_coeff());
  return ref > 0.0 ? d / ref : 0.0;
}

inline void require_divergence_free(const VectorField& v) {
  require(relative_divergence(v) <= 1e-12, "commutator velocity must be divergence free");
}

/// [op, V.grad] phi = op(V.grad phi) - V.grad(op phi).
inline SpectralField commutator_field(const MultiplierSpec& op, const VectorField& V, const SpectralField& phi) {
  require_divergence_free(V);
  require_same_grid(V.grid(), phi.grid());
  return apply_multiplier(advect(V, phi), op) - advect(V, apply_multiplier(phi, op));
}

/// Pointwise Frobenius norm of grad V.
inline SpectralField gradient_magnitude(const VectorField& v) {
  const auto a = partial(v.x, 0), b = partial(v.x, 1), c = partial(v.y, 0), d = partial(v.y, 1);
  std::vector<double> m(a.physical().size());
  for (std::size_t i = 0; i < m.size(); ++i)
    m[i] = std::sqrt(a.physical()[i] * a.physical()[i] + b.physical()[i] * b.physical()[i] +
                     c.physical()[i] * c.physical()[i] + d.physical()[i] * d.physical()[i]);
  return SpectralField::from_physical(v.grid(), std::move(m));
}

/// V = grad-perp Lambda^-1 psi where psi has Gaussian coefficients of size
/// |xi|^-decay on the dyadic band 2^jlo <= |xi| < 2^(jhi+1).
inline VectorField random_divfree_field(const Grid& g, std::uint64_t seed, int jlo, int jhi, double decay = 0.0) {
  require(jhi >= jlo, "velocity band must satisfy jlo <= jhi");
  const SpectralField psi =
      random_band_field(g, seed, std::ldexp(1.0, jlo), std::ldexp(1.0, jhi + 1), decay);
  const SpectralField q = lambda(psi, -1.0);
  return {-1.0 * partial(q, 1), partial(q, 0)};
}

/// Pairing check: <[Lambda^s, V.grad] phi, psi> against
/// <V.grad phi, Lambda^s psi> - <V.grad Lambda^s phi, psi>.
inline double duality_residual(double s, const VectorField& V, const SpectralField& phi, const SpectralField& psi) {
  const double lhs = inner(commutator_field(MultiplierSpec::lambda_pow(s), V, phi), psi);
  const double rhs = inner(advect(V, phi), lambda(psi, s)) - inner(advect(V, lambda(phi, s)), psi);
  return std::abs(lhs - rhs);
}

// ---------------------------------------------------------------------------
// Inequality registry.

/// One commutator inequality with concrete exponents. The family names the
/// estimate; exponents are looked up by name.
struct InequalitySpec {
  std::string id;
  std::string family;
  std::map<std::string, double> e;
  bool canary = false;         ///< hypotheses deliberately violated
  bool near_boundary = false;  ///< within 0.05 of a strict hypothesis
  std::vector<std::string> violations;

  double operator[](const std::string& key) const {
    const auto it = e.find(key);
    require(it != e.end(), id + ": missing exponent '" + key + "'");
    return it->second;
  }
};

inline const std::vector<std::string>& inequality_families() {
  static const std::vector<std::string> f{"aaa", "fazel5", "fazel6", "eq20", "eq25",
                                          "f10", "f20",    "eq200",  "eq201", "g50"};
  return f;
}

namespace detail {

inline bool holder3(double a, double b, double c) {
  return std::abs(1.0 / a + 1.0 / b + 1.0 / c - 1.0) <= 1e-12;
}

inline std::vector<std::string> hypotheses(const InequalitySpec& s) {
  std::vector<std::string> bad;
  const std::string& f = s.family;
  auto need = [&](bool ok, const std::string& what) {
    if (!ok) bad.push_back(f + " requires " + what);
  };
  auto in_open = [](double x, double lo, double hi) { return x > lo && x < hi; };
  if (f == "aaa") {
    need(in_open(s["S"], 0, 1), "0<S<1");
    for (const char* k : {"S1", "S2", "S3"}) need(s[k] >= 0.0 && s[k] <= 1.0, std::string("0<=") + k + "<=1");
    need(s["S1"] + s["S2"] + s["S3"] > 1.0 + s["S"], "S1+S2+S3>1+S");
    need(in_open(s["p2"], 1, INFINITY), "1<p2<∞");
    need(s["p1"] > 1.0 && s["p3"] > 1.0, "1<p1,p3<=∞");
    need(holder3(s["p1"], s["p2"], s["p3"]), "1/p1+1/p2+1/p3=1");
  } else if (f == "fazel5") {
    need(in_open(s["alpha"], 0.5, 1), "1/2<alpha<1");
    need(s["s1"] >= 0.0 && s["s1"] <= 1.0 && s["s2"] >= 0.0 && s["s2"] <= 1.0, "0<=s1,s2<=1");
    need(s["s1"] + s["s2"] > 1.0 - s["alpha"], "s1+s2>1-alpha");
    need(in_open(s["p2"], 1, INFINITY), "1<p2<∞");
    need(s["p1"] > 1.0, "1<p1<=∞");
    need(in_open(s["p3"], 1, INFINITY), "1<p3<∞");
    need(holder3(s["p1"], s["p2"], s["p3"]), "1/p1+1/p2+1/p3=1");
  } else if (f == "fazel6") {
    need(in_open(s["S"], 0, 1), "0<S<1");
    need(s["s2"] >= 0.0 && s["s2"] < 1.0 && s["s3"] >= 0.0 && s["s3"] < 1.0, "0<=s2,s3<1");
    need(s["s2"] + s["s3"] > 1.0 + s["S"], "s2+s3>1+S");
    need(in_open(s["p2"], 1, INFINITY), "1<p2<∞");
    need(s["p1"] > 1.0, "1<p1<=∞");
    need(in_open(s["p3"], 1, INFINITY), "1<p3<∞");
    need(holder3(s["p1"], s["p2"], s["p3"]), "1/p1+1/p2+1/p3=1");
  } else if (f == "eq20") {
    const double d = s["s2"] - s["s1"];
    need(s["s1"] >= 0.0, "0<=s1");
    need(d >= 0.0 && d <= 1.0, "0<=s2-s1<=1");
    need(s["a"] >= d && s["a"] <= 1.0, "a in [s2-s1,1]");
    need(in_open(s["q"], 2, INFINITY), "2<q<∞");
    need(in_open(s["p"], 1, INFINITY) && in_open(s["r"], 1, INFINITY), "1<p,r<∞");
    need(std::abs(1.0 / s["p"] - 1.0 / s["q"] - 1.0 / s["r"]) <= 1e-12, "1/p=1/q+1/r");
  } else if (f == "eq25") {
    need(in_open(s["s1"], 0, 1), "0<s1<1");
    need(in_open(s["s3"], 0, 1), "0<s3<1");
    need(s["s2"] > 0.0, "0<s2");
    need(s["s2"] < s["s1"] + s["s3"], "s2<s1+s3");
  } else if (f == "f10" || f == "f20") {
    need(s["s"] >= 0.0 && s["s"] <= 1.0, "0<=s<=1");
    need(s["p1"] > 2.0, "p1>2");
    need(s["p2"] > 1.0 && s["p3"] > 1.0, "1<p2,p3");
    need(holder3(s["p1"], s["p2"], s["p3"]), "1/p1+1/p2+1/p3=1");
    if (f == "f20") need(s["a"] >= s["s"] && s["a"] <= 1.0, "a in [s,1]");
  } else if (f == "eq201") {
    need(s["s1"] >= 0.0, "0<=s1");
    need(s["s2"] > 0.0, "0<s2");
    need(s["s1"] + s["s2"] < 1.0, "s1+s2<1");
    need(s["a"] > s["s1"] + s["s2"] && s["a"] <= 1.0, "s1+s2<a<=1");
    need(in_open(s["q"], 2, INFINITY), "2<q<∞");
    need(in_open(s["r"], 1, INFINITY), "1<r<∞");
    need(std::abs(1.0 / s["p"] - 1.0 / s["q"] - 1.0 / s["r"]) <= 1e-12, "1/p=1/q+1/r");
  } else if (f == "eq200") {
    const double beta = 1.0 - s["alpha"];
    need(in_open(s["alpha"], 0.5, 1), "1/2<alpha<1");
    need(s["s"] >= 0.0 && s["s"] < s["alpha"], "0<=s<alpha");
    need(s["a"] > beta + s["s"] && s["a"] <= 1.0, "beta+s<a<=1");
    need(in_open(s["q"], 2, INFINITY) && in_open(s["r"], 2, INFINITY), "2<q,r<∞");
    need(std::abs(0.5 - 1.0 / s["q"] - 1.0 / s["r"]) <= 1e-12, "1/2=1/q+1/r");
  } else if (f == "g50") {
    need(in_open(s["q1"], 1, INFINITY), "1<q1<∞");
    need(std::abs(1.0 / s["p1"] + 1.0 / s["q1"] - 1.0) <= 1e-12, "1/p1+1/q1=1");
  } else {
    bad.push_back("unknown inequality family '" + f + "'");
  }
  return bad;
}

inline bool near_boundary(const InequalitySpec& s) {
  if (s.family == "eq25") return s["s1"] + s["s3"] - s["s2"] < 0.05;
  return false;
}

}  // namespace detail

/// Builds a spec and checks the hypotheses of its estimate.
inline InequalitySpec make_spec(const std::string& id, const std::string& family,
                                std::map<std::string, double> exps) {
  InequalitySpec s;
  s.id = id;
  s.family = family;
  s.e = std::move(exps);
  const auto bad = detail::hypotheses(s);
  if (!bad.empty()) throw ValidationError(bad.front());
  s.near_boundary = detail::near_boundary(s);
  return s;
}

/// Builds a spec that is expected to violate its hypotheses.
inline InequalitySpec make_canary(const std::string& id, const std::string& family,
                                  std::map<std::string, double> exps) {
  InequalitySpec s;
  s.id = id;
  s.family = family;
  s.e = std::move(exps);
  s.violations = detail::hypotheses(s);
  require(!s.violations.empty(), id + ": canary satisfies every hypothesis");
  s.canary = true;
  return s;
}

/// The g50 pair (p1, q1) with q1 = q - eps, p1 = q1 / (q1 - 1).
inline std::map<std::string, double> g50_exponents(double q, double eps = 0.25) {
  const double q1 = q - eps;
  return {{"q", q}, {"q1", q1}, {"p1", q1 / (q1 - 1.0)}};
}

/// Default registry: one valid spec per family, a near-boundary variant of
/// eq25 and an eq20 canary with q = 2.
inline std::vector<InequalitySpec> default_registry() {
  return {
      make_spec("aaa", "aaa", {{"S", 0.5}, {"S1", 0.6}, {"S2", 0.6}, {"S3", 0.6}, {"p1", 4}, {"p2", 2}, {"p3", 4}}),
      make_spec("fazel5", "fazel5", {{"alpha", 0.75}, {"s1", 0.2}, {"s2", 0.2}, {"p1", 4}, {"p2", 2}, {"p3", 4}}),
      make_spec("fazel6", "fazel6", {{"S", 0.25}, {"s2", 0.7}, {"s3", 0.8}, {"p1", 4}, {"p2", 2}, {"p3", 4}}),
      make_spec("eq20", "eq20", {{"s1", 0.25}, {"s2", 0.75}, {"a", 0.75}, {"p", 2}, {"q", 4}, {"r", 4}}),
      make_spec("eq25", "eq25", {{"s1", 0.5}, {"s2", 0.75}, {"s3", 0.5}}),
      make_spec("eq25_boundary", "eq25", {{"s1", 0.5}, {"s2", 0.99}, {"s3", 0.5}}),
      make_spec("f10", "f10", {{"s", 0.5}, {"p1", 4}, {"p2", 4}, {"p3", 2}}),
      make_spec("f20", "f20", {{"s", 0.5}, {"a", 0.75}, {"p1", 4}, {"p2", 4}, {"p3", 2}}),
      make_spec("eq200", "eq200", {{"alpha", 0.75}, {"s", 0.25}, {"a", 0.75}, {"q", 4}, {"r", 4}}),
      make_spec("eq201", "eq201", {{"s1", 0.25}, {"s2", 0.25}, {"a", 0.75}, {"p", 2}, {"q", 4}, {"r", 4}}),
      make_spec("g50", "g50", g50_exponents(4.25)),
      make_canary("eq20_canary", "eq20",
                  {{"s1", 0.25}, {"s2", 0.75}, {"a", 0.75}, {"p", 4.0 / 3.0}, {"q", 2}, {"r", 4}}),
  };
}

inline InequalitySpec find_spec(const std::string& id) {
  for (auto& s : default_registry())
    if (s.id == id) return s;
  throw ValidationError("unknown inequality spec '" + id + "'");
}

// ---------------------------------------------------------------------------
// Evaluation.

/// One ensemble draw: velocity V, the commuted field phi and a test field h.
struct Draw {
  VectorField V;
  SpectralField phi;
  SpectralField h;
  int k = 0;  ///< block index for pointwise specs
};

struct Sample {
  double lhs = 0.0;
  double rhs = 0.0;
  double ratio() const { return lhs / rhs; }
};

inline Sample evaluate(const InequalitySpec& s, const Draw& d) {
  const std::string& f = s.family;
  const VectorField& V = d.V;
  const SpectralField& phi = d.phi;
  const SpectralField& h = d.h;
  auto L = [](double x) { return MultiplierSpec::lambda_pow(x); };
  Sample out;
  if (f == "aaa") {
    out.lhs = std::abs(inner(h, commutator_field(L(s["S"]), V, phi)));
    out.rhs = lp_norm(lambda(phi, s["S1"]), s["p1"]) * lp_norm(lambda(h, s["S2"]), s["p2"]) *
              lp_norm(lambda(V, s["S3"]), s["p3"]);
  } else if (f == "fazel5") {
    out.lhs = std::abs(inner(h, commutator_field(MultiplierSpec::riesz(s["alpha"]), V, phi)));
    out.rhs = lp_norm(lambda(phi, s["s1"]), s["p1"]) * lp_norm(lambda(h, s["s2"]), s["p2"]) *
              lp_norm(gradient_magnitude(V), s["p3"]);
  } else if (f == "fazel6") {
    out.lhs = std::abs(inner(h, commutator_field(L(s["S"]), V, phi)));
    out.rhs = lp_norm(phi, s["p1"]) * lp_norm(lambda(h, s["s2"]), s["p2"]) * lp_norm(lambda(V, s["s3"]), s["p3"]);
  } else if (f == "eq20") {
    out.lhs = lp_norm(lambda(commutator_field(L(s["s2"]), V, phi), -s["s1"]), s["p"]);
    out.rhs = lp_norm(lambda(V, s["a"]), s["q"]) * lp_norm(lambda(phi, s["s2"] - s["s1"] + 1.0 - s["a"]), s["r"]);
  } else if (f == "eq25") {
    const VectorField W = lambda(V, -s["s3"]);
    out.lhs = lp_norm(lambda(commutator_field(L(s["s2"]), W, phi), -s["s1"]), 2.0);
    out.rhs = lp_norm(V, infinity) * lp_norm(lambda(phi, s["s2"] - s["s1"] + 1.0 - s["s3"]), 2.0);
  } else if (f == "f10") {
    out.lhs = std::abs(inner(commutator_field(L(s["s"]), V, phi), h));
    out.rhs = lp_norm(gradient_magnitude(V), s["p1"]) * lp_norm(lambda(phi, s["s"]), s["p2"]) * lp_norm(h, s["p3"]);
  } else if (f == "f20") {
    out.lhs = std::abs(inner(commutator_field(L(s["s"]), V, phi), h));
    out.rhs = lp_norm(lambda(V, s["a"]), s["p1"]) * lp_norm(lambda(phi, s["s"] + 1.0 - s["a"]), s["p2"]) *
              lp_norm(h, s["p3"]);
  } else if (f == "eq201") {
    out.lhs = lp_norm(lambda(commutator_field(L(s["s2"]), V, phi), s["s1"]), s["p"]);
    out.rhs = lp_norm(lambda(V, s["a"]), s["q"]) * lp_norm(lambda(phi, 1.0 + s["s2"] + s["s1"] - s["a"]), s["r"]);
  } else if (f == "eq200") {
    const double beta = 1.0 - s["alpha"];
    out.lhs = lp_norm(lambda(commutator_field(MultiplierSpec::riesz(s["alpha"]), V, phi), s["s"]), 2.0);
    out.rhs = lp_norm(lambda(V, s["a"]), s["q"]) * lp_norm(lambda(phi, 1.0 + beta + s["s"] - s["a"]), s["r"]);
  } else if (f == "g50") {
    // Pointwise bound; the sample is the largest pointwise ratio.
    const double q1 = s["q1"], p1 = s["p1"];
    const SpectralField c = commutator_field(MultiplierSpec::dyadic_bump(d.k), V, phi);
    const SpectralField gm = gradient_magnitude(V);
    std::vector<double> gq(gm.physical().begin(), gm.physical().end());
    std::vector<double> fp(phi.physical().begin(), phi.physical().end());
    for (auto& v : gq) v = std::pow(v, q1);
    for (auto& v : fp) v = std::pow(std::abs(v), p1);
    const Grid& g = phi.grid();
    const SpectralField MgF = maximal_function(SpectralField::from_physical(g, std::move(gq)));
    const SpectralField MfF = maximal_function(SpectralField::from_physical(g, std::move(fp)));
    const auto Mg = MgF.physical(), Mf = MfF.physical();
    double worst = 0.0, dmax = 0.0;
    std::vector<double> den(Mg.size());
    for (std::size_t i = 0; i < den.size(); ++i) {
      den[i] = std::pow(Mg[i], 1.0 / q1) * std::pow(Mf[i], 1.0 / p1);
      dmax = std::max(dmax, den[i]);
    }
    for (std::size_t i = 0; i < den.size(); ++i)
      if (den[i] > 1e-12 * dmax) worst = std::max(worst, std::abs(c.physical()[i]) / den[i]);
    out.lhs = worst;
    out.rhs = dmax > 0.0 ? 1.0 : 0.0;
  } else {
    throw ValidationError("unknown inequality family '" + f + "'");
  }
  return out;
}

// ---------------------------------------------------------------------------
// Ensembles and constant estimation.

enum class Ensemble { mixed, constant_velocity };

/// Highest dyadic shell used on an n-grid of length 2 pi: products of two
/// fields from the ensemble stay below the dealiasing cutoff.
inline int top_shell(std::size_t n) { return static_cast<int>(std::log2(static_cast<double>(n))) - 3; }

namespace detail {

inline std::uint64_t mix(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline std::uint64_t trial_seed(std::uint64_t seed, const std::string& id, std::size_t trial, std::size_t attempt) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : id) h = (h ^ c) * 1099511628211ULL;
  return mix(mix(seed ^ h) + trial * 0x100000001b3ULL + attempt);
}

}  // namespace detail

/// Trial draw: trials cycle through low-high (V in low shells, phi in one
/// shell at least two above), high-low, and independent bands.
inline Draw make_draw(const Grid& g, std::uint64_t seed, std::size_t trial, Ensemble ens) {
  std::mt19937_64 rng(seed);
  const int J = top_shell(g.n());
  const double decays[] = {0.0, 0.5, 1.0, 2.0};
  auto pick = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
  auto decay = [&]() { return decays[pick(0, 3)]; };
  Draw d;
  int vlo = 0, vhi = J, plo = 0, phi_hi = J;
  switch (trial % 3) {
    case 0: {  // low-high
      const int j = pick(2, J);
      vhi = pick(0, j - 2);
      plo = phi_hi = j;
      break;
    }
    case 1: {  // high-low
      const int j = pick(2, J);
      vlo = vhi = j;
      phi_hi = pick(0, j - 2);
      break;
    }
    default:
      vlo = pick(0, J);
      vhi = pick(vlo, J);
      plo = pick(0, J);
      phi_hi = pick(plo, J);
  }
  const std::uint64_t s1 = rng(), s2 = rng(), s3 = rng();
  const double dv = decay(), dp = decay(), dh = decay();
  if (ens == Ensemble::constant_velocity) {
    std::normal_distribution<double> nd;
    d.V = VectorField::constant(g, nd(rng), nd(rng));
  } else {
    d.V = random_divfree_field(g, s1, vlo, vhi, dv);
  }
  d.phi = random_band_field(g, s2, std::ldexp(1.0, plo), std::ldexp(1.0, phi_hi + 1), dp);
  d.h = random_band_field(g, s3, 1.0, std::ldexp(1.0, J + 1), dh);
  d.k = pick(1, J + 1);
  return d;
}

struct GridEstimate {
  std::size_t n = 0;
  double c_hat = 0.0;
  std::size_t samples = 0;
  std::size_t resampled = 0;
  std::vector<double> ratios;
};

struct EstimateReport {
  InequalitySpec spec;
  std::size_t trials = 0;
  std::uint64_t seed = 0;
  std::vector<GridEstimate> grids;
  double c_hat = 0.0;
  double growth = 0.0;  ///< largest c_hat(2n) / c_hat(n)
  bool resolution_stable = true;
};

/// Sampled lower bound on the best constant of the inequality, per grid.
inline EstimateReport estimate_constant(const InequalitySpec& spec, std::size_t trials,
                                        const std::vector<std::size_t>& grids, std::uint64_t seed,
                                        Ensemble ens = Ensemble::mixed) {
  require(trials >= 1, "estimate needs at least one trial");
  require(!grids.empty(), "estimate needs at least one grid");
  EstimateReport rep;
  rep.spec = spec;
  rep.trials = trials;
  rep.seed = seed;
  constexpr std::size_t max_attempts = 8;
  for (std::size_t n : grids) {
    require(n >= 32, "estimate grids must have n >= 32");
    const Grid g = make_grid(n, 2.0 * std::numbers::pi);
    GridEstimate ge;
    ge.n = n;
    for (std::size_t t = 0; t < trials; ++t) {
      for (std::size_t a = 0; a < max_attempts; ++a) {
        const Draw d = make_draw(g, detail::trial_seed(seed, spec.id, t, a), t, ens);
        const Sample s = evaluate(spec, d);
        if (!(s.rhs > 1e-200) || !std::isfinite(s.rhs) || !std::isfinite(s.lhs)) {
          ++ge.resampled;
          continue;
        }
        ge.ratios.push_back(s.ratio());
        ge.c_hat = std::max(ge.c_hat, s.ratio());
        ++ge.samples;
        break;
      }
    }
    if (ge.samples == 0) throw NumericalFailure(spec.id + ": degenerate ensemble");
    rep.c_hat = std::max(rep.c_hat, ge.c_hat);
    rep.grids.push_back(std::move(ge));
  }
  for (std::size_t i = 1; i < rep.grids.size(); ++i) {
    const double lo = rep.grids[i - 1].c_hat, hi = rep.grids[i].c_hat;
    const double r = lo > 0.0 ? hi / lo : (hi > 0.0 ? INFINITY : 1.0);
    rep.growth = std::max(rep.growth, r);
    if (r > 2.0) rep.resolution_stable = false;
  }
  return rep;
}

/// Measured constants for [R_alpha, V.grad] and [Lambda^(beta - 2 alpha) d1,
/// V.grad] paired with h, normalized by ||grad V||_4 ||Lambda^beta phi||_4 ||h||_2.
struct EasierTermReport {
  double c_riesz = 0.0;
  double c_correction = 0.0;
};

inline EasierTermReport easier_term_comparison(std::size_t n, std::size_t trials, std::uint64_t seed, double alpha) {
  const Grid g = make_grid(n, 2.0 * std::numbers::pi);
  const double beta = 1.0 - alpha;
  EasierTermReport r;
  for (std::size_t t = 0; t < trials; ++t) {
    const Draw d = make_draw(g, detail::trial_seed(seed, "easier", t, 0), t, Ensemble::mixed);
    const double den = lp_norm(gradient_magnitude(d.V), 4.0) * lp_norm(lambda(d.phi, beta), 4.0) * lp_norm(d.h, 2.0);
    if (!(den > 1e-200)) continue;
    const double cr = std::abs(inner(commutator_field(MultiplierSpec::riesz(alpha), d.V, d.phi), d.h)) / den;
    const SpectralField hv = advect(d.V, d.phi);
    auto corr = [alpha, beta](const SpectralField& x) {
      return apply_symbol(
          x, [=](double a, double b) { return cplx{0.0, a} * std::pow(std::hypot(a, b), beta - 2.0 * alpha); }, 0.0);
    };
    const double ch = std::abs(inner(corr(hv) - advect(d.V, corr(d.phi)), d.h)) / den;
    r.c_riesz = std::max(r.c_riesz, cr);
    r.c_correction = std::max(r.c_correction, ch);
  }
  return r;
}

// ---------------------------------------------------------------------------
// Kernel representation of [Delta_k, g.grad] f.

struct RepresentationReport {
  double residual = 0.0;        ///< max |spectral - kernel quadrature|
  double spectral_max = 0.0;
  double kernel_max = 0.0;
  double scale = 0.0;           ///< ||f||_inf ||grad g||_inf
  bool aliasing_warning = false;
  double relative() const { return scale > 0.0 ? residual / scale : residual; }
};

/// Compares the spectral commutator [Delta_k, g.grad] f with the direct
/// quadrature -(1/|box|) sum_y (grad K)(x - y).(g(x) - g(y)) f(y) h^2, where
/// K is the periodic kernel of Delta_k. O(n^4).
inline RepresentationReport representation_check(int k, const VectorField& g, const SpectralField& f) {
  require_same_grid(g.grid(), f.grid());
  const Grid& G = f.grid();
  const std::size_t n = G.n();
  RepresentationReport rep;
  const SpectralField spec = commutator_field(MultiplierSpec::dyadic_bump(k), g, f);

  // Kernel with coefficients zeta_k(xi): K(z) = sum_xi zeta_k(xi) e^{i xi.z}.
  std::vector<cplx> kc(G.spectral_size());
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < G.half(); ++j) kc[i * G.half() + j] = zeta_j(k, std::hypot(G.xi1(i), G.xi2(j)));
  const SpectralField K = SpectralField::from_spectrum(G, std::move(kc));
  const SpectralField dK1 = partial(K, 0), dK2 = partial(K, 1);
  const auto Kx = dK1.physical(), Ky = dK2.physical();
  double kmax = 0.0, edge = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      const double v = std::abs(K.physical()[i * n + j]);
      kmax = std::max(kmax, v);
      if (i == n / 2 || j == n / 2) edge = std::max(edge, v);
    }
  rep.aliasing_warning = edge > 1e-10 * kmax;

  const auto gx = g.x.physical(), gy = g.y.physical(), fv = f.physical();
  const double w = G.cell_area() / G.area();
  std::vector<double> direct(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      const std::size_t x = i * n + j;
      double s = 0.0;
      for (std::size_t a = 0; a < n; ++a) {
        const std::size_t di = (i + n - a) % n;
        for (std::size_t b = 0; b < n; ++b) {
          const std::size_t y = a * n + b;
          const std::size_t z = di * n + (j + n - b) % n;
          s += (Kx[z] * (gx[x] - gx[y]) + Ky[z] * (gy[x] - gy[y])) * fv[y];
        }
      }
      direct[x] = -w * s;
    }
  for (std::size_t x = 0; x < n * n; ++x) {
    rep.residual = std::max(rep.residual, std::abs(direct[x] - spec.physical()[x]));
    rep.spectral_max = std::max(rep.spectral_max, std::abs(spec.physical()[x]));
    rep.kernel_max = std::max(rep.kernel_max, std::abs(direct[x]));
  }
  rep.scale = f.max_abs() * gradient_magnitude(g).max_abs();
  return rep;
}

}  // namespace fbl

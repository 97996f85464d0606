#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "fbl/boussinesq.hpp"
#include "fbl/calculus.hpp"
#include "fbl/error.hpp"
#include "fbl/littlewood_paley.hpp"
#include "fbl/norms.hpp"
#include "fbl/quadrature.hpp"

namespace fbl {

// ---------------------------------------------------------------------------
// Exponent bookkeeping.

struct Exponents {
  double alpha = 0.0;
  double beta = 0.0;
  double rho = 0.0;
  double gamma = 0.0;   ///< beta/2 - 2 rho
  double a = 0.0;       ///< (3 - 4 alpha) / (2 beta)
  double q0 = 0.0;      ///< 4 (2 alpha - 1) / (3 alpha beta + 6 alpha - 4)
  double delta = 0.0;   ///< (3 - 4 alpha) / (alpha / 2)
  double besov_s = 0.0; ///< 3 alpha - 2
  double besov_r = 0.0; ///< 6 / (3 alpha - 2)
  double lebesgue_lo = 0.0;  ///< 2 / alpha
  double lebesgue_hi = 0.0;  ///< 2 / (1 - alpha)

  bool q0_at_least_one() const { return q0 >= 1.0; }
  bool delta_in_unit_interval() const { return delta > 0.0 && delta < 1.0; }
  /// The interpolation exponent delta is only used for alpha <= 3/4.
  bool delta_applies() const { return alpha <= 0.75; }
  bool six_in_range() const { return lebesgue_lo < 6.0 && 6.0 < lebesgue_hi; }
};

inline Exponents exponents(double alpha, double rho = 0.01) {
  require(alpha > 2.0 / 3.0 && alpha < 1.0, "exponent table needs 2/3 < alpha < 1");
  require(rho > 0.0 && rho < 0.25, "rho must be small and positive");
  Exponents e;
  e.alpha = alpha;
  e.beta = 1.0 - alpha;
  e.rho = rho;
  e.gamma = e.beta / 2.0 - 2.0 * rho;
  e.a = (3.0 - 4.0 * alpha) / (2.0 * e.beta);
  e.q0 = 4.0 * (2.0 * alpha - 1.0) / (3.0 * alpha * e.beta + 6.0 * alpha - 4.0);
  e.delta = (3.0 - 4.0 * alpha) / (alpha / 2.0);
  e.besov_s = 3.0 * alpha - 2.0;
  e.besov_r = 6.0 / e.besov_s;
  e.lebesgue_lo = 2.0 / alpha;
  e.lebesgue_hi = 2.0 / (1.0 - alpha);
  return e;
}

// ---------------------------------------------------------------------------
// Energy terms.

/// One (s, kappa, p) choice of the three energy relations.
struct LedgerConfig {
  std::string id;
  double s = 0.0;
  double kappa = 0.0;
  int p = 2;
};

/// Named configurations for a given alpha (rho enters through gamma).
inline std::vector<LedgerConfig> standard_configs(double alpha, double rho = 0.01) {
  const double beta = 1.0 - alpha;
  const double gamma = beta / 2.0 - 2.0 * rho;
  return {
      {"prop31", gamma, 0.0, 2},
      {"prop31_alt", 0.0, gamma, 2},
      {"prop32", 1.5 * beta, alpha / 2.0, 4},
      {"prop32_alt", alpha / 2.0, 1.5 * beta, 4},
      {"prop33", (1.0 + beta) / 2.0, 2.5 * beta, 6},
  };
}

inline LedgerConfig find_config(const std::string& id, double alpha, double rho = 0.01) {
  for (const auto& c : standard_configs(alpha, rho))
    if (c.id == id) return c;
  throw ValidationError("unknown ledger configuration '" + id + "'");
}

/// Signed velocity-dependent terms for one velocity (used for splits).
struct VelocityTerms {
  double I1 = 0.0, I3 = 0.0, I4 = 0.0, I5 = 0.0, K0 = 0.0, K2 = 0.0, K3 = 0.0;
};

struct EnergyLedgerRow {
  double t = 0.0;
  // tracked functionals
  double J641 = 0.0, J65 = 0.0, J21 = 0.0;
  // coercive terms (D21 is signed; it is non-negative in the continuum)
  double D641 = 0.0, D65 = 0.0, D21 = 0.0;
  // absolute right-hand side terms
  double I1 = 0.0, I2 = 0.0, I3 = 0.0, I4 = 0.0, I5 = 0.0, K1 = 0.0, K2 = 0.0, K3 = 0.0;
  // advection residual in the L^p relation (zero in the continuum)
  double K0_adv = 0.0;
  // signed terms and their velocity splits
  VelocityTerms full, part_f, part_theta;
  double I2_signed = 0.0, K1_signed = 0.0;
  // rates (filled by ledger_run)
  double rate641 = 0.0, rate65 = 0.0, rate21 = 0.0;
  double exact641 = 0.0, exact65 = 0.0, exact21 = 0.0;
  bool ok641 = true, ok65 = true, ok21 = true, ok_combined = true;
  double tol641 = 0.0, tol65 = 0.0, tol21 = 0.0;
};

namespace detail {

inline SimState as_scaled(const SimState& s) {
  if (s.form == Formulation::scaled) return s;
  return to_scaled(convert(s, Formulation::f), 1.0);
}

inline SpectralField power_weight(const SpectralField& F, int p) {
  std::vector<double> w(F.physical().begin(), F.physical().end());
  for (auto& v : w) v = std::pow(v, p - 1);
  return SpectralField::from_physical(F.grid(), std::move(w));
}

inline VelocityTerms velocity_terms(const SimState& s, const VectorField& U, const LedgerConfig& c,
                                    const SpectralField& LsF, const SpectralField& LkT, const SpectralField& W) {
  const double a = s.params.alpha, b = s.params.beta(), e = s.params.eps;
  const SpectralField& F = s.primary;
  const SpectralField& T = s.theta;
  auto R = [a](const SpectralField& x) { return riesz(x, a); };
  auto H = [a](const SpectralField& x) { return hkr_correction(x, a); };
  const SpectralField advF = advect(U, F);
  const SpectralField advT = advect(U, T);
  const SpectralField cR = commutator(R, U, T);
  const SpectralField cH = commutator(H, U, T);
  VelocityTerms v;
  if (c.s < 1.0) {
    const double order = c.s;
    auto L = [order](const SpectralField& x) { return lambda(x, order); };
    v.I1 = std::pow(e, a) * inner(commutator(L, U, F), LsF);
  } else {
    v.I1 = std::pow(e, a) * inner(lambda(advF, c.s), LsF);
  }
  v.I3 = e * inner(lambda(cR, c.s), LsF);
  v.I4 = std::pow(e, 2.0 * b) * inner(lambda(cH, c.s), LsF);
  v.I5 = std::pow(e, a) * inner(lambda(advT, c.kappa), LkT);
  v.K0 = std::pow(e, a) * inner(advF, W);
  v.K2 = e * inner(cR, W);
  v.K3 = std::pow(e, 2.0 * b) * inner(cH, W);
  return v;
}

}  // namespace detail

/// Velocity split U = U_F + U_Theta of a scaled state.
inline std::pair<VectorField, VectorField> scaled_velocity_split(const SimState& s) {
  const VectorField U = velocity(s);
  const double e = s.form == Formulation::scaled ? s.params.eps : 1.0;
  const VectorField UF = (1.0 / e) * perp_inverse_laplacian(s.primary);
  return {UF, U - UF};
}

/// Every term of the three energy relations at one state (rates are left 0).
/// Non-scaled states are read as scaled states with eps = 1.
inline EnergyLedgerRow energy_terms(const SimState& state, const LedgerConfig& c) {
  require(c.p >= 2 && c.p % 2 == 0, "ledger exponent p must be an even integer >= 2");
  require(c.s >= 0.0 && c.kappa >= 0.0, "ledger derivative orders must be non-negative");
  const SimState s = detail::as_scaled(state);
  const double a = s.params.alpha, b = s.params.beta(), e = s.params.eps;
  const SpectralField& F = s.primary;
  const SpectralField& T = s.theta;
  const SpectralField LsF = lambda(F, c.s);
  const SpectralField LkT = lambda(T, c.kappa);
  const SpectralField W = detail::power_weight(F, c.p);
  const SpectralField src = apply_symbol(
      T, [=](double x, double y) { return cplx{0.0, x} * std::pow(std::hypot(x, y), 2.0 * (b - a)); }, 0.0);

  EnergyLedgerRow r;
  r.t = s.time;
  r.J641 = 0.5 * inner(LsF, LsF);
  r.J65 = 0.5 * inner(LkT, LkT);
  r.J21 = std::pow(lp_norm(F, c.p), c.p) / c.p;
  const SpectralField hs = lambda(F, c.s + a / 2.0);
  const SpectralField hk = lambda(T, c.kappa + b / 2.0);
  r.D641 = std::pow(e, a - b) * inner(hs, hs);
  r.D65 = inner(hk, hk);
  r.D21 = std::pow(e, a - b) * inner(lambda(F, a), W);

  const auto [UF, UT] = scaled_velocity_split(s);
  r.full = detail::velocity_terms(s, UF + UT, c, LsF, LkT, W);
  r.part_f = detail::velocity_terms(s, UF, c, LsF, LkT, W);
  r.part_theta = detail::velocity_terms(s, UT, c, LsF, LkT, W);
  r.I2_signed = std::pow(e, 2.0 - 3.0 * a) * inner(lambda(src, c.s), LsF);
  r.K1_signed = std::pow(e, 2.0 - 3.0 * a) * inner(src, W);

  r.I1 = std::abs(r.full.I1);
  r.I2 = std::abs(r.I2_signed);
  r.I3 = std::abs(r.full.I3);
  r.I4 = std::abs(r.full.I4);
  r.I5 = std::abs(r.full.I5);
  r.K1 = std::abs(r.K1_signed);
  r.K2 = std::abs(r.full.K2);
  r.K3 = std::abs(r.full.K3);
  r.K0_adv = std::abs(r.full.K0);
  return r;
}

/// Exact time derivatives of the three functionals from the right-hand side.
inline void exact_rates(const SimState& state, const LedgerConfig& c, EnergyLedgerRow& r) {
  const SimState s = detail::as_scaled(state);
  const Tendency d = rhs(s);
  r.exact641 = inner(lambda(d.primary, c.s), lambda(s.primary, c.s));
  r.exact65 = inner(lambda(d.theta, c.kappa), lambda(s.theta, c.kappa));
  r.exact21 = inner(d.primary, detail::power_weight(s.primary, c.p));
}

/// Integral of F |F|^(p-2) Lambda^alpha F (non-negative in the continuum) and
/// its ratio to ||F||_{L^{2p/(2-alpha)}}^p.
struct PositivityReport {
  double integral = 0.0;
  double lower_bound_ratio = 0.0;
};

inline PositivityReport cordoba_positivity(const SpectralField& F, double alpha, int p) {
  require(p >= 2 && p % 2 == 0, "positivity check needs an even p");
  PositivityReport r;
  r.integral = inner(lambda(F, alpha), detail::power_weight(F, p));
  const double den = std::pow(lp_norm(F, 2.0 * p / (2.0 - alpha)), p);
  r.lower_bound_ratio = den > 0.0 ? r.integral / den : 0.0;
  return r;
}

// ---------------------------------------------------------------------------
// Ledger runs.

struct RelationVerdict {
  std::string name;
  bool pass = true;
  std::size_t rows = 0;
  std::size_t failures = 0;
  double worst_margin = 0.0;  ///< min over rows of (bound + tol - lhs) / scale
};

struct GronwallCheck {
  double c_fit = 0.0;
  double c_meas = 0.0;
  bool pass = true;
};

struct LedgerResult {
  LedgerConfig config;
  std::vector<EnergyLedgerRow> rows;
  RelationVerdict v641{"641"}, v65{"65"}, v21{"21"}, combined{"combined"};
  bool rate_warning = false;   ///< cadence too coarse for accurate rates
  double max_rate_error = 0.0; ///< max relative gap between FD and exact rates
  double int_D641 = 0.0, int_D65 = 0.0, int_D21 = 0.0;
  double sup_J641 = 0.0, sup_J65 = 0.0, sup_J21 = 0.0;
  bool sup_monotone = true;
  bool integrals_finite = true;
  GronwallCheck gronwall;

  bool pass() const {
    return v641.pass && v65.pass && v21.pass && combined.pass && integrals_finite && sup_monotone &&
           gronwall.pass;
  }
};

namespace detail {

// Fourth-order finite-difference derivative of uniformly spaced samples
// (centred where possible, one-sided five-point stencils at the ends).
inline std::vector<double> fd_rates(const std::vector<double>& J, double h, int order) {
  const std::size_t m = J.size();
  std::vector<double> r(m, 0.0);
  if (m < 2) return r;
  if (order == 2 || m < 5) {
    for (std::size_t i = 0; i < m; ++i) {
      if (i == 0) r[i] = m >= 3 ? (-3 * J[0] + 4 * J[1] - J[2]) / (2 * h) : (J[1] - J[0]) / h;
      else if (i == m - 1) r[i] = m >= 3 ? (3 * J[m - 1] - 4 * J[m - 2] + J[m - 3]) / (2 * h) : (J[m - 1] - J[m - 2]) / h;
      else r[i] = (J[i + 1] - J[i - 1]) / (2 * h);
    }
    return r;
  }
  for (std::size_t i = 0; i < m; ++i) {
    if (i >= 2 && i + 2 < m)
      r[i] = (-J[i + 2] + 8 * J[i + 1] - 8 * J[i - 1] + J[i - 2]) / (12 * h);
    else if (i == 0)
      r[i] = (-25 * J[0] + 48 * J[1] - 36 * J[2] + 16 * J[3] - 3 * J[4]) / (12 * h);
    else if (i == 1)
      r[i] = (-3 * J[0] - 10 * J[1] + 18 * J[2] - 6 * J[3] + J[4]) / (12 * h);
    else if (i == m - 2)
      r[i] = (3 * J[m - 1] + 10 * J[m - 2] - 18 * J[m - 3] + 6 * J[m - 4] - J[m - 5]) / (12 * h);
    else
      r[i] = (25 * J[m - 1] - 48 * J[m - 2] + 36 * J[m - 3] - 16 * J[m - 4] + 3 * J[m - 5]) / (12 * h);
  }
  return r;
}

inline void judge(RelationVerdict& v, double lhs, double bound, double tol, double scale, bool& ok) {
  const double margin = (bound + tol - lhs) / std::max(scale, 1e-300);
  ok = lhs <= bound + tol;
  ++v.rows;
  if (!ok) {
    ++v.failures;
    v.pass = false;
  }
  v.worst_margin = v.rows == 1 ? margin : std::min(v.worst_margin, margin);
}

}  // namespace detail

/// Quadrature tolerance floor used in the verdicts.
inline constexpr double ledger_quadrature_tol = 1e-12;

/// Evaluates one configuration along a trajectory sampled at uniform output
/// times (spacing h) produced with time step dt.
inline LedgerResult ledger_run(const std::vector<SimState>& traj, const LedgerConfig& c, double dt) {
  require(traj.size() >= 3, "ledger needs at least three output times");
  LedgerResult out;
  out.config = c;
  const double h = traj[1].time - traj[0].time;
  require(h > 0.0, "trajectory times must increase");
  for (std::size_t i = 1; i < traj.size(); ++i)
    require(std::abs(traj[i].time - traj[i - 1].time - h) <= 1e-9 * std::max(1.0, std::abs(h)) + 1e-12,
            "trajectory output times must be uniformly spaced");

  for (const auto& s : traj) {
    EnergyLedgerRow r = energy_terms(s, c);
    exact_rates(s, c, r);
    out.rows.push_back(r);
  }
  const std::size_t m = out.rows.size();
  std::vector<double> j1(m), j2(m), j3(m), d1(m), d2(m), d3(m);
  for (std::size_t i = 0; i < m; ++i) {
    j1[i] = out.rows[i].J641;
    j2[i] = out.rows[i].J65;
    j3[i] = out.rows[i].J21;
    d1[i] = out.rows[i].D641;
    d2[i] = out.rows[i].D65;
    d3[i] = out.rows[i].D21;
  }
  const auto r1 = detail::fd_rates(j1, h, 4), r2 = detail::fd_rates(j2, h, 4), r3 = detail::fd_rates(j3, h, 4);
  const auto q1 = detail::fd_rates(j1, h, 2), q2 = detail::fd_rates(j2, h, 2), q3 = detail::fd_rates(j3, h, 2);
  // Time steps are taken in scaled time for scaled states.
  const double tstep = dt;
  for (std::size_t i = 0; i < m; ++i) {
    auto& r = out.rows[i];
    r.rate641 = r1[i];
    r.rate65 = r2[i];
    r.rate21 = r3[i];
    const double sum641 = r.I1 + r.I2 + r.I3 + r.I4;
    const double sum21 = r.K1 + r.K2 + r.K3;
    const double sc641 = std::max({std::abs(r.rate641), r.D641, sum641});
    const double sc65 = std::max({std::abs(r.rate65), r.D65, r.I5});
    const double sc21 = std::max({std::abs(r.rate21), std::abs(r.D21), sum21});
    // The advection residual of the L^p relation and, for s = 0, I_1 vanish
    // in the continuum; their discrete size is a quadrature error.
    const double q21 = std::max(ledger_quadrature_tol, sc21 > 0 ? r.K0_adv / sc21 : 0.0);
    const double q641 = std::max(ledger_quadrature_tol, (c.s == 0.0 && sc641 > 0) ? r.I1 / sc641 : 0.0);
    r.tol641 = 5.0 * std::max(tstep * tstep, q641) * sc641;
    r.tol65 = 5.0 * std::max(tstep * tstep, ledger_quadrature_tol) * sc65;
    r.tol21 = 5.0 * std::max(tstep * tstep, q21) * sc21;
    detail::judge(out.v641, r.rate641 + r.D641, sum641, r.tol641, sc641, r.ok641);
    detail::judge(out.v65, r.rate65 + r.D65, r.I5, r.tol65, sc65, r.ok65);
    detail::judge(out.v21, r.rate21 + r.D21, sum21, r.tol21, sc21, r.ok21);
    detail::judge(out.combined, r.rate641 + r.rate65 + r.D641 + r.D65, sum641 + r.I5, r.tol641 + r.tol65,
                  std::max(sc641, sc65), r.ok_combined);
    // rate accuracy
    const double e1 = std::abs(r.rate641 - r.exact641) / std::max(sc641, 1e-300);
    const double e2 = std::abs(r.rate65 - r.exact65) / std::max(sc65, 1e-300);
    const double e3 = std::abs(r.rate21 - r.exact21) / std::max(sc21, 1e-300);
    if (sc641 > 0) out.max_rate_error = std::max(out.max_rate_error, e1);
    if (sc65 > 0) out.max_rate_error = std::max(out.max_rate_error, e2);
    if (sc21 > 0) out.max_rate_error = std::max(out.max_rate_error, e3);
    const double g1 = std::abs(r1[i] - q1[i]) / std::max(sc641, 1e-300);
    const double g2 = std::abs(r2[i] - q2[i]) / std::max(sc65, 1e-300);
    const double g3 = std::abs(r3[i] - q3[i]) / std::max(sc21, 1e-300);
    if ((sc641 > 0 && g1 > 0.05) || (sc65 > 0 && g2 > 0.05) || (sc21 > 0 && g3 > 0.05)) out.rate_warning = true;
  }

  out.int_D641 = simpson(d1, h);
  out.int_D65 = simpson(d2, h);
  out.int_D21 = simpson(d3, h);
  out.integrals_finite = std::isfinite(out.int_D641) && std::isfinite(out.int_D65) && std::isfinite(out.int_D21);

  double prev = -1.0;
  for (std::size_t i = 0; i < m; ++i) {
    out.sup_J641 = std::max(out.sup_J641, j1[i]);
    out.sup_J65 = std::max(out.sup_J65, j2[i]);
    out.sup_J21 = std::max(out.sup_J21, j3[i]);
    const double cur = out.sup_J641 + out.sup_J65 + out.sup_J21;
    if (!std::isfinite(cur) || cur < prev) out.sup_monotone = false;
    prev = cur;
  }

  // Gronwall self-consistency for J = J641 + J65: J(t) <= J(0) exp(C t)
  // must hold with C = max J'/J measured from the exact rates.
  const double J0 = j1[0] + j2[0];
  if (J0 > 0.0) {
    double cm = -INFINITY, cf = -INFINITY;
    for (std::size_t i = 0; i < m; ++i) {
      const double J = j1[i] + j2[i];
      if (J <= 0.0) continue;
      cm = std::max(cm, (out.rows[i].exact641 + out.rows[i].exact65) / J);
      const double t = traj[i].time - traj[0].time;
      if (t > 0.0) cf = std::max(cf, std::log(J / J0) / t);
    }
    out.gronwall.c_meas = cm;
    out.gronwall.c_fit = cf;
    out.gronwall.pass = cf <= cm + 1e-9 * std::max(1.0, std::abs(cm));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Regularity-criterion quantities.

struct CriteriaRow {
  double t = 0.0;
  double f_L6 = 0.0;
  double uf_inf = 0.0;
  double grad_uf_inf = 0.0;
  double grad_theta_inf = 0.0;
  double besov_f = 0.0;
  double embedding_ratio = 0.0;
};

struct CriteriaReport {
  double sup_f_L6 = 0.0;
  double sup_uf_inf = 0.0;
  double sup_grad_uf_inf = 0.0;
  double sup_grad_theta_inf = 0.0;
  double sup_besov_f = 0.0;
  double max_embedding_ratio = 0.0;
  std::vector<CriteriaRow> rows;

  bool all_finite() const {
    return std::isfinite(sup_f_L6) && std::isfinite(sup_uf_inf) && std::isfinite(sup_grad_uf_inf) &&
           std::isfinite(sup_grad_theta_inf) && std::isfinite(sup_besov_f) && std::isfinite(max_embedding_ratio);
  }
};

/// Pointwise max of the Frobenius norm of the gradient of a vector field.
inline double gradient_sup(const VectorField& u) {
  const auto a = partial(u.x, 0), b = partial(u.x, 1), c = partial(u.y, 0), d = partial(u.y, 1);
  double m = 0.0;
  for (std::size_t i = 0; i < a.physical().size(); ++i) {
    const double v = a.physical()[i] * a.physical()[i] + b.physical()[i] * b.physical()[i] +
                     c.physical()[i] * c.physical()[i] + d.physical()[i] * d.physical()[i];
    m = std::max(m, std::sqrt(v));
  }
  return m;
}

/// Criterion quantities at one state, in the unscaled variables.
inline CriteriaRow criteria_row(const SimState& state) {
  SimState s = state.form == Formulation::scaled ? from_scaled(state) : convert(state, Formulation::f);
  const double alpha = s.params.alpha;
  const double bs = 3.0 * alpha - 2.0;
  CriteriaRow r;
  r.t = s.time;
  r.f_L6 = lp_norm(s.primary, 6.0);
  const VectorField uf = perp_inverse_laplacian(s.primary);
  r.uf_inf = lp_norm(uf, infinity);
  r.grad_uf_inf = gradient_sup(uf);
  r.grad_theta_inf = lp_norm(gradient(s.theta), infinity);
  r.besov_f = bs > 0.0 ? besov_norm(s.primary.without_mean(), bs, 6.0 / bs) : 0.0;
  r.embedding_ratio = r.besov_f > 0.0 ? r.grad_uf_inf / r.besov_f : 0.0;
  return r;
}

inline CriteriaReport criteria_monitor(const std::vector<SimState>& traj) {
  CriteriaReport c;
  for (const auto& s : traj) {
    const CriteriaRow r = criteria_row(s);
    c.sup_f_L6 = std::max(c.sup_f_L6, r.f_L6);
    c.sup_uf_inf = std::max(c.sup_uf_inf, r.uf_inf);
    c.sup_grad_uf_inf = std::max(c.sup_grad_uf_inf, r.grad_uf_inf);
    c.sup_grad_theta_inf = std::max(c.sup_grad_theta_inf, r.grad_theta_inf);
    c.sup_besov_f = std::max(c.sup_besov_f, r.besov_f);
    c.max_embedding_ratio = std::max(c.max_embedding_ratio, r.embedding_ratio);
    c.rows.push_back(r);
  }
  return c;
}

}  // namespace fbl

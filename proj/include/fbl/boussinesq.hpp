#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <string>
#include <utility>

#include "fbl/calculus.hpp"
#include "fbl/error.hpp"
#include "fbl/field.hpp"
#include "fbl/multiplier.hpp"
#include "fbl/norms.hpp"
#include "fbl/random_fields.hpp"

namespace fbl {

/// Unknown paired with theta in a state.
enum class Formulation { omega, G, f, scaled };

inline std::string to_string(Formulation f) {
  switch (f) {
    case Formulation::omega: return "omega";
    case Formulation::G: return "G";
    case Formulation::f: return "f";
    case Formulation::scaled: return "scaled";
  }
  return "?";
}

inline Formulation parse_formulation(const std::string& s) {
  if (s == "omega") return Formulation::omega;
  if (s == "G") return Formulation::G;
  if (s == "f") return Formulation::f;
  if (s == "scaled") return Formulation::scaled;
  throw ValidationError("unknown formulation '" + s + "'");
}

struct ModelParams {
  double alpha = 0.75;
  double nu = 1.0;
  double kappa = 1.0;
  double eps = 1.0;

  double beta() const { return 1.0 - alpha; }

  void validate(Formulation form) const {
    require_alpha(alpha);
    require(nu >= 0.0 && kappa >= 0.0, "dissipation coefficients must be non-negative");
    require(eps > 0.0 && eps <= 1.0, "scaling parameter must lie in (0, 1]");
    if (form != Formulation::omega)
      require(nu == 1.0 && kappa == 1.0, "the G, f and scaled formulations need nu = kappa = 1");
    if (form != Formulation::scaled) require(eps == 1.0, "eps != 1 is only meaningful for the scaled formulation");
  }
};

struct SimState {
  double time = 0.0;
  SpectralField theta;
  SpectralField primary;
  Formulation form = Formulation::omega;
  ModelParams params;

  const Grid& grid() const { return theta.grid(); }
};

/// Time derivative of (primary, theta).
struct Tendency {
  SpectralField primary;
  SpectralField theta;
};

// ---------------------------------------------------------------------------
// Changes of unknown at fixed theta.

inline SpectralField transform_to_G(const SpectralField& omega, const SpectralField& theta, double alpha) {
  require_alpha(alpha);
  return omega - riesz(theta, alpha);
}

inline SpectralField G_to_omega(const SpectralField& G, const SpectralField& theta, double alpha) {
  require_alpha(alpha);
  return G + riesz(theta, alpha);
}

/// f = omega - R_alpha (I + Lambda^(beta - alpha)) theta.
inline SpectralField transform_to_f(const SpectralField& omega, const SpectralField& theta, double alpha) {
  require_alpha(alpha);
  return omega - riesz_buoyancy(theta, alpha);
}

inline SpectralField f_to_omega(const SpectralField& f, const SpectralField& theta, double alpha) {
  require_alpha(alpha);
  return f + riesz_buoyancy(theta, alpha);
}

/// Lambda^(beta - 2 alpha) d_1 theta.
inline SpectralField hkr_correction(const SpectralField& theta, double alpha) {
  const double beta = 1.0 - alpha;
  return apply_symbol(
      theta,
      [=](double a, double b) { return cplx{0.0, a} * std::pow(std::hypot(a, b), beta - 2.0 * alpha); }, 0.0);
}

/// Same samples on a box of a different length.
inline SpectralField rebase(const SpectralField& f, const Grid& g) {
  require(g.n() == f.grid().n(), "rebase keeps the point count");
  if (g == f.grid()) return f;
  return SpectralField::from_physical(g, {f.physical().begin(), f.physical().end()});
}

/// Vorticity of a state in the units of its own grid; for scaled states this
/// is omega(x) sampled on the scaled box.
inline SpectralField vorticity(const SimState& s) {
  const double a = s.params.alpha, b = s.params.beta(), e = s.params.eps;
  switch (s.form) {
    case Formulation::omega: return s.primary;
    case Formulation::G: return G_to_omega(s.primary, s.theta, a);
    case Formulation::f: return f_to_omega(s.primary, s.theta, a);
    case Formulation::scaled:
      return s.primary + apply_symbol(
                             s.theta,
                             [=](double x, double y) {
                               const double r = std::hypot(x, y);
                               return cplx{0.0, x} * std::pow(r, -a) *
                                      (std::pow(e, b) + std::pow(e, 2.0 * b - a) * std::pow(r, b - a));
                             },
                             0.0);
  }
  return {};
}

/// Velocity of the state. For scaled states this is U(y) = u(y / eps).
inline VectorField velocity(const SimState& s) {
  const VectorField u = perp_inverse_laplacian(vorticity(s));
  if (s.form == Formulation::scaled) return (1.0 / s.params.eps) * u;
  return u;
}

/// Converts between omega, G and f at fixed theta. Conversions into or out
/// of the scaled formulation go through to_scaled / from_scaled.
inline SimState convert(const SimState& s, Formulation target) {
  require(s.form != Formulation::scaled && target != Formulation::scaled,
          "use to_scaled / from_scaled for the scaled formulation");
  if (s.form == target) return s;
  SimState out = s;
  const SpectralField w = vorticity(s);
  const double a = s.params.alpha;
  switch (target) {
    case Formulation::omega: out.primary = w; break;
    case Formulation::G: out.primary = transform_to_G(w, s.theta, a); break;
    case Formulation::f: out.primary = transform_to_f(w, s.theta, a); break;
    case Formulation::scaled: break;
  }
  out.form = target;
  out.params.validate(target);
  return out;
}

/// (f, theta) on [0, L)^2 -> (F, Theta) with the same samples on [0, eps L)^2.
inline SimState to_scaled(const SimState& s, double eps) {
  SimState f = convert(s, Formulation::f);
  const Grid gs = make_grid(f.grid().n(), eps * f.grid().length());
  SimState out;
  out.time = std::pow(eps, f.params.beta()) * f.time;
  out.form = Formulation::scaled;
  out.params = f.params;
  out.params.eps = eps;
  out.params.validate(Formulation::scaled);
  out.theta = rebase(f.theta, gs);
  out.primary = rebase(f.primary, gs);
  return out;
}

inline SimState from_scaled(const SimState& s) {
  require(s.form == Formulation::scaled, "state is not scaled");
  const double eps = s.params.eps;
  const Grid g = make_grid(s.grid().n(), s.grid().length() / eps);
  SimState out;
  out.time = s.time / std::pow(eps, s.params.beta());
  out.form = Formulation::f;
  out.params = s.params;
  out.params.eps = 1.0;
  out.theta = rebase(s.theta, g);
  out.primary = rebase(s.primary, g);
  return out;
}

// ---------------------------------------------------------------------------
// Right-hand sides. Each formulation splits into a linear dissipation
// -c |xi|^a (integrated exactly by the stepper) and the remaining terms.

/// [A, V.grad] phi = A(V.grad phi) - V.grad(A phi) for a Fourier operator A.
template <class Op>
SpectralField commutator(Op&& op, const VectorField& v, const SpectralField& phi) {
  return op(advect(v, phi)) - advect(v, op(phi));
}

struct LinearPart {
  double primary_coef;  ///< primary dissipation is -primary_coef |xi|^alpha
  double theta_coef;    ///< theta dissipation is -theta_coef |xi|^beta
};

inline LinearPart linear_part(const SimState& s) {
  const auto& p = s.params;
  switch (s.form) {
    case Formulation::omega: return {p.nu, p.kappa};
    case Formulation::G:
    case Formulation::f: return {1.0, 1.0};
    case Formulation::scaled: return {std::pow(p.eps, p.alpha - p.beta()), 1.0};
  }
  return {0.0, 0.0};
}

/// Everything except the linear dissipation.
inline Tendency nonlinear_terms(const SimState& s) {
  const double a = s.params.alpha, b = s.params.beta(), e = s.params.eps;
  const VectorField u = velocity(s);
  const SpectralField& th = s.theta;
  auto R = [a](const SpectralField& x) { return riesz(x, a); };
  auto H = [a](const SpectralField& x) { return hkr_correction(x, a); };
  switch (s.form) {
    case Formulation::omega:
      return {partial(th, 0) - advect(u, s.primary), -1.0 * advect(u, th)};
    case Formulation::G: {
      const SpectralField src = apply_symbol(
          th, [=](double x, double y) { return cplx{0.0, x} * std::pow(std::hypot(x, y), b - a); }, 0.0);
      return {src + commutator(R, u, th) - advect(u, s.primary), -1.0 * advect(u, th)};
    }
    case Formulation::f:
    case Formulation::scaled: {
      const double ca = std::pow(e, a);
      const SpectralField src = apply_symbol(
          th,
          [=](double x, double y) { return cplx{0.0, x} * std::pow(std::hypot(x, y), 2.0 * (b - a)); },
          0.0);
      // With eps = 1 every weight is exactly 1.
      const SpectralField rhs = SpectralField::combine(std::pow(e, 2.0 - 3.0 * a), src, e, commutator(R, u, th)) +
                                SpectralField::combine(std::pow(e, 2.0 * b), commutator(H, u, th), -ca,
                                                       advect(u, s.primary));
      return {rhs, -ca * advect(u, th)};
    }
  }
  return {};
}

inline SpectralField dissipation(const SpectralField& x, double coef, double power) {
  if (coef == 0.0) return SpectralField::zeros(x.grid());
  return -coef * lambda(x, power);
}

/// Full time derivative of the state.
inline Tendency rhs(const SimState& s) {
  s.params.validate(s.form);
  const LinearPart lp = linear_part(s);
  Tendency t = nonlinear_terms(s);
  t.primary = t.primary + dissipation(s.primary, lp.primary_coef, s.params.alpha);
  t.theta = t.theta + dissipation(s.theta, lp.theta_coef, s.params.beta());
  return t;
}

inline Tendency rhs_vorticity(const SimState& s) {
  require(s.form == Formulation::omega, "rhs_vorticity needs an omega state");
  return rhs(s);
}

inline Tendency rhs_G(const SimState& s) {
  require(s.form == Formulation::G, "rhs_G needs a G state");
  return rhs(s);
}

inline Tendency rhs_f_system(const SimState& s) {
  require(s.form == Formulation::f, "rhs_f_system needs an f state");
  return rhs(s);
}

inline Tendency rhs_scaled(const SimState& s) {
  require(s.form == Formulation::scaled, "rhs_scaled needs a scaled state");
  return rhs(s);
}

/// Primitive-variable right-hand side
///   u_t = -P(u.grad u) - nu Lambda^alpha u + P(theta e_2),
///   theta_t = -u.grad theta - kappa Lambda^beta theta,
/// with P the Leray projection.
inline std::pair<VectorField, SpectralField> rhs_primitive(const VectorField& u, const SpectralField& theta,
                                                           const ModelParams& p) {
  const VectorField adv{advect(u, u.x), advect(u, u.y)};
  const VectorField buoy{SpectralField::zeros(theta.grid()), theta};
  const VectorField force = leray_project(buoy - adv);
  const VectorField du{force.x + dissipation(u.x, p.nu, p.alpha), force.y + dissipation(u.y, p.nu, p.alpha)};
  const SpectralField dth = -1.0 * advect(u, theta) + dissipation(theta, p.kappa, p.beta());
  return {du, dth};
}

// ---------------------------------------------------------------------------
// Time stepping.

inline bool finite_state(const SimState& s) { return s.theta.all_finite() && s.primary.all_finite(); }

/// Largest stable step for the advective speed of the state:
/// c * min(dx / ||a u||_inf, dx^alpha) with a the advection weight.
inline double cfl_limit(const SimState& s, double c) {
  const double dx = s.grid().spacing();
  const double weight = s.form == Formulation::scaled ? std::pow(s.params.eps, s.params.alpha) : 1.0;
  const double speed = weight * lp_norm(velocity(s), infinity);
  const double adv = speed > 0.0 ? dx / speed : infinity;
  return c * std::min(adv, std::pow(dx, s.params.alpha));
}

namespace detail {

inline SpectralField propagate(const SpectralField& x, double coef, double power, double h) {
  if (coef == 0.0 || h == 0.0) return x;
  return apply_symbol(
      x, [=](double a, double b) { return cplx{std::exp(-h * coef * std::pow(std::hypot(a, b), power))}; }, 1.0);
}

inline SimState with_fields(const SimState& s, SpectralField primary, SpectralField theta) {
  SimState o = s;
  o.primary = std::move(primary);
  o.theta = std::move(theta);
  return o;
}

}  // namespace detail

/// One integrating-factor RK4 step of signed length dt (no CFL guard).
inline SimState advance(const SimState& s, double dt) {
  s.params.validate(s.form);
  const LinearPart lp = linear_part(s);
  const double a = s.params.alpha, b = s.params.beta();
  auto Ep = [&](const SpectralField& x, double h) { return detail::propagate(x, lp.primary_coef, a, h); };
  auto Et = [&](const SpectralField& x, double h) { return detail::propagate(x, lp.theta_coef, b, h); };
  const double h = dt, h2 = 0.5 * dt;

  const Tendency k1 = nonlinear_terms(s);
  const SimState s2 = detail::with_fields(s, Ep(s.primary + h2 * k1.primary, h2), Et(s.theta + h2 * k1.theta, h2));
  const Tendency k2 = nonlinear_terms(s2);
  const SpectralField ep_half = Ep(s.primary, h2), et_half = Et(s.theta, h2);
  const SimState s3 = detail::with_fields(s, ep_half + h2 * k2.primary, et_half + h2 * k2.theta);
  const Tendency k3 = nonlinear_terms(s3);
  const SpectralField ep_full = Ep(s.primary, h), et_full = Et(s.theta, h);
  const SimState s4 = detail::with_fields(s, ep_full + h * Ep(k3.primary, h2), et_full + h * Et(k3.theta, h2));
  const Tendency k4 = nonlinear_terms(s4);

  const SpectralField p = ep_full + (h / 6.0) * (Ep(k1.primary, h) + 2.0 * Ep(k2.primary + k3.primary, h2) + k4.primary);
  const SpectralField t = et_full + (h / 6.0) * (Et(k1.theta, h) + 2.0 * Et(k2.theta + k3.theta, h2) + k4.theta);
  SimState out = detail::with_fields(s, p, t);
  out.time = s.time + dt;
  if (!finite_state(out))
    throw NumericalFailure("non-finite values after step to t = " + std::to_string(out.time));
  return out;
}

/// Guarded forward step: dt must be positive and within c_max times the
/// CFL limit of the current state.
inline SimState step(const SimState& s, double dt, double c_max = 1.0) {
  require(dt > 0.0 && std::isfinite(dt), "time step must be positive");
  if (!finite_state(s)) throw NumericalFailure("non-finite values in state at t = " + std::to_string(s.time));
  const double limit = cfl_limit(s, c_max);
  if (dt > limit * (1.0 + 1e-12))
    throw NumericalFailure("time step " + std::to_string(dt) + " exceeds CFL limit " + std::to_string(limit) +
                           " at t = " + std::to_string(s.time));
  return advance(s, dt);
}

// ---------------------------------------------------------------------------
// Initial data and the integration driver.

enum class InitialKind { random, bump, zero };

inline InitialKind parse_initial_kind(const std::string& s) {
  if (s == "random") return InitialKind::random;
  if (s == "bump") return InitialKind::bump;
  if (s == "zero") return InitialKind::zero;
  throw ValidationError("unknown initial data kind '" + s + "'");
}

struct InitialData {
  InitialKind kind = InitialKind::random;
  std::uint64_t seed = 1;
  double decay = 4.0;
  double theta_amplitude = 1.0;
  double omega_amplitude = 1.0;
  double width = 0.5;  ///< bump width, in units of the box length
};

/// Builds an omega state on [0, L)^2 from the initial data and converts it
/// to the requested formulation (scaled states use params.eps).
inline SimState initial_state(const Grid& g, const ModelParams& p, Formulation form, const InitialData& d) {
  SimState s;
  s.params = p;
  s.params.eps = 1.0;
  s.form = Formulation::omega;
  switch (d.kind) {
    case InitialKind::random:
      s.theta = random_smooth_field(g, d.seed, d.decay, d.theta_amplitude);
      s.primary = random_smooth_field(g, d.seed + 0x9e3779b97f4a7c15ULL, d.decay, d.omega_amplitude);
      break;
    case InitialKind::bump: {
      const double w = d.width * g.length() / (2.0 * std::numbers::pi);
      s.theta = gaussian_bump(g, d.theta_amplitude, w);
      // A vortex pair: the bump's x1 derivative, normalized to the amplitude.
      const SpectralField pair = partial(gaussian_bump(g, 1.0, w), 0);
      s.primary = (d.omega_amplitude / std::max(pair.max_abs(), 1e-300)) * pair;
      break;
    }
    case InitialKind::zero:
      s.theta = SpectralField::zeros(g);
      s.primary = SpectralField::zeros(g);
      break;
  }
  if (form == Formulation::scaled) return to_scaled(s, p.eps);
  s.params = p;
  s.params.validate(form == Formulation::omega ? Formulation::omega : form);
  return convert(s, form);
}

struct RunSettings {
  double T = 1.0;
  double cfl = 0.4;        ///< used when dt == 0
  double dt = 0.0;         ///< fixed step; 0 selects it from the initial CFL limit
  double cadence = 0.0;    ///< output spacing in time; 0 outputs every step
  double cfl_guard = 1.0;  ///< per-step guard constant
};

struct StepPlan {
  double dt = 0.0;
  std::size_t steps = 0;
  std::size_t steps_per_output = 1;
};

/// Fixed step that divides both T and the output cadence evenly.
inline StepPlan plan_steps(const SimState& s0, const RunSettings& r) {
  require(r.T > 0.0 && std::isfinite(r.T), "final time must be positive");
  require(r.cfl > 0.0, "CFL constant must be positive");
  const double dt0 = r.dt > 0.0 ? r.dt : cfl_limit(s0, r.cfl);
  StepPlan p;
  if (r.cadence > 0.0) {
    const double outs = std::round(r.T / r.cadence);
    require(outs >= 1.0 && std::abs(outs * r.cadence - r.T) <= 1e-9 * r.T,
            "output cadence must divide the final time");
    p.steps_per_output = static_cast<std::size_t>(std::ceil(r.cadence / dt0 - 1e-9));
    p.steps = static_cast<std::size_t>(outs) * p.steps_per_output;
  } else {
    p.steps = static_cast<std::size_t>(std::ceil(r.T / dt0 - 1e-9));
    p.steps_per_output = 1;
  }
  p.dt = r.T / static_cast<double>(p.steps);
  return p;
}

/// Observer called with every state on the step grid, including the initial one.
using StepObserver = std::function<void(const SimState&, std::size_t step, bool is_output)>;

/// Integrates to time T with the planned fixed step, calling the observer on
/// every step. Returns the final state.
inline SimState integrate(const SimState& s0, const RunSettings& r, const StepObserver& observe = {},
                          StepPlan* plan_out = nullptr) {
  const StepPlan plan = plan_steps(s0, r);
  if (plan_out) *plan_out = plan;
  SimState s = s0;
  if (observe) observe(s, 0, true);
  for (std::size_t k = 1; k <= plan.steps; ++k) {
    s = step(s, plan.dt, r.cfl_guard);
    s.time = s0.time + static_cast<double>(k) * plan.dt;
    if (observe) observe(s, k, k % plan.steps_per_output == 0);
  }
  return s;
}

}  // namespace fbl

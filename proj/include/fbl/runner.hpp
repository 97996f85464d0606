#pragma once

#include <chrono>
#include <filesystem>
#include <functional>
#include <ostream>
#include <string>
#include <vector>

#include "fbl/commutator_lab.hpp"
#include "fbl/config.hpp"
#include "fbl/diagnostics.hpp"
#include "fbl/io.hpp"
#include "fbl/littlewood_paley.hpp"

namespace fbl {

inline constexpr int exit_pass = 0;
inline constexpr int exit_validation = 1;
inline constexpr int exit_numerical = 2;
inline constexpr int exit_violation = 3;

// ---------------------------------------------------------------------------
// Time series.

inline const std::vector<std::string>& timeseries_header() {
  static const std::vector<std::string> h{"step",   "t",     "theta_L2",     "theta_Linf",    "f_L2",
                                          "f_L4",   "f_L6",  "lambda_f_L2",  "uf_Linf",       "grad_uf_Linf",
                                          "besov_f", "status"};
  return h;
}

/// Norms of theta and of the second-generation variable f, read in the
/// original (unscaled) variables.
inline std::vector<double> timeseries_values(const SimState& s) {
  SimState o = s.form == Formulation::scaled ? from_scaled(s) : s;
  const double a = o.params.alpha;
  const SpectralField f =
      o.form == Formulation::f ? o.primary : transform_to_f(vorticity(o), o.theta, a);
  const VectorField uf = perp_inverse_laplacian(f);
  const double bs = 3.0 * a - 2.0;
  return {lp_norm(o.theta, 2.0),
          lp_norm(o.theta, infinity),
          lp_norm(f, 2.0),
          lp_norm(f, 4.0),
          lp_norm(f, 6.0),
          lp_norm(lambda(f, a / 2.0), 2.0),
          lp_norm(uf, infinity),
          gradient_sup(uf),
          bs > 0.0 ? besov_norm(f.without_mean(), bs, 6.0 / bs) : 0.0};
}

// ---------------------------------------------------------------------------
// Integration with artifacts.

struct Trajectory {
  std::vector<SimState> outputs;
  double dt = 0.0;
  bool failed = false;
  std::string failure;
};

/// Integrates the configured run, recording output states, the time series
/// and (optionally) a snapshot set. A numerical failure stops the run and
/// appends a diagnostic row instead of throwing.
inline Trajectory integrate_run(const RunConfig& c, CsvTable* series, SnapshotWriter* snaps) {
  const Grid g = make_grid(c.n, c.length);
  const SimState s0 = initial_state(g, c.params, c.form, c.initial);
  const StepPlan plan = plan_steps(s0, c.run);
  Trajectory tr;
  tr.dt = plan.dt;
  std::size_t last_step = 0;
  double last_time = s0.time;
  auto observe = [&](const SimState& s, std::size_t k, bool is_output) {
    last_step = k;
    last_time = s.time;
    if (!is_output) return;
    tr.outputs.push_back(s);
    if (series) {
      std::vector<std::string> row{std::to_string(k), fmt(s.time)};
      for (double v : timeseries_values(s)) row.push_back(fmt(v));
      row.push_back("ok");
      series->add(std::move(row));
    }
    if (snaps) snaps->add(s, k, plan.dt);
  };
  try {
    integrate(s0, c.run, observe);
  } catch (const NumericalFailure& e) {
    tr.failed = true;
    tr.failure = e.what();
    if (series) {
      std::vector<std::string> row{std::to_string(last_step + 1), fmt(last_time + plan.dt)};
      for (std::size_t i = 2; i + 1 < timeseries_header().size(); ++i) row.push_back("nan");
      row.push_back("numerical_failure");
      series->add(std::move(row));
    }
  }
  return tr;
}

// ---------------------------------------------------------------------------
// Modes.

inline int run_simulate(const RunConfig& c, std::ostream& log) {
  const std::filesystem::path out(c.out);
  CsvTable series(timeseries_header());
  SnapshotWriter snaps(out / "snapshots");
  const Trajectory tr = integrate_run(c, &series, c.snapshots ? &snaps : nullptr);
  atomic_write(out / "timeseries.csv", series.str());
  if (c.snapshots) snaps.finish();
  if (tr.failed) {
    log << "numerical failure: " << tr.failure << "\n";
    return exit_numerical;
  }
  log << "simulate: " << tr.outputs.size() << " outputs, dt = " << fmt(tr.dt) << "\n";
  return exit_pass;
}

inline const std::vector<std::string>& ledger_header() {
  static const std::vector<std::string> h{
      "config", "t",       "J641",    "J65",     "J21",     "rate641", "rate65",  "rate21",  "exact641",
      "exact65", "exact21", "D641",   "D65",     "D21",     "I1",      "I2",      "I3",      "I4",
      "I5",     "K1",      "K2",      "K3",      "K0_adv",  "I1_f",    "I1_theta", "I3_f",   "I3_theta",
      "I4_f",   "I4_theta", "I5_f",   "I5_theta", "K2_f",   "K2_theta", "K3_f",   "K3_theta", "tol641",
      "tol65",  "tol21",   "ok641",   "ok65",    "ok21",    "ok_combined"};
  return h;
}

inline std::vector<std::string> ledger_csv_row(const std::string& id, const EnergyLedgerRow& r) {
  auto b = [](bool x) { return std::string(x ? "1" : "0"); };
  return {id,
          fmt(r.t),
          fmt(r.J641),
          fmt(r.J65),
          fmt(r.J21),
          fmt(r.rate641),
          fmt(r.rate65),
          fmt(r.rate21),
          fmt(r.exact641),
          fmt(r.exact65),
          fmt(r.exact21),
          fmt(r.D641),
          fmt(r.D65),
          fmt(r.D21),
          fmt(r.I1),
          fmt(r.I2),
          fmt(r.I3),
          fmt(r.I4),
          fmt(r.I5),
          fmt(r.K1),
          fmt(r.K2),
          fmt(r.K3),
          fmt(r.K0_adv),
          fmt(r.part_f.I1),
          fmt(r.part_theta.I1),
          fmt(r.part_f.I3),
          fmt(r.part_theta.I3),
          fmt(r.part_f.I4),
          fmt(r.part_theta.I4),
          fmt(r.part_f.I5),
          fmt(r.part_theta.I5),
          fmt(r.part_f.K2),
          fmt(r.part_theta.K2),
          fmt(r.part_f.K3),
          fmt(r.part_theta.K3),
          fmt(r.tol641),
          fmt(r.tol65),
          fmt(r.tol21),
          b(r.ok641),
          b(r.ok65),
          b(r.ok21),
          b(r.ok_combined)};
}

inline std::string verdict_block(const LedgerResult& L) {
  std::ostringstream o;
  auto rel = [&o](const RelationVerdict& v) {
    o << "  relation " << v.name << ": " << (v.pass ? "pass" : "FAIL") << " rows=" << v.rows
      << " failures=" << v.failures << " worst_margin=" << fmt(v.worst_margin) << "\n";
  };
  o << "config " << L.config.id << " s=" << fmt(L.config.s) << " kappa=" << fmt(L.config.kappa)
    << " p=" << L.config.p << "\n";
  rel(L.v641);
  rel(L.v65);
  rel(L.v21);
  rel(L.combined);
  o << "  rate_warning=" << (L.rate_warning ? 1 : 0) << " max_rate_error=" << fmt(L.max_rate_error) << "\n";
  o << "  int_D641=" << fmt(L.int_D641) << " int_D65=" << fmt(L.int_D65) << " int_D21=" << fmt(L.int_D21)
    << " finite=" << (L.integrals_finite ? 1 : 0) << "\n";
  o << "  sup_J641=" << fmt(L.sup_J641) << " sup_J65=" << fmt(L.sup_J65) << " sup_J21=" << fmt(L.sup_J21)
    << " monotone=" << (L.sup_monotone ? 1 : 0) << "\n";
  o << "  gronwall c_fit=" << fmt(L.gronwall.c_fit) << " c_meas=" << fmt(L.gronwall.c_meas)
    << " pass=" << (L.gronwall.pass ? 1 : 0) << "\n";
  o << "  verdict=" << (L.pass() ? "pass" : "FAIL") << "\n";
  return o.str();
}

inline const std::vector<std::string>& criteria_header() {
  static const std::vector<std::string> h{"t",           "f_L6",    "uf_Linf",        "grad_uf_Linf",
                                          "grad_theta_Linf", "besov_f", "embedding_ratio"};
  return h;
}

/// Ledger over a trajectory evaluated inline or replayed from a snapshot
/// set. States are rebuilt from their physical samples in both cases, so
/// the two paths see identical inputs.
inline int run_ledger(const RunConfig& c, std::ostream& log) {
  const std::filesystem::path out(c.out);
  std::vector<SimState> traj;
  double dt = 0.0;
  if (!c.replay.empty()) {
    SnapshotSet set = read_snapshots(c.replay);
    traj = std::move(set.states);
    dt = set.dt;
  } else {
    SnapshotWriter snaps(out / "snapshots");
    Trajectory tr = integrate_run(c, nullptr, c.snapshots ? &snaps : nullptr);
    if (c.snapshots) snaps.finish();
    if (tr.failed) {
      log << "numerical failure: " << tr.failure << "\n";
      return exit_numerical;
    }
    for (auto& s : tr.outputs) {
      s.theta = s.theta.canonical();
      s.primary = s.primary.canonical();
    }
    traj = std::move(tr.outputs);
    dt = tr.dt;
  }
  for (const auto& s : traj)
    require(s.params.nu == 1.0 && s.params.kappa == 1.0, "[model] the ledger needs nu = kappa = 1");

  CsvTable table(ledger_header());
  std::string verdicts;
  bool all_pass = true;
  for (const auto& cfg : c.ledger) {
    const LedgerResult L = ledger_run(traj, cfg, dt);
    for (const auto& r : L.rows) table.add(ledger_csv_row(cfg.id, r));
    verdicts += verdict_block(L);
    all_pass = all_pass && L.pass();
  }
  const CriteriaReport cr = criteria_monitor(traj);
  CsvTable crit(criteria_header());
  for (const auto& r : cr.rows)
    crit.add({fmt(r.t), fmt(r.f_L6), fmt(r.uf_inf), fmt(r.grad_uf_inf), fmt(r.grad_theta_inf), fmt(r.besov_f),
              fmt(r.embedding_ratio)});
  verdicts += "criteria sup_f_L6=" + fmt(cr.sup_f_L6) + " sup_grad_uf_Linf=" + fmt(cr.sup_grad_uf_inf) +
              " sup_besov_f=" + fmt(cr.sup_besov_f) + " finite=" + (cr.all_finite() ? "1" : "0") + "\n";
  verdicts += std::string("overall=") + (all_pass ? "pass" : "FAIL") + "\n";
  atomic_write(out / "ledger.csv", table.str());
  atomic_write(out / "criteria.csv", crit.str());
  atomic_write(out / "ledger_verdicts.txt", verdicts);
  log << verdicts;
  return all_pass ? exit_pass : exit_violation;
}

/// Estimate campaign. Constants are sampled lower bounds; canary specs are
/// reported but never change the exit status.
inline int run_estimate(const RunConfig& c, std::ostream& log) {
  const std::filesystem::path out(c.out);
  CsvTable table({"spec", "family", "canary", "near_boundary", "n", "trials", "samples", "resampled", "c_hat"});
  std::ostringstream v;
  v << "note: c_hat is the largest sampled ratio, a lower bound for the best constant; "
       "no inequality is verified universally\n";
  bool stable = true;
  for (const auto& spec : c.specs) {
    const EstimateReport rep = estimate_constant(spec, c.trials, c.grids, c.seed, c.ensemble);
    for (const auto& ge : rep.grids)
      table.add({spec.id, spec.family, spec.canary ? "1" : "0", spec.near_boundary ? "1" : "0", std::to_string(ge.n),
                 std::to_string(c.trials), std::to_string(ge.samples), std::to_string(ge.resampled),
                 fmt(ge.c_hat)});
    v << "spec " << spec.id << " family=" << spec.family << " role=" << (spec.canary ? "canary" : "gated")
      << " c_hat=" << fmt(rep.c_hat) << " growth=" << fmt(rep.growth)
      << " resolution_stable=" << (rep.resolution_stable ? 1 : 0);
    if (spec.near_boundary) v << " near_boundary=1";
    for (const auto& why : spec.violations) v << " violates=\"" << why << "\"";
    v << "\n";
    if (!spec.canary) stable = stable && rep.resolution_stable;
  }
  if (c.easier_term) {
    const EasierTermReport e = easier_term_comparison(c.grids.front(), c.trials, c.seed, c.params.alpha);
    v << "observation easier_term c_riesz=" << fmt(e.c_riesz) << " c_correction=" << fmt(e.c_correction)
      << " correction_not_larger=" << (e.c_correction <= e.c_riesz ? 1 : 0) << "\n";
  }
  v << "overall=" << (stable ? "pass" : "FAIL") << "\n";
  atomic_write(out / "estimates.csv", table.str());
  atomic_write(out / "estimate_verdicts.txt", v.str());
  log << v.str();
  return stable ? exit_pass : exit_violation;
}

// ---------------------------------------------------------------------------
// Self test: quick structural checks of every module.

struct SelfCheck {
  std::string name;
  bool pass = false;
  double value = 0.0;
};

inline std::vector<SelfCheck> selftest_checks() {
  std::vector<SelfCheck> out;
  auto check = [&out](const std::string& name, const std::function<double()>& err, double tol) {
    SelfCheck c;
    c.name = name;
    try {
      c.value = err();
      c.pass = c.value <= tol;
    } catch (const std::exception& e) {
      c.value = infinity;
      c.pass = false;
      c.name += std::string(" (") + e.what() + ")";
    }
    out.push_back(c);
  };
  const Grid g = make_grid(32, 2.0 * std::numbers::pi);
  const SpectralField f = random_smooth_field(g, 11, 3.0, 1.0);
  const SpectralField h = random_smooth_field(g, 12, 3.0, 1.0);
  auto rel = [](const SpectralField& a, const SpectralField& b) {
    return (a - b).max_abs() / std::max(b.max_abs(), 1e-300);
  };

  check("spectral.lambda_composition", [&] { return rel(lambda(lambda(f, 0.3), 0.5), lambda(f, 0.8)); }, 1e-12);
  check("spectral.parseval", [&] { return std::abs(parseval_norm(f, 0.0) - lp_norm(f, 2.0)) / lp_norm(f, 2.0); },
        1e-12);
  check("spectral.zero_mode", [&] { return lambda(SpectralField::constant(g, 3.0), -1.0).max_abs(); }, 1e-15);
  check("littlewood_paley.partition_of_unity", [&] {
    const DyadicPartition P = build_partition(g);
    double worst = 0.0;
    for (double r = 1.0; r <= g.max_wavenumber(); r += 0.25) {
      double s = 0.0;
      for (int j = P.low_index(); j <= P.jmax; ++j) s += P.symbol(j, r);
      worst = std::max(worst, std::abs(s - 1.0));
    }
    return worst;
  }, 1e-12);
  check("littlewood_paley.paraproduct_sum", [&] {
    const DyadicPartition P = build_partition(g);
    const SpectralField want = dyadic_block(P, dealiased_product(f, h), 3);
    return (paraproduct_split(P, f, h, 3, 2).sum() - want).max_abs() / std::max(want.max_abs(), 1e-300);
  }, 1e-11);
  check("boussinesq.zero_data_stays_zero", [&] {
    SimState s;
    s.theta = SpectralField::zeros(g);
    s.primary = SpectralField::zeros(g);
    const SimState t = advance(s, 0.01);
    return std::max(t.theta.max_abs(), t.primary.max_abs());
  }, 0.0);
  check("boussinesq.f_round_trip", [&] {
    SimState s;
    s.theta = h;
    s.primary = f.without_mean();
    return rel(vorticity(convert(s, Formulation::f)), s.primary);
  }, 1e-12);
  check("diagnostics.exponents", [&] {
    const Exponents e = exponents(0.75, 0.01);
    return std::abs(e.gamma - 0.105) + std::abs(e.a) + std::abs(e.delta) + std::abs(e.besov_s - 0.25) +
           std::abs(e.besov_r - 24.0) + std::abs(e.q0 - 4.0 * 0.5 / (3.0 * 0.75 * 0.25 + 0.5));
  }, 1e-14);
  check("diagnostics.advection_skew", [&] {
    const VectorField u = biot_savart(f.without_mean());
    return std::abs(inner(advect(u, h), h)) / (inner(h, h) * lp_norm(u, infinity));
  }, 1e-12);
  check("diagnostics.zero_ledger", [&] {
    SimState s;
    s.theta = SpectralField::zeros(g);
    s.primary = SpectralField::zeros(g);
    const EnergyLedgerRow r = energy_terms(s, LedgerConfig{"z", 0.2, 0.1, 4});
    return r.J641 + r.J65 + r.J21 + r.D641 + r.D65 + std::abs(r.D21) + r.I1 + r.I2 + r.I3 + r.I4 + r.I5;
  }, 0.0);
  check("commutator_lab.constant_velocity", [&] {
    return commutator_field(MultiplierSpec::lambda_pow(0.5), VectorField::constant(g, 1.0, -2.0), f).max_abs();
  }, 1e-12);
  check("commutator_lab.constant_scalar", [&] {
    const VectorField V = random_divfree_field(g, 5, 0, 2);
    return commutator_field(MultiplierSpec::lambda_pow(0.5), V, SpectralField::constant(g, 2.0)).max_abs();
  }, 1e-12);
  check("commutator_lab.hypotheses", [&] {
    try {
      make_spec("x", "eq20", {{"s1", 0.25}, {"s2", 0.75}, {"a", 0.75}, {"p", 2.0}, {"q", 2.0}, {"r", 4.0}});
    } catch (const ValidationError&) {
      return 0.0;
    }
    return 1.0;
  }, 0.0);
  check("cli_runner.snapshot_round_trip", [&] {
    const auto back = decode_fields(encode_fields({{"theta", h}, {"primary", f}}));
    double d = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i)
      d = std::max({d, std::abs(back[0].field.physical()[i] - h.physical()[i]),
                    std::abs(back[1].field.physical()[i] - f.physical()[i])});
    return back.size() == 2 && back[0].name == "theta" ? d : 1.0;
  }, 0.0);
  check("cli_runner.number_round_trip", [&] {
    const double x = 0.1 + 0.2;
    return std::stod(fmt(x)) == x ? 0.0 : 1.0;
  }, 0.0);
  return out;
}

inline int run_selftest(std::ostream& log) {
  const auto t0 = std::chrono::steady_clock::now();
  bool ok = true;
  for (const auto& c : selftest_checks()) {
    log << (c.pass ? "ok   " : "FAIL ") << c.name << " " << fmt(c.value) << "\n";
    ok = ok && c.pass;
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  log << "selftest " << (ok ? "passed" : "failed") << " in " << fmt(secs) << " s\n";
  return ok ? exit_pass : exit_violation;
}

/// Validates the configuration and runs its mode. Returns the exit status.
inline int run(RunConfig c, std::ostream& log) {
  try {
    validate(c);
    switch (c.mode) {
      case Mode::simulate: return run_simulate(c, log);
      case Mode::ledger: return run_ledger(c, log);
      case Mode::estimate: return run_estimate(c, log);
      case Mode::selftest: return run_selftest(log);
    }
  } catch (const ValidationError& e) {
    log << "validation error: " << e.what() << "\n";
    return exit_validation;
  } catch (const IoError& e) {
    log << "i/o error: " << e.what() << "\n";
    return exit_validation;
  } catch (const NumericalFailure& e) {
    log << "numerical failure: " << e.what() << "\n";
    return exit_numerical;
  } catch (const std::filesystem::filesystem_error& e) {
    log << "i/o error: " << e.what() << "\n";
    return exit_validation;
  }
  return exit_validation;
}

}  // namespace fbl

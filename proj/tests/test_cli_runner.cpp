#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <sstream>
#include <string>

#include "fbl/runner.hpp"

namespace fs = std::filesystem;
using namespace fbl;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("fbl_cli_runner_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

RunConfig parse(const std::string& text) {
  std::istringstream is(text);
  return parse_config(is);
}

std::string validation_message(RunConfig c) {
  try {
    validate(c);
  } catch (const ValidationError& e) {
    return e.what();
  }
  return {};
}

int run_quiet(const RunConfig& c) {
  std::ostringstream log;
  return run(c, log);
}

std::vector<std::vector<std::string>> read_csv(const fs::path& p) {
  std::istringstream is(read_file(p));
  std::vector<std::vector<std::string>> rows;
  std::string line;
  while (std::getline(is, line)) {
    std::vector<std::string> cells;
    std::stringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    rows.push_back(cells);
  }
  return rows;
}

const char* small_run =
    "[model]\n"
    "n = 32\n"
    "alpha = 0.75\n"
    "T = 0.1\n"
    "dt = 0.005\n"
    "cadence = 0.02\n"
    "[initial]\n"
    "kind = random\n"
    "theta_amplitude = 0.5\n"
    "omega_amplitude = 0.5\n";

}  // namespace

TEST(Config, DefaultsValidate) {
  RunConfig c;
  EXPECT_NO_THROW(validate(c));
  EXPECT_EQ(c.ledger.size(), 3u);
  EXPECT_EQ(c.specs.size(), default_registry().size());
  EXPECT_EQ(c.initial.seed, c.seed);
}

TEST(Config, ParsesEverySection) {
  RunConfig c = parse(
      "[run]\nmode = ledger\nseed = 9\nout = somewhere\nsnapshots = false\n"
      "[model]\nn = 64\nalpha = 0.8\nformulation = f\nT = 2\ncfl = 0.3\ncadence = 0.5\n"
      "[initial]\nkind = bump\nwidth = 0.3\n"
      "[ledger]\nconfigs = prop31, prop32_alt\ncustom = mine:0.5:0.25:6\nrho = 0.02\n"
      "[estimate]\nspecs = eq20, g50\ntrials = 7\ngrids = 32,64\nensemble = constant_velocity\n");
  validate(c);
  EXPECT_EQ(c.mode, Mode::ledger);
  EXPECT_EQ(c.seed, 9u);
  EXPECT_EQ(c.out, "somewhere");
  EXPECT_FALSE(c.snapshots);
  EXPECT_EQ(c.n, 64u);
  EXPECT_EQ(c.form, Formulation::f);
  EXPECT_DOUBLE_EQ(c.params.alpha, 0.8);
  EXPECT_EQ(c.initial.kind, InitialKind::bump);
  ASSERT_EQ(c.ledger.size(), 3u);
  EXPECT_EQ(c.ledger[1].id, "prop32_alt");
  EXPECT_EQ(c.ledger[2].p, 6);
  EXPECT_DOUBLE_EQ(c.rho, 0.02);
  ASSERT_EQ(c.specs.size(), 2u);
  EXPECT_EQ(c.specs[1].id, "g50");
  EXPECT_EQ(c.trials, 7u);
  EXPECT_EQ(c.grids, (std::vector<std::size_t>{32, 64}));
  EXPECT_EQ(c.ensemble, Ensemble::constant_velocity);
}

TEST(Config, UnknownKeysAndSectionsRejected) {
  EXPECT_THROW(parse("[model]\nalpah = 0.7\n"), ValidationError);
  EXPECT_THROW(parse("[modle]\nalpha = 0.7\n"), ValidationError);
  EXPECT_THROW(parse("[model]\nalpha = fast\n"), ValidationError);
  EXPECT_THROW(parse("[run]\nmode = sprint\n"), ValidationError);
}

TEST(Config, ViolatedConstraintIsNamed) {
  EXPECT_NE(validation_message(parse("[registry]\neq20.q = 2\neq20.p = 1.3333333333333333\n")).find(
                "eq20 requires 2<q<∞"),
            std::string::npos);
  EXPECT_NE(validation_message(parse("[estimate]\nspecs = eq99\n")).find("unknown inequality spec 'eq99'"),
            std::string::npos);
  EXPECT_NE(validation_message(parse("[ledger]\ncustom = odd:0.1:0.1:3\n")).find("even"), std::string::npos);
  EXPECT_NE(validation_message(parse("[model]\nn = 48\n")).find("power of two"), std::string::npos);
  EXPECT_NE(validation_message(parse("[model]\nalpha = 0.4\n")).find("alpha"), std::string::npos);
  EXPECT_NE(validation_message(parse("[model]\nT = 1\ncadence = 0.3\n")).find("cadence"), std::string::npos);
  EXPECT_NE(validation_message(parse("[estimate]\ngrids = 128,64\n")).find("increase"), std::string::npos);
  EXPECT_NE(validation_message(parse("[model]\nformulation = f\nnu = 2\n")).find("nu = kappa = 1"),
            std::string::npos);
}

TEST(Config, RegistryAdditionsAndCanaries) {
  RunConfig c = parse(
      "[registry]\nmine.family = eq25\nmine.s1 = 0.4\nmine.s2 = 0.6\nmine.s3 = 0.4\n"
      "[estimate]\nspecs = mine, eq20_canary\n");
  validate(c);
  ASSERT_EQ(c.specs.size(), 2u);
  EXPECT_EQ(c.specs[0].family, "eq25");
  EXPECT_FALSE(c.specs[0].canary);
  EXPECT_TRUE(c.specs[1].canary);
  EXPECT_NE(validation_message(parse("[registry]\nnew.s = 1\n")).find("needs a family"), std::string::npos);
}

TEST(Io, NumbersRoundTrip) {
  for (double x : {0.1 + 0.2, 1.0 / 3.0, -2.5e-300, 6.02214076e23}) EXPECT_EQ(std::stod(fmt(x)), x);
  EXPECT_EQ(fmt(std::nan("")), "nan");
}

TEST(Io, SnapshotRoundTripIsBitExact) {
  const Grid g = make_grid(16, 3.0);
  const SpectralField a = random_smooth_field(g, 1, 2.0, 1.0), b = random_smooth_field(g, 2, 2.0, 1.0);
  const std::string bytes = encode_fields({{"theta", a}, {"primary", b}});
  EXPECT_EQ(bytes.substr(0, 4), "FBL1");
  EXPECT_EQ(bytes.size(), 4u + 4 + 8 + 2 + (2 + 5) + (2 + 7) + 2 * 16 * 16 * 8);
  const auto back = decode_fields(bytes);
  ASSERT_EQ(back.size(), 2u);
  EXPECT_EQ(back[1].name, "primary");
  EXPECT_DOUBLE_EQ(back[0].field.grid().length(), 3.0);
  for (std::size_t i = 0; i < g.size(); ++i) {
    EXPECT_EQ(back[0].field.physical()[i], a.physical()[i]);
    EXPECT_EQ(back[1].field.physical()[i], b.physical()[i]);
  }
  EXPECT_THROW(decode_fields(bytes.substr(0, bytes.size() - 1)), IoError);
  EXPECT_THROW(decode_fields("FBL2" + bytes.substr(4)), IoError);
}

TEST(Io, AtomicWriteLeavesNoTemporary) {
  const fs::path d = scratch("atomic");
  atomic_write(d / "sub" / "x.csv", "a,b\n");
  atomic_write(d / "sub" / "x.csv", "c,d\n");
  EXPECT_EQ(read_file(d / "sub" / "x.csv"), "c,d\n");
  EXPECT_FALSE(fs::exists(d / "sub" / "x.csv.tmp"));
}

TEST(Run, ZeroDataGivesFlatSeries) {
  std::string text = small_run;
  text.replace(text.find("kind = random"), 13, "kind = zero");
  RunConfig c = parse(text);
  c.out = scratch("zero").string();
  ASSERT_EQ(run_quiet(c), exit_pass);
  const auto rows = read_csv(fs::path(c.out) / "timeseries.csv");
  ASSERT_EQ(rows.size(), 1u + 6);
  EXPECT_EQ(rows[0], timeseries_header());
  for (std::size_t i = 1; i < rows.size(); ++i) {
    for (std::size_t k = 2; k + 1 < rows[i].size(); ++k) EXPECT_EQ(rows[i][k], "0");
    EXPECT_EQ(rows[i].back(), "ok");
  }
}

TEST(Run, SimulateIsByteDeterministic) {
  RunConfig c = parse(small_run);
  const fs::path a = scratch("det_a"), b = scratch("det_b"), other = scratch("det_seed");
  c.out = a.string();
  ASSERT_EQ(run_quiet(c), exit_pass);
  c.out = b.string();
  ASSERT_EQ(run_quiet(c), exit_pass);
  const std::string first = read_file(a / "timeseries.csv");
  EXPECT_EQ(read_csv(a / "timeseries.csv").size(), 1u + 6);
  EXPECT_EQ(first, read_file(b / "timeseries.csv"));
  EXPECT_EQ(read_file(a / "snapshots" / "manifest.csv"), read_file(b / "snapshots" / "manifest.csv"));
  EXPECT_EQ(read_file(a / "snapshots" / "snap_00005.fbl"), read_file(b / "snapshots" / "snap_00005.fbl"));
  c.seed = 2;
  c.out = other.string();
  ASSERT_EQ(run_quiet(c), exit_pass);
  EXPECT_NE(first, read_file(other / "timeseries.csv"));
}

TEST(Run, LedgerReplayMatchesInline) {
  RunConfig c = parse(std::string(small_run) + "[ledger]\nconfigs = prop31, prop32, prop33\n");
  c.mode = Mode::ledger;
  const fs::path a = scratch("ledger_inline"), b = scratch("ledger_replay"), r = scratch("ledger_repeat");
  c.out = a.string();
  ASSERT_EQ(run_quiet(c), exit_pass);
  c.out = r.string();
  ASSERT_EQ(run_quiet(c), exit_pass);
  RunConfig replay = c;
  replay.replay = (a / "snapshots").string();
  replay.out = b.string();
  ASSERT_EQ(run_quiet(replay), exit_pass);
  const std::string inline_csv = read_file(a / "ledger.csv");
  EXPECT_EQ(read_csv(a / "ledger.csv").size(), 1u + 3 * 6);
  EXPECT_EQ(inline_csv, read_file(b / "ledger.csv"));
  EXPECT_EQ(inline_csv, read_file(r / "ledger.csv"));
  EXPECT_EQ(read_file(a / "criteria.csv"), read_file(b / "criteria.csv"));
  EXPECT_EQ(read_file(a / "ledger_verdicts.txt"), read_file(b / "ledger_verdicts.txt"));
  EXPECT_NE(read_file(a / "ledger_verdicts.txt").find("overall=pass"), std::string::npos);
}

TEST(Run, LedgerRejectsShortTrajectory) {
  RunConfig c = parse("[model]\nn = 32\nT = 0.01\ndt = 0.005\ncadence = 0.01\n");
  c.mode = Mode::ledger;
  c.out = scratch("ledger_short").string();
  EXPECT_EQ(run_quiet(c), exit_validation);
}

TEST(Run, NumericalFailureLeavesPartialSeries) {
  RunConfig c = parse(
      "[model]\nn = 32\nT = 1\ndt = 0.25\n[initial]\nkind = random\n"
      "theta_amplitude = 1e4\nomega_amplitude = 1e4\n");
  c.out = scratch("nan").string();
  EXPECT_EQ(run_quiet(c), exit_numerical);
  const auto rows = read_csv(fs::path(c.out) / "timeseries.csv");
  ASSERT_GE(rows.size(), 3u);
  for (const auto& row : rows) EXPECT_EQ(row.size(), timeseries_header().size());
  EXPECT_EQ(rows[1].back(), "ok");
  EXPECT_EQ(rows.back().back(), "numerical_failure");
  EXPECT_EQ(rows.back()[2], "nan");
}

TEST(Run, ValidationFailureExitsOne) {
  RunConfig c = parse("[model]\nn = 48\n");
  c.out = scratch("invalid").string();
  std::ostringstream log;
  EXPECT_EQ(run(c, log), exit_validation);
  EXPECT_NE(log.str().find("power of two"), std::string::npos);
  EXPECT_FALSE(fs::exists(fs::path(c.out) / "timeseries.csv"));
}

TEST(Run, EstimateIsDeterministicAndCanariesNeverGate) {
  RunConfig c = parse("[estimate]\nspecs = eq25, eq20_canary\ntrials = 4\ngrids = 32,64\neasier_term = false\n");
  c.mode = Mode::estimate;
  const fs::path a = scratch("est_a"), b = scratch("est_b");
  c.out = a.string();
  const int code = run_quiet(c);
  c.out = b.string();
  EXPECT_EQ(run_quiet(c), code);
  EXPECT_EQ(read_file(a / "estimates.csv"), read_file(b / "estimates.csv"));
  const auto rows = read_csv(a / "estimates.csv");
  ASSERT_EQ(rows.size(), 1u + 2 * 2);
  EXPECT_EQ(rows[3][2], "1");
  const std::string v = read_file(a / "estimate_verdicts.txt");
  EXPECT_NE(v.find("role=canary"), std::string::npos);
  EXPECT_NE(v.find("lower bound"), std::string::npos);
  EXPECT_NE(v.find("eq20 requires 2<q<∞"), std::string::npos);
  const bool gated_stable = v.find("spec eq25 family=eq25 role=gated") != std::string::npos &&
                            v.find("resolution_stable=1") < v.find("spec eq20_canary");
  EXPECT_EQ(code, gated_stable ? exit_pass : exit_violation);
}

TEST(Run, SelftestPasses) {
  std::ostringstream log;
  EXPECT_EQ(run_selftest(log), exit_pass) << log.str();
  EXPECT_EQ(log.str().find("FAIL"), std::string::npos);
}

TEST(Cli, ExitCodesAndOverrides) {
  const std::string cli = FBL_CLI_PATH;
  const fs::path d = scratch("cli");
  auto sh = [](const std::string& cmd) {
    const int st = std::system((cmd + " > /dev/null 2>&1").c_str());
    return WIFEXITED(st) ? WEXITSTATUS(st) : -1;
  };
  EXPECT_EQ(sh(cli + " selftest"), 0);
  EXPECT_EQ(sh(cli), 1);
  EXPECT_EQ(sh(cli + " simulate --config " + (d / "missing.ini").string()), 1);
  atomic_write(d / "bad.ini", "[model]\nalpha = 1.5\n");
  EXPECT_EQ(sh(cli + " simulate --config " + (d / "bad.ini").string()), 1);
  atomic_write(d / "run.ini", small_run);
  EXPECT_EQ(sh(cli + " simulate --config " + (d / "run.ini").string() + " --out " + (d / "s1").string()), 0);
  EXPECT_EQ(sh(cli + " simulate --config " + (d / "run.ini").string() + " --seed 1 --out " + (d / "s2").string()), 0);
  EXPECT_EQ(sh(cli + " simulate --config " + (d / "run.ini").string() + " --seed 5 --out " + (d / "s3").string()), 0);
  EXPECT_EQ(read_file(d / "s1" / "timeseries.csv"), read_file(d / "s2" / "timeseries.csv"));
  EXPECT_NE(read_file(d / "s1" / "timeseries.csv"), read_file(d / "s3" / "timeseries.csv"));
  EXPECT_EQ(sh(cli + " estimate --grids 64,32"), 1);
}

#pragma once

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <cmath>
#include <cstdint>
#include <fstream>
#include <map>
#include <numbers>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "fbl/boussinesq.hpp"
#include "fbl/commutator_lab.hpp"
#include "fbl/diagnostics.hpp"
#include "fbl/error.hpp"

namespace fbl {

enum class Mode { simulate, ledger, estimate, selftest };

inline std::string to_string(Mode m) {
  switch (m) {
    case Mode::simulate: return "simulate";
    case Mode::ledger: return "ledger";
    case Mode::estimate: return "estimate";
    case Mode::selftest: return "selftest";
  }
  return "?";
}

inline Mode parse_mode(const std::string& s) {
  if (s == "simulate") return Mode::simulate;
  if (s == "ledger") return Mode::ledger;
  if (s == "estimate") return Mode::estimate;
  if (s == "selftest") return Mode::selftest;
  throw ValidationError("unknown mode '" + s + "'");
}

inline Ensemble parse_ensemble(const std::string& s) {
  if (s == "mixed") return Ensemble::mixed;
  if (s == "constant_velocity") return Ensemble::constant_velocity;
  throw ValidationError("unknown ensemble '" + s + "'");
}

inline std::string to_string(Ensemble e) { return e == Ensemble::mixed ? "mixed" : "constant_velocity"; }

/// Custom ledger entry "id:s:kappa:p".
struct CustomLedger {
  std::string id;
  double s = 0.0;
  double kappa = 0.0;
  int p = 2;
};

/// Exponent overrides and additions for the inequality registry.
struct RegistryEntry {
  std::string family;
  bool canary = false;
  bool canary_set = false;
  std::map<std::string, double> exponents;
};

struct RunConfig {
  Mode mode = Mode::simulate;
  std::uint64_t seed = 1;
  std::string out = "out";

  std::size_t n = 64;
  double length = 2.0 * std::numbers::pi;
  Formulation form = Formulation::omega;
  ModelParams params;
  RunSettings run;
  InitialData initial;
  bool snapshots = true;

  std::vector<std::string> ledger_ids{"prop31", "prop32", "prop33"};
  std::vector<CustomLedger> ledger_custom;
  double rho = 0.01;
  std::string replay;

  std::vector<std::string> spec_ids{"all"};
  std::map<std::string, RegistryEntry> registry;
  std::size_t trials = 200;
  std::vector<std::size_t> grids{64, 128};
  Ensemble ensemble = Ensemble::mixed;
  bool easier_term = true;

  // Filled by validate().
  std::vector<LedgerConfig> ledger;
  std::vector<InequalitySpec> specs;
};

namespace detail {

inline std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return {};
  const auto b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

inline std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep)) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

inline double to_double(const std::string& key, const std::string& v) {
  std::size_t used = 0;
  double x = 0.0;
  try {
    x = std::stod(v, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || trim(v.substr(used)) != "") throw ValidationError(key + ": '" + v + "' is not a number");
  return x;
}

inline std::uint64_t to_uint(const std::string& key, const std::string& v) {
  const std::string t = trim(v);
  if (t.empty() || t.find_first_not_of("0123456789") != std::string::npos)
    throw ValidationError(key + ": '" + v + "' is not a non-negative integer");
  try {
    return std::stoull(t);
  } catch (const std::exception&) {
    throw ValidationError(key + ": '" + v + "' is out of range");
  }
}

inline bool to_bool(const std::string& key, const std::string& v) {
  const std::string t = trim(v);
  if (t == "true" || t == "1" || t == "yes" || t == "on") return true;
  if (t == "false" || t == "0" || t == "no" || t == "off") return false;
  throw ValidationError(key + ": '" + v + "' is not a boolean");
}

inline std::vector<std::size_t> to_grids(const std::string& key, const std::string& v) {
  std::vector<std::size_t> g;
  for (const auto& item : split(v, ',')) g.push_back(static_cast<std::size_t>(to_uint(key, item)));
  if (g.empty()) throw ValidationError(key + ": empty grid list");
  return g;
}

inline bool power_of_two(std::size_t n) { return n >= 2 && (n & (n - 1)) == 0; }

}  // namespace detail

/// Parses a comma-separated grid list such as "64,128".
inline std::vector<std::size_t> parse_grids(const std::string& v) { return detail::to_grids("grids", v); }

/// Reads an INI configuration. Unknown sections and keys are rejected.
inline RunConfig parse_config(std::istream& is) {
  namespace pt = boost::property_tree;
  pt::ptree tree;
  try {
    pt::read_ini(is, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ValidationError(std::string("config: ") + e.what());
  }
  RunConfig c;
  for (const auto& [section, body] : tree) {
    if (body.empty() && !body.data().empty())
      throw ValidationError("config: key '" + section + "' must sit inside a section");
    for (const auto& [key, node] : body) {
      const std::string v = detail::trim(node.data());
      const std::string k = "[" + section + "] " + key;
      auto num = [&] { return detail::to_double(k, v); };
      bool known = true;
      if (section == "run") {
        if (key == "mode") c.mode = parse_mode(v);
        else if (key == "seed") c.seed = detail::to_uint(k, v);
        else if (key == "out") c.out = v;
        else if (key == "snapshots") c.snapshots = detail::to_bool(k, v);
        else known = false;
      } else if (section == "model") {
        if (key == "n") c.n = static_cast<std::size_t>(detail::to_uint(k, v));
        else if (key == "length") c.length = num();
        else if (key == "formulation") c.form = parse_formulation(v);
        else if (key == "alpha") c.params.alpha = num();
        else if (key == "nu") c.params.nu = num();
        else if (key == "kappa") c.params.kappa = num();
        else if (key == "eps") c.params.eps = num();
        else if (key == "T") c.run.T = num();
        else if (key == "cfl") c.run.cfl = num();
        else if (key == "dt") c.run.dt = num();
        else if (key == "cadence") c.run.cadence = num();
        else if (key == "cfl_guard") c.run.cfl_guard = num();
        else known = false;
      } else if (section == "initial") {
        if (key == "kind") c.initial.kind = parse_initial_kind(v);
        else if (key == "decay") c.initial.decay = num();
        else if (key == "theta_amplitude") c.initial.theta_amplitude = num();
        else if (key == "omega_amplitude") c.initial.omega_amplitude = num();
        else if (key == "width") c.initial.width = num();
        else known = false;
      } else if (section == "ledger") {
        if (key == "configs") c.ledger_ids = detail::split(v, ',');
        else if (key == "custom") {
          c.ledger_custom.clear();
          for (const auto& item : detail::split(v, ',')) {
            const auto f = detail::split(item, ':');
            if (f.size() != 4) throw ValidationError(k + ": entry '" + item + "' is not id:s:kappa:p");
            CustomLedger cl;
            cl.id = f[0];
            cl.s = detail::to_double(k, f[1]);
            cl.kappa = detail::to_double(k, f[2]);
            cl.p = static_cast<int>(detail::to_double(k, f[3]));
            if (static_cast<double>(cl.p) != detail::to_double(k, f[3]))
              throw ValidationError(k + ": p must be an integer in '" + item + "'");
            c.ledger_custom.push_back(cl);
          }
        } else if (key == "rho") c.rho = num();
        else if (key == "replay") c.replay = v;
        else known = false;
      } else if (section == "estimate") {
        if (key == "specs") c.spec_ids = detail::split(v, ',');
        else if (key == "trials") c.trials = static_cast<std::size_t>(detail::to_uint(k, v));
        else if (key == "grids") c.grids = detail::to_grids(k, v);
        else if (key == "ensemble") c.ensemble = parse_ensemble(v);
        else if (key == "easier_term") c.easier_term = detail::to_bool(k, v);
        else known = false;
      } else if (section == "registry") {
        const auto dot = key.find('.');
        if (dot == std::string::npos || dot == 0 || dot + 1 == key.size())
          throw ValidationError(k + ": registry keys have the form <spec>.<field>");
        RegistryEntry& e = c.registry[key.substr(0, dot)];
        const std::string field = key.substr(dot + 1);
        if (field == "family") e.family = v;
        else if (field == "canary") {
          e.canary = detail::to_bool(k, v);
          e.canary_set = true;
        } else e.exponents[field] = num();
      } else {
        throw ValidationError("config: unknown section [" + section + "]");
      }
      if (!known) throw ValidationError("config: unknown key " + k);
    }
  }
  return c;
}

inline RunConfig load_config(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw ValidationError("config: cannot open '" + path + "'");
  return parse_config(is);
}

namespace detail {

inline std::vector<InequalitySpec> resolve_registry(const RunConfig& c) {
  std::vector<InequalitySpec> reg = default_registry();
  std::set<std::string> known;
  for (const auto& s : reg) known.insert(s.id);
  for (const auto& [id, entry] : c.registry) {
    auto it = std::find_if(reg.begin(), reg.end(), [&](const InequalitySpec& s) { return s.id == id; });
    std::string family = entry.family;
    std::map<std::string, double> exps;
    bool canary = entry.canary;
    if (it != reg.end()) {
      if (!family.empty() && family != it->family)
        throw ValidationError("registry: '" + id + "' cannot change family");
      family = it->family;
      exps = it->e;
      if (!entry.canary_set) canary = it->canary;
    } else if (family.empty()) {
      throw ValidationError("registry: new spec '" + id + "' needs a family");
    } else if (std::find(inequality_families().begin(), inequality_families().end(), family) ==
               inequality_families().end()) {
      throw ValidationError("registry: unknown family '" + family + "'");
    }
    for (const auto& [k, v] : entry.exponents) exps[k] = v;
    if (family == "g50" && entry.exponents.count("q") && !entry.exponents.count("q1"))
      for (const auto& [k, v] : g50_exponents(exps["q"])) exps[k] = v;
    InequalitySpec s = canary ? make_canary(id, family, exps) : make_spec(id, family, exps);
    if (it != reg.end()) *it = s;
    else reg.push_back(s);
  }
  return reg;
}

}  // namespace detail

/// Checks every constraint and resolves ledger configurations and registry
/// specs. Throws ValidationError naming the first violated constraint.
inline void validate(RunConfig& c) {
  using detail::power_of_two;
  require(power_of_two(c.n) && c.n >= 16 && c.n <= 4096, "[model] n must be a power of two in [16, 4096]");
  require(c.length > 0.0 && std::isfinite(c.length), "[model] length must be positive");
  c.params.validate(c.form);
  require(c.run.T > 0.0 && std::isfinite(c.run.T), "[model] T must be positive");
  require(c.run.cfl > 0.0, "[model] cfl must be positive");
  require(c.run.dt >= 0.0 && std::isfinite(c.run.dt), "[model] dt must be non-negative");
  require(c.run.cfl_guard > 0.0, "[model] cfl_guard must be positive");
  require(c.run.cadence >= 0.0 && c.run.cadence <= c.run.T, "[model] cadence must lie in [0, T]");
  if (c.run.cadence > 0.0) {
    const double outs = std::round(c.run.T / c.run.cadence);
    require(outs >= 1.0 && std::abs(outs * c.run.cadence - c.run.T) <= 1e-9 * c.run.T,
            "[model] cadence must divide T");
  }
  require(c.initial.decay >= 0.0, "[initial] decay must be non-negative");
  require(std::isfinite(c.initial.theta_amplitude) && std::isfinite(c.initial.omega_amplitude),
          "[initial] amplitudes must be finite");
  require(c.initial.width > 0.0, "[initial] width must be positive");
  c.initial.seed = c.seed;

  require(c.rho > 0.0 && c.rho < 0.25, "[ledger] rho must lie in (0, 0.25)");
  c.ledger.clear();
  std::set<std::string> ids;
  for (const auto& id : c.ledger_ids) {
    c.ledger.push_back(find_config(id, c.params.alpha, c.rho));
    require(ids.insert(id).second, "[ledger] duplicate configuration '" + id + "'");
  }
  for (const auto& cl : c.ledger_custom) {
    require(cl.p >= 2 && cl.p % 2 == 0, "[ledger] " + cl.id + ": p must be an even integer >= 2");
    require(cl.s >= 0.0 && cl.kappa >= 0.0, "[ledger] " + cl.id + ": s and kappa must be non-negative");
    require(ids.insert(cl.id).second, "[ledger] duplicate configuration '" + cl.id + "'");
    c.ledger.push_back(LedgerConfig{cl.id, cl.s, cl.kappa, cl.p});
  }
  require(!c.ledger.empty(), "[ledger] needs at least one configuration");

  require(c.trials >= 1, "[estimate] trials must be at least 1");
  require(!c.grids.empty(), "[estimate] grids must not be empty");
  for (std::size_t i = 0; i < c.grids.size(); ++i) {
    require(power_of_two(c.grids[i]) && c.grids[i] >= 32 && c.grids[i] <= 1024,
            "[estimate] grids must be powers of two in [32, 1024]");
    require(i == 0 || c.grids[i] > c.grids[i - 1], "[estimate] grids must increase");
  }
  const auto reg = detail::resolve_registry(c);
  c.specs.clear();
  if (c.spec_ids.size() == 1 && c.spec_ids.front() == "all") {
    c.specs = reg;
  } else {
    require(!c.spec_ids.empty(), "[estimate] specs must not be empty");
    for (const auto& id : c.spec_ids) {
      auto it = std::find_if(reg.begin(), reg.end(), [&](const InequalitySpec& s) { return s.id == id; });
      require(it != reg.end(), "[estimate] unknown inequality spec '" + id + "'");
      c.specs.push_back(*it);
    }
  }
}

}  // namespace fbl

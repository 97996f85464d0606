#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "fbl/runner.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Fractional Boussinesq laboratory"};
  app.require_subcommand(1, 1);

  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
  std::optional<std::string> grids;

  for (const char* name : {"simulate", "ledger", "estimate", "selftest"}) {
    CLI::App* sub = app.add_subcommand(name, std::string("run the ") + name + " mode");
    sub->add_option("--config", config_path, "INI configuration file");
    sub->add_option("--seed", seed, "seed, overrides the configuration");
    sub->add_option("--out", out, "output directory, overrides the configuration");
    sub->add_option("--grids", grids, "estimate grids such as \"64,128\"");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? fbl::exit_pass : fbl::exit_validation;
  }

  fbl::RunConfig cfg;
  try {
    if (!config_path.empty()) cfg = fbl::load_config(config_path);
    cfg.mode = fbl::parse_mode(app.get_subcommands().front()->get_name());
    if (seed) cfg.seed = *seed;
    if (out) cfg.out = *out;
    if (grids) cfg.grids = fbl::parse_grids(*grids);
  } catch (const fbl::ValidationError& e) {
    std::cerr << "validation error: " << e.what() << "\n";
    return fbl::exit_validation;
  }
  return fbl::run(cfg, std::cout);
}

// carlab: a finite-dimensional laboratory for quasi-free CAR representations.
// SPDX-License-Identifier: MIT
//
// Command-line driver.  Exit codes: 0 = all checks pass, 1 = a numerical
// check failed, 2 = invalid configuration or command line.

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "carlab/cli.hpp"

namespace {

struct CliArgs {
  std::string config_file;
  std::vector<std::string> sets;
  std::optional<int> L, d, t, boson_cutoff, max_L, max_modes;
  std::optional<std::string> lambdas, output;
  std::optional<double> tolerance;
  bool allow_half = false;
  bool force = false;
};

void attach_options(CLI::App* sub, CliArgs& args) {
  sub->add_option("--config", args.config_file, "read key=value lines from a file first");
  sub->add_option("--set", args.sets, "set one key=value pair (repeatable)");
  sub->add_option("--L", args.L, "lattice positions");
  sub->add_option("--d", args.d, "channels per position");
  sub->add_option("--t", args.t, "shift steps");
  sub->add_option("--lambdas", args.lambdas, "comma-separated symbol values, one per channel");
  sub->add_flag("--allow-half", args.allow_half, "opt in to the degenerate lambda = 1/2 point");
  sub->add_option("--boson-cutoff", args.boson_cutoff, "total-quanta cutoff for ccr-compare");
  sub->add_option("--tolerance", args.tolerance, "solver rtol and default pass threshold");
  sub->add_option("--out", args.output, "write the JSON report to this path");
  sub->add_flag("--force", args.force, "override the intertwiner-size guardrail");
  sub->add_option("--max-L", args.max_L, "configured lattice cap");
  sub->add_option("--max-modes", args.max_modes, "configured total mode cap");
}

carlab::RunConfig build_config(const CliArgs& args) {
  carlab::RunConfig cfg;
  if (!args.config_file.empty()) {
    std::ifstream in(args.config_file);
    if (!in)
      throw carlab::cli::ConfigError("cannot open config file '" + args.config_file + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    cfg = carlab::cli::parse_config(buf.str());
  }
  for (const std::string& kv : args.sets) {
    const size_t eq = kv.find('=');
    if (eq == std::string::npos || eq == 0)
      throw carlab::cli::ConfigError("--set expects key=value, got '" + kv + "'");
    carlab::cli::apply_config_pair(kv.substr(0, eq), kv.substr(eq + 1), cfg, "--set");
  }
  if (args.L) cfg.L = *args.L;
  if (args.d) cfg.d = *args.d;
  if (args.t) cfg.t = *args.t;
  if (args.lambdas) carlab::cli::apply_config_pair("lambdas", *args.lambdas, cfg, "--lambdas");
  if (args.allow_half) cfg.allow_half = true;
  if (args.boson_cutoff) cfg.boson_cutoff = *args.boson_cutoff;
  if (args.tolerance) cfg.tolerance = *args.tolerance;
  if (args.output) cfg.output = *args.output;
  if (args.force) cfg.force = true;
  if (args.max_L) cfg.max_L = *args.max_L;
  if (args.max_modes) cfg.max_modes = *args.max_modes;
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"carlab: a finite-dimensional laboratory for quasi-free CAR representations"};
  app.require_subcommand(1);

  CliArgs args;
  const std::vector<std::pair<std::string, std::string>> commands = {
      {"verify-car", "CAR relations and quasi-free moments for the doubled representation"},
      {"modular-report", "Tomita-Takesaki modular data against the closed forms"},
      {"spd-dims", "intertwiner spaces and the canonical family for the shifted flow"},
      {"obstruction", "relative-commutant vacuum analysis and the extendability verdict"},
      {"ccr-compare", "truncated bosonic companion: Weyl relations and state values"},
      {"all", "run every command on one configuration"},
  };
  for (const auto& [name, desc] : commands) attach_options(app.add_subcommand(name, desc), args);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  const std::string command = app.get_subcommands().front()->get_name();
  carlab::RunConfig cfg;
  try {
    cfg = build_config(args);
  } catch (const carlab::cli::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  }
  return carlab::cli::run_main(command, cfg);
}

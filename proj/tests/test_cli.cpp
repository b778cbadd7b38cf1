// carlab: a finite-dimensional laboratory for quasi-free CAR representations.
// SPDX-License-Identifier: MIT
//
// CLI-layer tests: configuration parsing with line-numbered diagnostics,
// validation of the standing assumptions and guardrails, the command
// pipelines' check lists and verdicts, and the versioned JSON report schema.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <functional>
#include <string>
#include <vector>

#include "carlab/cli.hpp"
#include "json.hpp"

using carlab::Report;
using carlab::RunConfig;
namespace cli = carlab::cli;

namespace {

std::string error_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const cli::ConfigError& e) {
    return e.what();
  }
  return "";
}

bool contains(const std::string& hay, const std::string& needle) {
  return hay.find(needle) != std::string::npos;
}

RunConfig validated(const std::string& command, const std::string& text) {
  RunConfig cfg = cli::parse_config(text);
  cli::validate(cfg, command);
  return cfg;
}

const carlab::CheckResult* find_check(const Report& r, const std::string& name) {
  for (const auto& c : r.checks)
    if (c.name == name) return &c;
  return nullptr;
}

double dim_of(const Report& r, const std::string& name) {
  for (const auto& [k, v] : r.dims)
    if (k == name) return v;
  FAIL(("missing dim " + name));
  return 0.0;
}

}  // namespace

TEST_CASE("parse_config: defaults, assignments, comments, diagnostics") {
  const RunConfig defaults = cli::parse_config("");
  CHECK(defaults.L == 2);
  CHECK(defaults.d == 1);
  CHECK(defaults.t == 1);
  REQUIRE(defaults.lambdas.size() == 1);
  CHECK(defaults.lambdas[0] == 0.3);
  CHECK(defaults.boson_cutoff == 12);
  CHECK(defaults.tolerance == 1e-9);
  CHECK_FALSE(defaults.allow_half);
  CHECK_FALSE(defaults.force);

  const RunConfig cfg = cli::parse_config(
      "# experiment sweep point\n"
      "L=3 d=1\n"
      "t=2  lambdas=0.25,0.25\n"
      "allow_half=false boson_cutoff=16 tolerance=1e-8\n"
      "output=/tmp/report.json force=true max_L=5 max_modes=6\n");
  CHECK(cfg.L == 3);
  CHECK(cfg.t == 2);
  REQUIRE(cfg.lambdas.size() == 2);
  CHECK(cfg.lambdas[1] == 0.25);
  CHECK(cfg.boson_cutoff == 16);
  CHECK(cfg.tolerance == 1e-8);
  CHECK(cfg.output == "/tmp/report.json");
  CHECK(cfg.force);
  CHECK(cfg.max_L == 5);
  CHECK(cfg.max_modes == 6);

  // Diagnostics carry the line number.
  std::string msg = error_of([] { cli::parse_config("L=2\nnonsense\n"); });
  CHECK(contains(msg, "line 2"));
  CHECK(contains(msg, "expected key=value"));
  msg = error_of([] { cli::parse_config("L=2\n\nbogus=1\n"); });
  CHECK(contains(msg, "line 3"));
  CHECK(contains(msg, "unknown configuration key 'bogus'"));
  msg = error_of([] { cli::parse_config("L=two"); });
  CHECK(contains(msg, "line 1"));
}

TEST_CASE("apply_config_pair: value parsing and the where prefix") {
  RunConfig cfg;
  cli::apply_config_pair("lambdas", "0.1,0.2,0.3", cfg);
  REQUIRE(cfg.lambdas.size() == 3);
  CHECK(cfg.lambdas[2] == 0.3);
  cli::apply_config_pair("allow_half", "yes", cfg);
  CHECK(cfg.allow_half);
  cli::apply_config_pair("allow_half", "0", cfg);
  CHECK_FALSE(cfg.allow_half);

  std::string msg =
      error_of([&] { cli::apply_config_pair("bogus", "1", cfg, "--set"); });
  CHECK(contains(msg, "--set"));
  CHECK(contains(msg, "unknown configuration key"));
  msg = error_of([&] { cli::apply_config_pair("L", "2x", cfg); });
  CHECK_FALSE(msg.empty());
  msg = error_of([&] { cli::apply_config_pair("lambdas", "", cfg); });
  CHECK(contains(msg, "empty lambda list"));
  msg = error_of([&] { cli::apply_config_pair("allow_half", "maybe", cfg); });
  CHECK_FALSE(msg.empty());
}

TEST_CASE("validate: broadcast, assumptions, guardrails") {
  // A single lambda broadcasts across channels.
  RunConfig cfg = cli::parse_config("L=2 d=2 lambdas=0.3 max_modes=6");
  cli::validate(cfg, "verify-car");
  REQUIRE(cfg.lambdas.size() == 2);
  CHECK(cfg.lambdas[1] == 0.3);

  // Wrong lambda count.
  std::string msg = error_of([] { validated("verify-car", "d=2 lambdas=0.1,0.2,0.3 max_modes=6"); });
  CHECK(contains(msg, "lambdas must have 1 or d = 2 entries"));

  // Range and the lambda = 1/2 standing assumption.
  msg = error_of([] { validated("verify-car", "lambdas=1.5"); });
  CHECK(contains(msg, "out of range"));
  msg = error_of([] { validated("obstruction", "lambdas=0.5"); });
  CHECK(contains(msg, "allow_half"));
  CHECK(contains(msg, "standing assumption"));
  CHECK_NOTHROW(validated("obstruction", "lambdas=0.5 allow_half=true"));

  // Shift-step ranges.
  msg = error_of([] { validated("verify-car", "t=3 L=2"); });
  CHECK(contains(msg, "1 <= t <= L"));
  msg = error_of([] { validated("spd-dims", "t=2 L=2"); });
  CHECK(contains(msg, "must be < L"));
  CHECK_NOTHROW(validated("verify-car", "t=2 L=2"));  // t = L is fine off the solver paths

  // Lattice caps.
  msg = error_of([] { validated("verify-car", "L=9"); });
  CHECK(contains(msg, "exceeds max_L"));
  msg = error_of([] { validated("verify-car", "L=6 d=1 max_L=6"); });
  CHECK(contains(msg, "exceeds max_modes"));

  // Intertwiner-size guardrail: 16^4 unknowns need force.
  msg = error_of([] { validated("spd-dims", "L=4 d=1 t=1 max_modes=6"); });
  CHECK(contains(msg, "force"));
  CHECK_NOTHROW(validated("spd-dims", "L=4 d=1 t=1 max_modes=6 force=true"));

  // Boson-dimension guardrail.
  msg = error_of([] { validated("ccr-compare", "d=3 L=1 boson_cutoff=12 max_modes=6"); });
  CHECK(contains(msg, "exceeds 64"));

  // Misc ranges and the command whitelist.
  msg = error_of([] { validated("verify-car", "tolerance=0.5"); });
  CHECK(contains(msg, "tolerance"));
  msg = error_of([] { validated("verify-car", "boson_cutoff=0"); });
  CHECK(contains(msg, "boson_cutoff"));
  msg = error_of([] { validated("frobnicate", ""); });
  CHECK(contains(msg, "unknown command"));
}

TEST_CASE("verify-car pipeline: all checks pass at the default point") {
  const RunConfig cfg = validated("verify-car", "");
  const Report r = cli::run_command("verify-car", cfg);
  CHECK(r.command == "verify-car");
  CHECK_FALSE(r.any_fail());
  CHECK(r.exit_code() == 0);
  for (const char* name : {"car-anticommutation-flow", "car-anticommutation-commutant",
                           "car-mixed-commutation", "quasifree-moments"}) {
    const auto* c = find_check(r, name);
    REQUIRE(c != nullptr);
    CHECK(c->status == "pass");
  }
  CHECK(dim_of(r, "n_modes") == 2);
  CHECK(dim_of(r, "doubled_dim") == 16);
}

TEST_CASE("modular-report pipeline: closed forms and conjugation checks") {
  const Report r = cli::run_command("modular-report", validated("modular-report", ""));
  CHECK_FALSE(r.any_fail());
  for (const char* name :
       {"modular-S-closed-form", "modular-Delta-positive", "modular-polar-decomposition",
        "modular-JDeltaJ-inverse", "modular-conjugation-a", "modular-commutant-commutation"}) {
    const auto* c = find_check(r, name);
    REQUIRE(c != nullptr);
    CHECK(c->status == "pass");
  }
}

TEST_CASE("spd-dims pipeline: predicted even dimension at (2,1,1)") {
  const Report r = cli::run_command("spd-dims", validated("spd-dims", ""));
  CHECK_FALSE(r.any_fail());
  CHECK(dim_of(r, "dim_H_compressed_even") == 2);
  CHECK(dim_of(r, "predicted_even") == 2);
  CHECK(dim_of(r, "dim_E_flow") == 64);
  const auto* even = find_check(r, "spd-even-dim-matches-prediction");
  REQUIRE(even != nullptr);
  CHECK(even->status == "pass");
  const auto* ungraded = find_check(r, "spd-ungraded-compressed-dim");
  REQUIRE(ungraded != nullptr);
  CHECK(ungraded->status == "report-only");
}

TEST_CASE("obstruction pipeline: verdict and graded/ungraded split") {
  const Report r = cli::run_command("obstruction", validated("obstruction", ""));
  CHECK_FALSE(r.any_fail());
  CHECK(r.verdict == "obstruction present");
  const auto* overlap = find_check(r, "obstruction-orthogonality-even");
  REQUIRE(overlap != nullptr);
  CHECK(overlap->status == "pass");
  CHECK(dim_of(r, "relcomm_dim_ungraded") == 4);
  CHECK(dim_of(r, "relcomm_dim_even") == 2);
  CHECK(dim_of(r, "max_overlap_ungraded") > 0.5);

  // The lambda = 1/2 probe point demotes the forcing hypotheses to
  // report-only and declares the analysis vacuous.
  const Report half =
      cli::run_command("obstruction", validated("obstruction", "lambdas=0.5 allow_half=true"));
  CHECK_FALSE(half.any_fail());
  CHECK(half.verdict == "obstruction analysis vacuous at lambda = 1/2");
  const auto* u = find_check(half, "obstruction-u-buckets-vanish");
  REQUIRE(u != nullptr);
  CHECK(u->status == "report-only");
  CHECK(contains(u->detail, "suspended"));
  const auto* vac = find_check(half, "obstruction-half-lambda-vacuous");
  REQUIRE(vac != nullptr);
  CHECK(vac->status == "pass");
}

TEST_CASE("ccr-compare pipeline passes at the default point") {
  const Report r = cli::run_command("ccr-compare", validated("ccr-compare", ""));
  CHECK_FALSE(r.any_fail());
  for (const char* name : {"ccr-commutator", "ccr-weyl-relation-phase", "ccr-state-squared",
                           "ccr-state-unsquared-rejected", "ccr-tail-monotone"}) {
    const auto* c = find_check(r, name);
    REQUIRE(c != nullptr);
    CHECK(c->status == "pass");
  }
}

TEST_CASE("json report schema and determinism") {
  const RunConfig cfg = validated("verify-car", "L=2 d=1 t=1 lambdas=0.35");
  const Report r = cli::run_command("verify-car", cfg);
  const std::string text = r.to_json();
  const auto j = nlohmann::json::parse(text);

  CHECK(j.at("schema_version").get<std::string>() == std::string(carlab::kSchemaVersion));
  CHECK(j.at("command").get<std::string>() == "verify-car");
  CHECK(j.at("verdict").is_string());
  const auto& jc = j.at("config");
  CHECK(jc.at("L").get<int>() == 2);
  CHECK(jc.at("lambdas").size() == 1);
  CHECK(jc.at("lambdas")[0].get<double>() == 0.35);
  REQUIRE(j.at("checks").is_array());
  REQUIRE(j.at("checks").size() == r.checks.size());
  for (const auto& c : j.at("checks")) {
    CHECK(c.contains("name"));
    CHECK(c.contains("status"));
    CHECK(c.contains("max_error"));
  }
  CHECK(j.at("dims").is_object());
  CHECK(j.at("dims").contains("fock_dim"));

  // Deterministic for a fixed config: a second run serializes identically.
  const Report r2 = cli::run_command("verify-car", cfg);
  CHECK(r2.to_json() == text);

  // The human-readable table mentions every check name.
  const std::string table = r.to_table();
  for (const auto& c : r.checks) CHECK(contains(table, c.name));

  // Exit-code semantics follow the statuses.
  Report failing = r;
  failing.checks.push_back(carlab::CheckResult::make("synthetic-failure", false, 1.0));
  CHECK(failing.any_fail());
  CHECK(failing.exit_code() == 1);
  Report reporting = r;
  reporting.checks.push_back(carlab::CheckResult::info("synthetic-info", 2.0));
  CHECK_FALSE(reporting.any_fail());
}

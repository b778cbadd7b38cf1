// carlab: a finite-dimensional laboratory for quasi-free CAR representations.
// SPDX-License-Identifier: MIT
//
// Configuration parsing, validation and experiment orchestration.
//
// Commands: verify-car, modular-report, spd-dims, obstruction, ccr-compare,
// all.  Exit codes: 0 = all checks pass, 1 = a numerical check failed,
// 2 = invalid configuration.

#pragma once

#include <stdexcept>
#include <string>

#include "carlab/report.hpp"

namespace carlab::cli {

// Invalid configuration or command (exit code 2).
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Apply one key=value assignment.  Known keys: L, d, t, lambdas (comma
// separated), allow_half, boson_cutoff, tolerance, output, force, max_L,
// max_modes.  Unknown keys and malformed values throw ConfigError; `where`
// prefixes the diagnostic (e.g. "line 3").
void apply_config_pair(const std::string& key, const std::string& value, RunConfig& cfg,
                       const std::string& where = "");

// Parse whitespace-separated key=value text (one or more per line); empty
// input leaves the defaults (L=2, d=1, t=1, lambdas=0.3, N=12, tol=1e-9).
RunConfig parse_config(const std::string& text);

// Validate ranges, the lambda assumptions, and the per-command guardrails;
// broadcasts a single lambda across channels.  Throws ConfigError.
void validate(RunConfig& cfg, const std::string& command);

// Run one command (assumes a validated config).
Report run_command(const std::string& command, const RunConfig& cfg);

// Validate + run + emit (human table to stdout, JSON to cfg.output if set).
// Returns the process exit code (0/1/2).
int run_main(const std::string& command, RunConfig cfg);

}  // namespace carlab::cli

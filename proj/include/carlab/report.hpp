// carlab: a finite-dimensional laboratory for quasi-free CAR representations.
// SPDX-License-Identifier: MIT
//
// Run configuration and machine-readable reports for the CLI driver.

#pragma once

#include <string>
#include <utility>
#include <vector>

namespace carlab {

inline constexpr const char* kSchemaVersion = "1.0";

struct RunConfig {
  int L = 2;  // lattice positions
  int d = 1;  // channels per position
  int t = 1;  // shift steps
  std::vector<double> lambdas = {0.3};  // one per channel (a single value broadcasts)
  bool allow_half = false;              // opt-in for lambda = 1/2
  int boson_cutoff = 12;                // N for the CCR companion
  double tolerance = 1e-9;              // solver rtol and default pass threshold
  std::string output;                   // JSON report path ("" = don't write)
  bool force = false;                   // override the intertwiner-size guardrail
  int max_L = 4;                        // configured lattice cap
  int max_modes = 5;                    // configured total fermion mode cap

  int n_modes() const { return L * d; }
};

struct CheckResult {
  std::string name;
  std::string status;  // "pass" | "fail" | "report-only"
  double max_error = 0.0;
  std::string detail;

  static CheckResult make(std::string name, bool ok, double err, std::string detail = "") {
    return {std::move(name), ok ? "pass" : "fail", err, std::move(detail)};
  }
  static CheckResult info(std::string name, double value, std::string detail = "") {
    return {std::move(name), "report-only", value, std::move(detail)};
  }
};

struct Report {
  std::string command;
  RunConfig config;
  std::vector<CheckResult> checks;
  std::vector<std::pair<std::string, double>> dims;  // insertion-ordered
  std::string verdict = "n/a";

  void add_dim(const std::string& name, double value) { dims.emplace_back(name, value); }
  bool any_fail() const;
  int exit_code() const { return any_fail() ? 1 : 0; }

  std::string to_json() const;   // {schema_version, command, config, checks[], dims{}, verdict}
  std::string to_table() const;  // human-readable summary
};

}  // namespace carlab

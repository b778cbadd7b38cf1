// carlab: a finite-dimensional laboratory for quasi-free CAR representations.
// SPDX-License-Identifier: MIT

#include "carlab/report.hpp"

#include <algorithm>
#include <cstdio>
#include <sstream>

#include "json.hpp"

namespace carlab {

bool Report::any_fail() const {
  for (const CheckResult& c : checks)
    if (c.status == "fail") return true;
  return false;
}

std::string Report::to_json() const {
  nlohmann::json j;
  j["schema_version"] = kSchemaVersion;
  j["command"] = command;
  j["config"] = {
      {"L", config.L},
      {"d", config.d},
      {"t", config.t},
      {"lambdas", config.lambdas},
      {"allow_half", config.allow_half},
      {"boson_cutoff", config.boson_cutoff},
      {"tolerance", config.tolerance},
      {"force", config.force},
      {"max_L", config.max_L},
      {"max_modes", config.max_modes},
  };
  j["checks"] = nlohmann::json::array();
  for (const CheckResult& c : checks) {
    nlohmann::json jc = {{"name", c.name}, {"status", c.status}, {"max_error", c.max_error}};
    if (!c.detail.empty()) jc["detail"] = c.detail;
    j["checks"].push_back(jc);
  }
  j["dims"] = nlohmann::json::object();
  for (const auto& [name, value] : dims) j["dims"][name] = value;
  j["verdict"] = verdict;
  return j.dump(2) + "\n";
}

std::string Report::to_table() const {
  std::ostringstream os;
  os << "command: " << command << "\n";
  os << "config:  L=" << config.L << " d=" << config.d << " t=" << config.t << " lambdas=";
  for (std::size_t i = 0; i < config.lambdas.size(); ++i)
    os << (i ? "," : "") << config.lambdas[i];
  os << " N=" << config.boson_cutoff << " tol=" << config.tolerance << "\n\n";

  std::size_t width = 4;
  for (const CheckResult& c : checks) width = std::max(width, c.name.size());
  for (const CheckResult& c : checks) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.3e", c.max_error);
    os << "  " << c.name << std::string(width - c.name.size() + 2, ' ')
       << (c.status == "pass"          ? "PASS       "
           : c.status == "report-only" ? "REPORT-ONLY"
                                       : "FAIL       ")
       << "  " << buf;
    if (!c.detail.empty()) os << "  (" << c.detail << ")";
    os << "\n";
  }
  if (!dims.empty()) {
    os << "\ndimensions:\n";
    for (const auto& [name, value] : dims) {
      os << "  " << name << " = ";
      if (value == static_cast<long long>(value))
        os << static_cast<long long>(value);
      else
        os << value;
      os << "\n";
    }
  }
  os << "\nverdict: " << verdict << "\n";
  return os.str();
}

}  // namespace carlab

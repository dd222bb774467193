#pragma once

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "davies/config.hpp"

namespace davies::cli {

struct CheckResult {
  std::string name;
  std::string analytic_hash;
  std::string oracle_hash;
  double distance = 0.0;
  double tolerance = 0.0;
  bool pass = false;
  // Informational checks are reported but do not affect the exit code.
  bool informational = false;
  std::string note;
};

// Analytic maps against the kernel oracle for the configured model.
std::vector<CheckResult> verification_battery(const RunConfig& c);

nlohmann::json to_json(const CheckResult& r);

}  // namespace davies::cli

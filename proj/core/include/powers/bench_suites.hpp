#pragma once

#include <string>
#include <vector>

namespace powers {

/// One verification suite outcome: every threshold is pinned in code and
/// the detail line carries the measured values.
struct SuiteResult {
  std::string suite;
  bool pass = false;
  std::string detail;
  double seconds = 0.0;
};

/// Names in canonical execution order.
std::vector<std::string> suite_names();

/// Runs one suite; throws Error for unknown names.
SuiteResult run_suite(const std::string& name);

/// Runs "all" or a single named suite.
std::vector<SuiteResult> run_suites(const std::string& which);

}  // namespace powers

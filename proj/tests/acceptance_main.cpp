// Acceptance gate: runs every verification suite at its pinned
// thresholds and prints one pass/fail line per criterion.

#include <cstdio>

#include "powers/bench_suites.hpp"

int main() {
  const std::vector<std::string> names = powers::suite_names();
  int failures = 0;
  for (std::size_t i = 0; i < names.size(); ++i) {
    powers::SuiteResult r = powers::run_suite(names[i]);
    std::printf("[%s] criterion-%zu %s (%.1f s): %s\n", r.pass ? "PASS" : "FAIL", i + 1, r.suite.c_str(),
                r.seconds, r.detail.c_str());
    std::fflush(stdout);
    if (!r.pass) ++failures;
  }
  if (failures == 0) {
    std::printf("all %zu criteria passed\n", names.size());
  } else {
    std::printf("%d criteria FAILED\n", failures);
  }
  return failures == 0 ? 0 : 1;
}

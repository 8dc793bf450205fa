// Runs every acceptance check, printing one PASS/FAIL line per check.
// Optional arguments restrict the run to the named check keys.

#include <iostream>

#include "qlc/acceptance.hpp"

int main(int argc, char** argv) {
  qlc::SuiteOptions options;
  for (int i = 1; i < argc; ++i) options.only.emplace_back(argv[i]);
  int failed = 0;
  try {
    qlc::run_acceptance(options, [&](const qlc::CheckResult& r) {
      std::cout << qlc::format_result(r) << std::flush;
      if (!r.passed()) ++failed;
    });
  } catch (const std::exception& e) {
    std::cerr << "acceptance: " << e.what() << '\n';
    return 2;
  }
  std::cout << (failed == 0 ? "all acceptance checks passed" : std::to_string(failed) + " acceptance check(s) failed")
            << '\n';
  return failed == 0 ? 0 : 1;
}

#pragma once

// End-to-end acceptance checks shared by the test binary and `qlc verify`.

#include <functional>
#include <string>
#include <vector>

namespace qlc {

struct Metric {
  std::string name;
  double value;
  double lo;  // passes when lo <= value <= hi (strict on the finite side(s) named by `strict`)
  double hi;
  bool strict;
  bool passed;
};

struct CheckResult {
  int id = 0;
  std::string key;
  std::string title;
  std::vector<Metric> metrics;
  std::vector<std::string> notes;
  double seconds = 0.0;
  std::string error;  // set when the check threw
  bool passed() const;
};

struct SuiteOptions {
  std::vector<std::string> only;  // keys; empty runs everything
  bool mutate_circulation = false;  // flips the vacuum term of the steady circulation formula
};

struct CheckInfo {
  int id;
  std::string key;
  std::string title;
};
const std::vector<CheckInfo>& acceptance_checks();

std::vector<CheckResult> run_acceptance(const SuiteOptions& options,
                                        const std::function<void(const CheckResult&)>& on_result = {});

// "[PASS] 7 detailed-balance: ..." plus indented metric lines.
std::string format_result(const CheckResult& r);

}  // namespace qlc

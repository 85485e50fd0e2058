#pragma once

#include <string>
#include <vector>

namespace tomokernel {

struct CheckResult {
  std::string suite;
  std::string name;
  double error = 0.0;
  double tolerance = 0.0;
  bool passed = false;
};

struct VerifyOptions {
  // Multiplies every Hilbert transform taken by the checks. Anything but +1
  // is a deliberate defect used to confirm the suite detects it.
  double hilbert_sign = 1.0;
};

// suite: "all", "transforms", "kernels" or "reconstruction".
// Throws std::invalid_argument for any other name.
std::vector<CheckResult> run_verification(const std::string& suite, const VerifyOptions& opts = {});

bool all_passed(const std::vector<CheckResult>& results);

// {"passed": bool, "checks": [{"suite", "name", "error", "tolerance", "passed"}]}
std::string verification_report_json(const std::vector<CheckResult>& results);

}  // namespace tomokernel

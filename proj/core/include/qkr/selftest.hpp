#pragma once

#include <string>
#include <vector>

namespace qkr {

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

/// Fast run of the library's numerical invariants: Bessel sum rules, band
/// unitarity, the q = 1 / q = 3 commutation dichotomy, closed-form vs dense
/// agreement and the channel's trace/Hermiticity/positivity/purity checks.
/// Finishes in a few seconds.
std::vector<CheckResult> run_selftest();

}  // namespace qkr

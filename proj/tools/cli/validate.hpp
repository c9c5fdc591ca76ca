#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace wsndet::cli {

struct CheckResult {
  std::string name;
  bool passed;
  double worst;      // largest observed error
  double tolerance;
  std::string detail;
};

/// Invariant checks by exhaustive enumeration over small random scenes.
std::vector<CheckResult> run_validation(std::uint64_t seed);

}  // namespace wsndet::cli

#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace cdqvi {

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

/// Quick runtime property checks on seeded random instances: FB zero set,
/// duality identity, analytic derivatives against finite differences,
/// solver against the KKT oracle, instance file round trip.
std::vector<CheckResult> run_self_check(std::uint64_t seed);

}  // namespace cdqvi

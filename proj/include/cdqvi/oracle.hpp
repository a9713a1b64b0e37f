#pragma once

#include "cdqvi/aqvi.hpp"

#include <cstdint>
#include <vector>

namespace cdqvi {

struct KktPoint {
  Vec tau;
  Vec lambda;
  std::uint32_t active_set = 0;  // bit i set when constraint i is in the active set
  double residual = 0.0;         // |Y(tau, lambda)|_inf
};

/// Largest constraint count accepted by enumerate_kkt (2^m subsets).
inline constexpr std::size_t kOracleMaxConstraints = 20;

/// Brute-force KKT enumeration. For each subset S of constraints solves
///   D tau + A_S^T lambda_S = -e,  (A + B)_S tau = c_S
/// in the minimum-norm least-squares sense, sets lambda = 0 off S, and keeps
/// points with lambda >= -tol, g(tau) <= tol and |Y|_inf <= 1e-10. Points
/// within 1e-8 of an earlier one (in subset order) are dropped. Output is
/// sorted by active-set bitmask. Throws Error(Capability) when m > 20.
std::vector<KktPoint> enumerate_kkt(const AqviInstance& inst, double tol = 1e-9);

}  // namespace cdqvi

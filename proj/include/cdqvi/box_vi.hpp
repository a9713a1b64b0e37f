#pragma once

#include "cdqvi/aqvi.hpp"

#include <functional>
#include <string_view>

namespace cdqvi {

/// Mixed complementarity problem over a box that is only bounded below:
/// find z >= lower with H_i(z) = 0 where lower_i = -inf and
/// 0 <= z_i - lower_i  _|_  H_i(z) >= 0 otherwise.
struct BoxVi {
  std::function<Vec(const Vec&)> op;
  std::function<Mat(const Vec&)> jacobian;
  Vec lower;

  Eigen::Index dim() const noexcept { return lower.size(); }
};

enum class InnerStatus { Converged, MaxIter, Stalled };

std::string_view to_string(InnerStatus s) noexcept;

struct InnerResult {
  Vec z;
  double residual = 0.0;  // max-norm of mcp_residual at z
  int iterations = 0;     // Newton-type iterations
  int linesearch_steps = 0;
  int fallback_steps = 0;  // projected-gradient steps
  int op_evals = 0;
  int jac_evals = 0;
  InnerStatus status = InnerStatus::MaxIter;
};

struct InnerOptions {
  double tol = 1e-3;
  int max_iter = 200;
};

/// r_i = H_i(z) on free components, fb(z_i - lower_i, H_i(z)) on bounded ones.
Vec mcp_residual(const BoxVi& vi, const Vec& z);
Vec mcp_residual(const Vec& lower, const Vec& z, const Vec& h);

/// Projected semismooth Newton on the FB reformulation of the MCP with
/// Levenberg-Marquardt regularisation for ill-conditioned Jacobians, Armijo
/// backtracking on 1/2 |r|^2 and a projected-gradient fallback. Iterates are
/// kept inside the box, so H and JH are only evaluated at feasible points.
InnerResult solve_box_vi(const BoxVi& vi, const Vec& z0, const InnerOptions& opts);

}  // namespace cdqvi

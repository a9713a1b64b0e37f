#pragma once

#include "cdqvi/aqvi.hpp"
#include "cdqvi/box_vi.hpp"
#include "cdqvi/contact.hpp"

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace cdqvi {

/// Parameters of the outer shrinking-box loop. Smoothing follows
/// eps^{k+1} = 10^{-(k+1)} eps^k and the box relaxation delta^{k+1} = gamma delta^k.
struct SolverParams {
  double eps0 = 1e-4;
  double delta0 = 0.1;
  double gamma = 0.1;
  double outer_tol = 1e-4;  // on |Y|_inf
  int max_outer = 20;
  double inner_tol0 = 1e-3;  // scaled by min(1, eps^k / eps^0)
  int inner_max_iter = 200;
  double eps_floor = 1e-300;
  /// Failure when |Y|_inf decreased by less than this fraction over
  /// stagnation_window outer iterations.
  double stagnation_decrease = 1e-3;
  int stagnation_window = 3;

  /// Throws Error(Usage) when a field is out of range.
  void validate() const;
};

enum class SolveStatus { Solved, Failure };

std::string_view to_string(SolveStatus s) noexcept;

struct SolveReport {
  std::string problem;
  double phi = 0.0;
  int outer_iterations = 0;  // number of inner VIs solved
  int inner_newton = 0;
  int inner_linesearch = 0;
  int inner_fallback = 0;
  int h_evals = 0;
  int jh_evals = 0;
  double wall_time = 0.0;  // seconds
  double final_residual = 0.0;
  SolveStatus status = SolveStatus::Failure;
  std::string failure_reason;
  PrimalDualPoint solution;
  std::vector<double> eps_history;    // eps^k used by inner solve k
  std::vector<double> delta_history;  // delta^k used by inner solve k
  std::vector<double> residual_history;  // |Y|_inf before each S.1 test
  std::vector<InnerStatus> inner_statuses;
};

/// Runs the outer loop from `start` (all zeros when empty).
SolveReport solve_aqvi(const AqviInstance& inst, const SolverParams& params,
                       const std::optional<PrimalDualPoint>& start = std::nullopt);

/// solve_aqvi plus problem id and friction coefficient filled into the report.
SolveReport solve_problem(const ContactProblem& problem, const SolverParams& params,
                          std::string problem_id,
                          const std::optional<PrimalDualPoint>& start = std::nullopt);

struct NamedProblem {
  std::string id;
  ContactProblem problem;
};

/// One report per (problem, phi) in input order; the constraint matrices are
/// rebuilt for each phi. Up to `jobs` solves run concurrently.
std::vector<SolveReport> sweep(const std::vector<NamedProblem>& problems,
                               const std::vector<double>& phis, const SolverParams& params,
                               int jobs = 1);

/// The friction coefficients 1e-3, 1e-2, ..., 1e5.
std::vector<double> default_phi_grid();

}  // namespace cdqvi

#include "cdqvi/solver.hpp"

#include "cdqvi/canonical_dual.hpp"
#include "cdqvi/error.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <limits>
#include <mutex>
#include <thread>

namespace cdqvi {

std::string_view to_string(SolveStatus s) noexcept {
  return s == SolveStatus::Solved ? "solved" : "failure";
}

void SolverParams::validate() const {
  require(eps0 > 0.0 && std::isfinite(eps0), ErrorKind::Usage, "eps0 must be positive");
  require(delta0 > 0.0 && std::isfinite(delta0), ErrorKind::Usage, "delta0 must be positive");
  require(gamma > 0.0 && gamma < 1.0, ErrorKind::Usage, "gamma must lie in (0, 1)");
  require(outer_tol > 0.0, ErrorKind::Usage, "outer tolerance must be positive");
  require(max_outer >= 0, ErrorKind::Usage, "max_outer must be nonnegative");
  require(inner_tol0 > 0.0, ErrorKind::Usage, "inner tolerance must be positive");
  require(inner_max_iter >= 1, ErrorKind::Usage, "inner iteration cap must be positive");
  require(eps_floor > 0.0 && eps_floor < eps0, ErrorKind::Usage, "eps floor must lie in (0, eps0)");
  require(stagnation_decrease >= 0.0 && stagnation_decrease < 1.0, ErrorKind::Usage,
          "stagnation decrease must lie in [0, 1)");
  require(stagnation_window >= 1, ErrorKind::Usage, "stagnation window must be positive");
}

SolveReport solve_aqvi(const AqviInstance& inst, const SolverParams& params,
                       const std::optional<PrimalDualPoint>& start) {
  params.validate();
  const auto n = static_cast<Eigen::Index>(inst.n());
  const auto m = static_cast<Eigen::Index>(inst.m());

  PrimalDualPoint x = start.value_or(PrimalDualPoint::zeros(inst));
  require(x.tau.size() == n && x.lambda.size() == m && x.sigma.size() == m, ErrorKind::Usage,
          "start point dimensions do not match the instance");

  const auto t0 = std::chrono::steady_clock::now();
  SolveReport rep;

  double eps = params.eps0;
  double delta = params.delta0;
  int stalled_in_a_row = 0;

  Vec lower(n + 2 * m);
  lower.head(n + m).setConstant(-std::numeric_limits<double>::infinity());

  for (int k = 0;; ++k) {
    const double y = kkt_residual(inst, x.tau, x.lambda).lpNorm<Eigen::Infinity>();
    rep.residual_history.push_back(y);
    rep.final_residual = y;

    if (y <= params.outer_tol) {
      rep.status = SolveStatus::Solved;
      break;
    }
    if (stalled_in_a_row >= 2) {
      rep.failure_reason = "inner solver stalled twice in a row";
      break;
    }
    const auto w = static_cast<std::size_t>(params.stagnation_window);
    if (rep.residual_history.size() > w) {
      const double before = rep.residual_history[rep.residual_history.size() - 1 - w];
      if (!(y < (1.0 - params.stagnation_decrease) * before)) {
        rep.failure_reason = "KKT residual stagnated";
        break;
      }
    }
    if (k >= params.max_outer) {
      rep.failure_reason = "outer iteration limit reached";
      break;
    }

    rep.eps_history.push_back(eps);
    rep.delta_history.push_back(delta);

    const double eps_k = eps;
    lower.tail(m).setConstant(-delta);
    BoxVi vi{[&inst, eps_k](const Vec& z) { return h_eps(inst, z, eps_k); },
             [&inst, eps_k](const Vec& z) { return jh_eps(inst, z, eps_k); }, lower};

    InnerOptions opts;
    opts.tol = params.inner_tol0 * std::min(1.0, eps / params.eps0);
    opts.max_iter = params.inner_max_iter;
    const InnerResult inner = solve_box_vi(vi, pack(x.tau, x.lambda, Vec::Zero(m)), opts);

    ++rep.outer_iterations;
    rep.inner_newton += inner.iterations;
    rep.inner_linesearch += inner.linesearch_steps;
    rep.inner_fallback += inner.fallback_steps;
    rep.h_evals += inner.op_evals;
    rep.jh_evals += inner.jac_evals;
    rep.inner_statuses.push_back(inner.status);
    stalled_in_a_row = inner.status == InnerStatus::Stalled ? stalled_in_a_row + 1 : 0;

    x = unpack(inst, inner.z);
    delta *= params.gamma;
    eps = std::max(eps * std::pow(10.0, -(k + 1)), params.eps_floor);
  }

  rep.solution = std::move(x);
  rep.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return rep;
}

SolveReport solve_problem(const ContactProblem& problem, const SolverParams& params,
                          std::string problem_id, const std::optional<PrimalDualPoint>& start) {
  SolveReport rep = solve_aqvi(problem.instance, params, start);
  rep.problem = std::move(problem_id);
  rep.phi = problem.phi;
  return rep;
}

std::vector<SolveReport> sweep(const std::vector<NamedProblem>& problems,
                               const std::vector<double>& phis, const SolverParams& params,
                               int jobs) {
  params.validate();
  require(jobs >= 1, ErrorKind::Usage, "jobs must be positive");
  const std::size_t total = problems.size() * phis.size();
  std::vector<SolveReport> out(total);
  if (total == 0) return out;

  auto run = [&](std::size_t idx) {
    const auto& named = problems[idx / phis.size()];
    const double phi = phis[idx % phis.size()];
    out[idx] = solve_problem(named.problem.with_phi(phi), params, named.id);
  };

  const auto workers = std::min<std::size_t>(static_cast<std::size_t>(jobs), total);
  if (workers == 1) {
    for (std::size_t i = 0; i < total; ++i) run(i);
    return out;
  }

  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::atomic<bool> failed{false};
  std::vector<std::jthread> pool;
  pool.reserve(workers);
  std::mutex err_mutex;
  for (std::size_t t = 0; t < workers; ++t) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < total && !failed; i = next++) {
        try {
          run(i);
        } catch (...) {
          std::lock_guard lock(err_mutex);
          if (!failure) failure = std::current_exception();
          failed = true;
        }
      }
    });
  }
  pool.clear();
  if (failure) std::rethrow_exception(failure);
  return out;
}

std::vector<double> default_phi_grid() {
  return {1e-3, 1e-2, 1e-1, 1e0, 1e1, 1e2, 1e3, 1e4, 1e5};
}

}  // namespace cdqvi

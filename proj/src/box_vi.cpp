#include "cdqvi/box_vi.hpp"

#include "cdqvi/error.hpp"

#include <cmath>
#include <limits>

namespace cdqvi {

std::string_view to_string(InnerStatus s) noexcept {
  switch (s) {
    case InnerStatus::Converged: return "converged";
    case InnerStatus::MaxIter: return "max_iter";
    case InnerStatus::Stalled: return "stalled";
  }
  return "unknown";
}

Vec mcp_residual(const Vec& lower, const Vec& z, const Vec& h) {
  Vec r(z.size());
  for (Eigen::Index i = 0; i < z.size(); ++i)
    r(i) = std::isfinite(lower(i)) ? fb(z(i) - lower(i), h(i)) : h(i);
  return r;
}

Vec mcp_residual(const BoxVi& vi, const Vec& z) {
  require(z.size() == vi.dim(), ErrorKind::Usage, "point has wrong dimension");
  return mcp_residual(vi.lower, z, vi.op(z));
}

namespace {

constexpr double kArmijo = 1e-4;
constexpr double kDescentRho = 1e-10;
constexpr double kDescentPow = 2.1;
constexpr double kStallDecrease = 1e-16;
constexpr int kStallWindow = 10;
constexpr int kMaxBacktracks = 40;
constexpr int kMaxGradientBacktracks = 60;

// Element of the generalized Jacobian of the residual map.
Mat residual_jacobian(const Vec& lower, const Vec& z, const Vec& h, const Mat& jh) {
  Mat jr = jh;
  for (Eigen::Index i = 0; i < z.size(); ++i) {
    if (!std::isfinite(lower(i))) continue;
    const double a = z(i) - lower(i);
    const double b = h(i);
    const double r = std::hypot(a, b);
    const double da = (r > 0.0 ? a / r : M_SQRT1_2) - 1.0;
    const double db = (r > 0.0 ? b / r : M_SQRT1_2) - 1.0;
    jr.row(i) *= db;
    jr(i, i) += da;
  }
  return jr;
}

Vec project(const Vec& lower, Vec z) {
  for (Eigen::Index i = 0; i < z.size(); ++i)
    if (z(i) < lower(i)) z(i) = lower(i);
  return z;
}

struct Trial {
  Vec z;
  Vec h;
  Vec r;
  double psi;
};

}  // namespace

InnerResult solve_box_vi(const BoxVi& vi, const Vec& z0, const InnerOptions& opts) {
  require(opts.tol > 0.0, ErrorKind::Usage, "inner tolerance must be positive");
  require(opts.max_iter >= 0, ErrorKind::Usage, "inner iteration cap must be nonnegative");
  require(z0.size() == vi.dim(), ErrorKind::Usage, "start point has wrong dimension");
  require(z0.allFinite(), ErrorKind::Usage, "start point must be finite");

  InnerResult res;
  auto evaluate = [&](Vec z) {
    Trial t;
    t.h = vi.op(z);
    ++res.op_evals;
    t.r = mcp_residual(vi.lower, z, t.h);
    t.psi = 0.5 * t.r.squaredNorm();
    t.z = std::move(z);
    return t;
  };

  Trial cur = evaluate(project(vi.lower, z0));
  int stall = 0;

  auto finish = [&](InnerStatus status) {
    res.z = cur.z;
    res.residual = cur.r.lpNorm<Eigen::Infinity>();
    res.status = status;
    return res;
  };

  for (;;) {
    if (cur.r.allFinite() && cur.r.lpNorm<Eigen::Infinity>() <= opts.tol)
      return finish(InnerStatus::Converged);
    if (!cur.r.allFinite()) return finish(InnerStatus::Stalled);
    if (res.iterations >= opts.max_iter) return finish(InnerStatus::MaxIter);
    ++res.iterations;

    const Mat jh = vi.jacobian(cur.z);
    ++res.jac_evals;
    const Mat jr = residual_jacobian(vi.lower, cur.z, cur.h, jh);
    const Vec grad = jr.transpose() * cur.r;

    Vec d;
    Eigen::PartialPivLU<Mat> lu(jr);
    const bool well_conditioned = lu.rcond() > 1e-12;
    if (well_conditioned) d = lu.solve(-cur.r);
    if (!well_conditioned || !d.allFinite()) {
      const double mu = std::max(1e-8 * cur.r.norm(), std::numeric_limits<double>::min());
      Mat normal = jr.transpose() * jr;
      normal.diagonal().array() += mu;
      d = normal.ldlt().solve(-grad);
    }

    bool accepted = false;
    const double slope = grad.dot(d);
    if (d.allFinite() && slope <= -kDescentRho * std::pow(d.norm(), kDescentPow)) {
      double t = 1.0;
      for (int k = 0; k < kMaxBacktracks; ++k, t *= 0.5) {
        Trial trial = evaluate(project(vi.lower, cur.z + t * d));
        const double pred = grad.dot(trial.z - cur.z);
        if (pred < 0.0 && trial.psi <= cur.psi + kArmijo * pred) {
          const double decrease = cur.psi - trial.psi;
          stall = decrease < kStallDecrease ? stall + 1 : 0;
          cur = std::move(trial);
          accepted = true;
          break;
        }
        ++res.linesearch_steps;
      }
    }

    if (!accepted) {
      double t = 1.0;
      for (int k = 0; k < kMaxGradientBacktracks; ++k, t *= 0.5) {
        Trial trial = evaluate(project(vi.lower, cur.z - t * grad));
        const double pred = grad.dot(trial.z - cur.z);
        if (pred < 0.0 && trial.psi <= cur.psi + kArmijo * pred) {
          const double decrease = cur.psi - trial.psi;
          stall = decrease < kStallDecrease ? stall + 1 : 0;
          cur = std::move(trial);
          accepted = true;
          ++res.fallback_steps;
          break;
        }
        ++res.linesearch_steps;
      }
    }

    if (!accepted || stall >= kStallWindow) return finish(InnerStatus::Stalled);
  }
}

}  // namespace cdqvi

#include "cdqvi/selfcheck.hpp"

#include "cdqvi/canonical_dual.hpp"
#include "cdqvi/contact.hpp"
#include "cdqvi/instance_io.hpp"
#include "cdqvi/oracle.hpp"
#include "cdqvi/solver.hpp"

#include <cmath>
#include <cstdio>
#include <random>

namespace cdqvi {

namespace {

std::string sci(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", x);
  return buf;
}

Vec random_vec(std::mt19937_64& rng, Eigen::Index n, double scale) {
  std::uniform_real_distribution<double> u(-scale, scale);
  Vec v(n);
  for (Eigen::Index i = 0; i < n; ++i) v(i) = u(rng);
  return v;
}

CheckResult check_fb() {
  int mismatches = 0;
  for (int i = 0; i <= 100; ++i) {
    for (int j = 0; j <= 100; ++j) {
      const double a = -5.0 + 0.1 * i;
      const double b = -5.0 + 0.1 * j;
      const bool comp = a >= 0.0 && b >= 0.0 && a * b <= 1e-14 * (1 + a) * (1 + b);
      if ((std::abs(fb(a, b)) <= 1e-12) != comp) ++mismatches;
    }
  }
  return {"fb zero set on [-5,5]^2 grid", mismatches == 0, std::to_string(mismatches) + " mismatches"};
}

CheckResult check_duality(std::mt19937_64& rng) {
  const auto p = random_problem(2, 1.0, 10.0, rng());
  const auto& inst = p.instance;
  double worst = 0.0;
  for (int k = 0; k < 20; ++k) {
    const Vec tau = random_vec(rng, 4, 2.0);
    const Vec lambda = random_vec(rng, 8, 2.0);
    const double pm = primal_merit(inst, tau, lambda);
    const double xi0 = total_complementarity(inst, tau, lambda, lambda_op(inst, tau, lambda));
    worst = std::max(worst, std::abs(pm - xi0) / std::max(1.0, std::abs(pm)));
  }
  return {"Xi_0(tau, lambda, Lambda) = P(tau, lambda)", worst <= 1e-10, "max rel err " + sci(worst)};
}

CheckResult check_derivatives(std::mt19937_64& rng) {
  const auto p = random_problem(2, 1.0, 10.0, rng());
  const auto& inst = p.instance;
  const double eps = 1e-2;
  const double step = 1e-6;
  double worst_grad = 0.0;
  double worst_jac = 0.0;
  for (int k = 0; k < 5; ++k) {
    Vec w = random_vec(rng, 20, 1.0);
    w.tail(8) = w.tail(8).cwiseAbs();
    const Vec h = h_eps(inst, w, eps);
    const Mat J = jh_eps(inst, w, eps);
    Vec fd_h(w.size());
    Mat fd_j(w.size(), w.size());
    for (Eigen::Index i = 0; i < w.size(); ++i) {
      Vec wp = w, wm = w;
      wp(i) += step;
      wm(i) -= step;
      auto xi = [&](const Vec& v) {
        const auto q = unpack(inst, v);
        return total_complementarity_smoothed(inst, q.tau, q.lambda, q.sigma, eps);
      };
      fd_h(i) = (xi(wp) - xi(wm)) / (2 * step);
      fd_j.col(i) = (h_eps(inst, wp, eps) - h_eps(inst, wm, eps)) / (2 * step);
    }
    fd_h.tail(8) = -fd_h.tail(8);
    worst_grad = std::max(worst_grad, (fd_h - h).lpNorm<Eigen::Infinity>() / std::max(1.0, h.lpNorm<Eigen::Infinity>()));
    worst_jac = std::max(worst_jac, (fd_j - J).lpNorm<Eigen::Infinity>() / std::max(1.0, J.lpNorm<Eigen::Infinity>()));
  }
  return {"H_eps and JH_eps against central differences", worst_grad <= 1e-6 && worst_jac <= 1e-5,
          "grad " + sci(worst_grad) + ", jac " + sci(worst_jac)};
}

CheckResult check_oracle(std::mt19937_64& rng) {
  int solved = 0;
  int matched = 0;
  const int runs = 6;
  for (int k = 0; k < runs; ++k) {
    const auto p = random_problem(1 + static_cast<std::size_t>(k % 2), k % 3 == 0 ? 0.1 : 1.0, 10.0, rng());
    const auto rep = solve_aqvi(p.instance, SolverParams{});
    if (rep.status != SolveStatus::Solved) continue;
    ++solved;
    for (const auto& q : enumerate_kkt(p.instance)) {
      if ((q.tau - rep.solution.tau).lpNorm<Eigen::Infinity>() <= 1e-4) {
        ++matched;
        break;
      }
    }
  }
  return {"solver points coincide with enumerated KKT points", solved == matched && solved >= runs - 1,
          std::to_string(matched) + "/" + std::to_string(solved) + " solved runs matched, " +
              std::to_string(runs) + " runs"};
}

CheckResult check_roundtrip(std::mt19937_64& rng) {
  const auto p = random_problem(3, 0.5, 100.0, rng());
  const auto q = instance_from_json(instance_to_json(p));
  const bool same = p.instance.A() == q.instance.A() && p.instance.B() == q.instance.B() &&
                    p.instance.c() == q.instance.c() && p.instance.D() == q.instance.D() &&
                    p.instance.e() == q.instance.e() && p.phi == q.phi && p.l == q.l;
  return {"instance file round trip", same, same ? "bit-exact" : "data changed"};
}

}  // namespace

std::vector<CheckResult> run_self_check(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<CheckResult> out;
  out.push_back(check_fb());
  out.push_back(check_duality(rng));
  out.push_back(check_derivatives(rng));
  out.push_back(check_oracle(rng));
  out.push_back(check_roundtrip(rng));
  return out;
}

}  // namespace cdqvi

#include "cdqvi/canonical_dual.hpp"

#include "cdqvi/error.hpp"

#include <cmath>
#include <string>

namespace cdqvi {

namespace {

void check_dims(const AqviInstance& inst, const Vec& tau, const Vec& lambda) {
  require(static_cast<std::size_t>(tau.size()) == inst.n(), ErrorKind::Usage, "tau has wrong length");
  require(static_cast<std::size_t>(lambda.size()) == inst.m(), ErrorKind::Usage,
          "lambda has wrong length");
}

void check_sigma(const AqviInstance& inst, const Vec& sigma) {
  require(static_cast<std::size_t>(sigma.size()) == inst.m(), ErrorKind::Usage,
          "sigma has wrong length");
}

}  // namespace

Vec lambda_op(const AqviInstance& inst, const Vec& tau, const Vec& lambda) {
  return lambda_op_smoothed(inst, tau, lambda, 0.0);
}

Vec lambda_op_smoothed(const AqviInstance& inst, const Vec& tau, const Vec& lambda, double eps) {
  check_dims(inst, tau, lambda);
  require(eps >= 0.0, ErrorKind::Usage, "eps must be nonnegative");
  const Vec g = constraint_values(inst, tau);
  Vec xi(g.size());
  for (Eigen::Index i = 0; i < g.size(); ++i) xi(i) = fb_smoothed(lambda(i), -g(i), eps);
  return xi;
}

double v0(const Vec& xi) { return 0.5 * xi.squaredNorm(); }

double v0_conj(const Vec& sigma) { return 0.5 * sigma.squaredNorm(); }

double total_complementarity(const AqviInstance& inst, const Vec& tau, const Vec& lambda,
                             const Vec& sigma) {
  return total_complementarity_smoothed(inst, tau, lambda, sigma, 0.0);
}

double total_complementarity_smoothed(const AqviInstance& inst, const Vec& tau, const Vec& lambda,
                                      const Vec& sigma, double eps) {
  check_sigma(inst, sigma);
  const Vec xi = lambda_op_smoothed(inst, tau, lambda, eps);
  const Vec z = stack(tau, lambda);
  return sigma.dot(xi) - v0_conj(sigma) + 0.5 * z.dot(inst.M() * z) - inst.fvec().dot(z);
}

Vec regrouped_linear_term(const AqviInstance& inst, const Vec& sigma) {
  check_sigma(inst, sigma);
  const auto n = static_cast<Eigen::Index>(inst.n());
  const auto m = static_cast<Eigen::Index>(inst.m());
  Vec fbar = inst.fvec();
  fbar.head(n) -= inst.G().transpose() * sigma;
  fbar.tail(m) += sigma;
  return fbar;
}

CanonicalEval evaluate_canonical(const AqviInstance& inst, const Vec& tau, const Vec& lambda,
                                 const Vec& sigma, double eps) {
  check_dims(inst, tau, lambda);
  check_sigma(inst, sigma);
  require(eps >= 0.0, ErrorKind::Usage, "eps must be nonnegative");
  const auto n = static_cast<Eigen::Index>(inst.n());
  const auto m = static_cast<Eigen::Index>(inst.m());
  const Vec g = constraint_values(inst, tau);
  const Vec z = stack(tau, lambda);

  CanonicalEval out;
  out.eps = eps;
  out.xi.resize(m);
  Vec dg(m);    // sigma_i * dLambda_i/dg_i
  Vec dlam(m);  // sigma_i * dLambda_i/dlambda_i
  for (Eigen::Index i = 0; i < m; ++i) {
    const double rho = std::hypot(lambda(i), g(i), eps);
    out.xi(i) = fb_smoothed(lambda(i), -g(i), eps);
    // rho == 0 only at eps == 0 and lambda_i = g_i = 0; take the (1,1)/sqrt2 element.
    const double ug = rho > 0.0 ? g(i) / rho : M_SQRT1_2;
    const double ul = rho > 0.0 ? lambda(i) / rho : M_SQRT1_2;
    dg(i) = sigma(i) * (ug + 1.0);
    dlam(i) = sigma(i) * (ul - 1.0);
  }
  const Vec mz = inst.M() * z;
  out.value = sigma.dot(out.xi) - v0_conj(sigma) + 0.5 * z.dot(mz) - inst.fvec().dot(z);
  out.grad_primal = mz - inst.fvec();
  out.grad_primal.head(n) += inst.G().transpose() * dg;
  out.grad_primal.tail(m) += dlam;
  out.grad_dual = out.xi - sigma;
  return out;
}

PrimalDualPoint unpack(const AqviInstance& inst, const Vec& w) {
  const auto n = static_cast<Eigen::Index>(inst.n());
  const auto m = static_cast<Eigen::Index>(inst.m());
  require(w.size() == n + 2 * m, ErrorKind::Usage,
          "packed point must have N + 2m = " + std::to_string(n + 2 * m) + " entries");
  return {w.head(n), w.segment(n, m), w.tail(m)};
}

Vec pack(const Vec& tau, const Vec& lambda, const Vec& sigma) {
  Vec w(tau.size() + lambda.size() + sigma.size());
  w << tau, lambda, sigma;
  return w;
}

Vec h_eps(const AqviInstance& inst, const Vec& w, double eps) {
  require(eps > 0.0, ErrorKind::Usage, "H_eps is only defined for eps > 0");
  const auto p = unpack(inst, w);
  const auto ev = evaluate_canonical(inst, p.tau, p.lambda, p.sigma, eps);
  Vec h(w.size());
  h << ev.grad_primal, -ev.grad_dual;
  return h;
}

Mat jh_eps(const AqviInstance& inst, const Vec& w, double eps) {
  require(eps > 0.0, ErrorKind::Usage, "JH_eps is only defined for eps > 0");
  const auto p = unpack(inst, w);
  const auto n = static_cast<Eigen::Index>(inst.n());
  const auto m = static_cast<Eigen::Index>(inst.m());
  const Vec g = constraint_values(inst, p.tau);
  const Mat& G = inst.G();

  Vec wgg(m), wgl(m), wll(m), alpha(m), beta(m);
  for (Eigen::Index i = 0; i < m; ++i) {
    const double l = p.lambda(i);
    const double gi = g(i);
    const double rho = std::hypot(l, gi, eps);
    const double ul = l / rho;
    const double ug = gi / rho;
    const double ue = eps / rho;
    const double s = p.sigma(i) / rho;
    wgg(i) = s * (ul * ul + ue * ue);
    wgl(i) = -s * ug * ul;
    wll(i) = s * (ug * ug + ue * ue);
    alpha(i) = ug + 1.0;
    beta(i) = ul - 1.0;
  }

  const Eigen::Index dim = n + 2 * m;
  Mat J = Mat::Zero(dim, dim);
  J.topLeftCorner(n + m, n + m) = inst.M();
  J.topLeftCorner(n, n).noalias() += G.transpose() * wgg.asDiagonal() * G;
  const Mat tl = G.transpose() * wgl.asDiagonal();
  J.block(0, n, n, m) += tl;
  J.block(n, 0, m, n) += tl.transpose();
  J.block(n, n, m, m).diagonal() += wll;

  const Mat dxi_dtau = alpha.asDiagonal() * G;  // m x n
  J.block(0, n + m, n, m) = dxi_dtau.transpose();
  J.block(n, n + m, m, m).diagonal() = beta;
  J.block(n + m, 0, m, n) = -dxi_dtau;
  J.block(n + m, n, m, m).diagonal() = -beta;
  J.bottomRightCorner(m, m).setIdentity();
  return J;
}

}  // namespace cdqvi

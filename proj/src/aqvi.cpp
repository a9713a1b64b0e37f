#include "cdqvi/aqvi.hpp"

#include "cdqvi/error.hpp"

#include <cmath>
#include <string>

namespace cdqvi {

namespace {

void check_len(const Vec& v, std::size_t n, const char* what) {
  require(static_cast<std::size_t>(v.size()) == n, ErrorKind::Usage,
          std::string(what) + ": expected length " + std::to_string(n) +
              ", got " + std::to_string(v.size()));
}

}  // namespace

double fb(double a, double b) { return fb_smoothed(a, b, 0.0); }

double fb_smoothed(double a, double b, double eps) {
  const double r = std::hypot(a, b, eps);
  const double s = a + b;
  // For a + b > 0 the direct form cancels; use the conjugate expression.
  if (s > 0.0) return (eps * eps - 2.0 * a * b) / (r + s);
  return r - s;
}

QuadraticForm assemble_quadratic(const Mat& D, const Mat& A, const Vec& e) {
  require(D.rows() == D.cols(), ErrorKind::Usage, "D must be square");
  require(A.cols() == D.rows(), ErrorKind::Usage, "A must have N columns");
  require(e.size() == D.rows(), ErrorKind::Usage, "e must have length N");
  const Eigen::Index n = D.rows();
  const Eigen::Index m = A.rows();
  // K = [D A^T], M = K^T K.
  Mat K(n, n + m);
  K.leftCols(n) = D;
  K.rightCols(m) = A.transpose();
  QuadraticForm q;
  q.M = K.transpose() * K;
  q.M = 0.5 * (q.M + q.M.transpose()).eval();
  q.fvec = -(K.transpose() * e);
  return q;
}

AqviInstance::AqviInstance(Mat A, Mat B, Vec c, Mat D, Vec e)
    : A_(std::move(A)), B_(std::move(B)), c_(std::move(c)), D_(std::move(D)), e_(std::move(e)) {
  const auto n = D_.rows();
  require(n > 0 && D_.cols() == n, ErrorKind::Usage, "D must be a nonempty square matrix");
  require(A_.cols() == n && B_.cols() == n, ErrorKind::Usage, "A and B must have N columns");
  require(A_.rows() == B_.rows(), ErrorKind::Usage, "A and B must have the same row count");
  require(c_.size() == A_.rows(), ErrorKind::Usage, "c must have m entries");
  require(e_.size() == n, ErrorKind::Usage, "e must have N entries");
  require(A_.rows() == 2 * n, ErrorKind::InvalidInstance,
          "constraint count m must equal 2N (got m=" + std::to_string(A_.rows()) +
              ", N=" + std::to_string(n) + ")");
  require(n % 2 == 0, ErrorKind::InvalidInstance, "N must be even (two dofs per contact node)");
  require(A_.allFinite() && B_.allFinite() && c_.allFinite() && D_.allFinite() && e_.allFinite(),
          ErrorKind::InvalidInstance, "instance data must be finite");

  const double scale = std::max(1.0, D_.cwiseAbs().maxCoeff());
  require((D_ - D_.transpose()).cwiseAbs().maxCoeff() <= 1e-12 * scale,
          ErrorKind::InvalidInstance, "D must be symmetric");
  D_ = (0.5 * (D_ + D_.transpose())).eval();
  Eigen::LLT<Mat> llt(D_);
  require(llt.info() == Eigen::Success, ErrorKind::InvalidInstance,
          "D must be positive definite");

  G_ = A_ + B_;
  quad_ = assemble_quadratic(D_, A_, e_);

  Eigen::SelfAdjointEigenSolver<Mat> es(quad_.M, Eigen::EigenvaluesOnly);
  const double mnorm = std::max(1.0, quad_.M.cwiseAbs().maxCoeff());
  require(es.eigenvalues().minCoeff() >= -1e-10 * mnorm, ErrorKind::InvalidInstance,
          "assembled M is not positive semidefinite");
}

PrimalDualPoint PrimalDualPoint::zeros(const AqviInstance& inst) {
  const auto n = static_cast<Eigen::Index>(inst.n());
  const auto m = static_cast<Eigen::Index>(inst.m());
  return {Vec::Zero(n), Vec::Zero(m), Vec::Zero(m)};
}

Vec constraint_values(const AqviInstance& inst, const Vec& tau) {
  check_len(tau, inst.n(), "tau");
  return inst.G() * tau - inst.c();
}

Vec kkt_residual(const AqviInstance& inst, const Vec& tau, const Vec& lambda) {
  check_len(tau, inst.n(), "tau");
  check_len(lambda, inst.m(), "lambda");
  const auto n = tau.size();
  const auto m = lambda.size();
  const Vec g = constraint_values(inst, tau);
  Vec y(n + m);
  y.head(n) = inst.D() * tau + inst.e() + inst.A().transpose() * lambda;
  for (Eigen::Index i = 0; i < m; ++i) y(n + i) = fb(lambda(i), -g(i));
  return y;
}

double primal_merit(const AqviInstance& inst, const Vec& tau, const Vec& lambda) {
  check_len(tau, inst.n(), "tau");
  check_len(lambda, inst.m(), "lambda");
  const Vec g = constraint_values(inst, tau);
  double w = 0.0;
  for (Eigen::Index i = 0; i < g.size(); ++i) {
    const double t = fb(lambda(i), -g(i));
    w += 0.5 * t * t;
  }
  const Vec z = stack(tau, lambda);
  return w + 0.5 * z.dot(inst.M() * z) - inst.fvec().dot(z);
}

Vec stack(const Vec& tau, const Vec& lambda) {
  Vec z(tau.size() + lambda.size());
  z << tau, lambda;
  return z;
}

}  // namespace cdqvi

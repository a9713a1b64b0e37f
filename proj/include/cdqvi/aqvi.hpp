#pragma once

#include <Eigen/Dense>

#include <cstddef>

namespace cdqvi {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

/// Fischer-Burmeister complementarity function sqrt(a^2 + b^2) - (a + b).
/// Zero exactly when a >= 0, b >= 0 and ab = 0.
double fb(double a, double b);

/// Smoothed variant sqrt(a^2 + b^2 + eps^2) - (a + b); equals fb at eps = 0.
double fb_smoothed(double a, double b, double eps);

/// The quadratic part of the merit function, M = [D^T; A][D A^T] and
/// fvec = -[D^T; A] e.
struct QuadraticForm {
  Mat M;
  Vec fvec;
};

QuadraticForm assemble_quadratic(const Mat& D, const Mat& A, const Vec& e);

/// One affine quasi-variational inequality in reciprocal (stress) form:
/// find tau with <D tau + e, mu - tau> >= 0 for all mu in
/// K(tau) = { mu : A mu + B tau - c <= 0 }.
///
/// Immutable after construction. M and fvec are assembled once here.
class AqviInstance {
 public:
  /// Throws Error(Usage) on dimension mismatch and Error(InvalidInstance)
  /// when D is not symmetric positive definite or m != 2N.
  AqviInstance(Mat A, Mat B, Vec c, Mat D, Vec e);

  std::size_t n() const noexcept { return static_cast<std::size_t>(D_.rows()); }
  std::size_t m() const noexcept { return static_cast<std::size_t>(A_.rows()); }

  const Mat& A() const noexcept { return A_; }
  const Mat& B() const noexcept { return B_; }
  const Vec& c() const noexcept { return c_; }
  const Mat& D() const noexcept { return D_; }
  const Vec& e() const noexcept { return e_; }
  const Mat& M() const noexcept { return quad_.M; }
  const Vec& fvec() const noexcept { return quad_.fvec; }
  /// A + B, the Jacobian of g.
  const Mat& G() const noexcept { return G_; }

 private:
  Mat A_;
  Mat B_;
  Vec c_;
  Mat D_;
  Vec e_;
  Mat G_;
  QuadraticForm quad_;
};

struct PrimalDualPoint {
  Vec tau;
  Vec lambda;
  Vec sigma;

  static PrimalDualPoint zeros(const AqviInstance& inst);
};

/// g(tau) = (A + B) tau - c.
Vec constraint_values(const AqviInstance& inst, const Vec& tau);

/// Y(tau, lambda) = [D tau + e + A^T lambda; fb(lambda_i, -g_i(tau))].
Vec kkt_residual(const AqviInstance& inst, const Vec& tau, const Vec& lambda);

/// 1/2 sum fb(lambda_i, -g_i)^2 + 1/2 z^T M z - fvec^T z with z = (tau, lambda).
/// Identical to 1/2 |Y|^2 - 1/2 e^T e, so its global minimum is -1/2 e^T e.
double primal_merit(const AqviInstance& inst, const Vec& tau, const Vec& lambda);

/// Stack (tau, lambda) into one vector.
Vec stack(const Vec& tau, const Vec& lambda);

}  // namespace cdqvi

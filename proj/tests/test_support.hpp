#pragma once

// Shared fixtures and independent oracles for the test suites. Nothing here
// calls into the code paths it is used to check.

#include "cdqvi/aqvi.hpp"
#include "cdqvi/contact.hpp"

#include <cmath>
#include <functional>
#include <random>

namespace cdqvi::testing {

/// r = 1, phi = 1, l = 10, D = I and the given e.
inline AqviInstance tiny_instance(double e1, double e2, double phi = 1.0, double l = 10.0) {
  auto cm = build_constraint_matrices(1, phi, l);
  Vec e(2);
  e << e1, e2;
  return AqviInstance(cm.A, cm.B, cm.c, Mat::Identity(2, 2), e);
}

inline Vec vec(std::initializer_list<double> xs) {
  Vec v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (double x : xs) v(i++) = x;
  return v;
}

inline Vec uniform(std::mt19937_64& rng, Eigen::Index n, double lo, double hi) {
  std::uniform_real_distribution<double> u(lo, hi);
  Vec v(n);
  for (Eigen::Index i = 0; i < n; ++i) v(i) = u(rng);
  return v;
}

inline Mat random_spd(std::mt19937_64& rng, Eigen::Index n) {
  Mat R(n, n);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) R(i, j) = u(rng);
  Mat C = R.transpose() * R;
  C.diagonal().array() += 0.5;
  return C;
}

/// Random contact AQVI with r nodes built from a random SPD stiffness.
inline AqviInstance random_instance(std::mt19937_64& rng, std::size_t r, double phi, double l = 10.0) {
  const auto n = static_cast<Eigen::Index>(2 * r);
  return build_instance(random_spd(rng, n), uniform(rng, n, -2.0, 1.0),
                        build_constraint_matrices(r, phi, l));
}

/// Central-difference gradient of a scalar function.
inline Vec fd_gradient(const std::function<double(const Vec&)>& f, const Vec& x, double h) {
  Vec g(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    Vec xp = x, xm = x;
    xp(i) += h;
    xm(i) -= h;
    g(i) = (f(xp) - f(xm)) / (2.0 * h);
  }
  return g;
}

/// Central-difference Jacobian of a vector function.
inline Mat fd_jacobian(const std::function<Vec(const Vec&)>& f, const Vec& x, double h) {
  const Vec f0 = f(x);
  Mat J(f0.size(), x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    Vec xp = x, xm = x;
    xp(i) += h;
    xm(i) -= h;
    J.col(i) = (f(xp) - f(xm)) / (2.0 * h);
  }
  return J;
}

/// Max-norm relative error with a floor of 1 on the reference scale.
inline double rel_err(const Eigen::MatrixXd& got, const Eigen::MatrixXd& want) {
  return (got - want).lpNorm<Eigen::Infinity>() / std::max(1.0, want.lpNorm<Eigen::Infinity>());
}

/// Direct fb without the cancellation-free rewrite used by the library.
inline double fb_naive(double a, double b) { return std::sqrt(a * a + b * b) - (a + b); }

}  // namespace cdqvi::testing

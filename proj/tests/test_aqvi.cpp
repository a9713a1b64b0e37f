#include "cdqvi/aqvi.hpp"
#include "cdqvi/error.hpp"
#include "test_support.hpp"

#include <doctest.h>

#include <random>

using namespace cdqvi;
using namespace cdqvi::testing;

TEST_CASE("fb on hand-computed points") {
  CHECK(fb(0.0, 0.0) == 0.0);
  CHECK(fb(3.0, 4.0) == doctest::Approx(-2.0).epsilon(1e-15));
  CHECK(fb(0.0, -2.0) == 4.0);
  CHECK(fb(0.0, 2.0) == 0.0);
  CHECK(fb(7.5, 0.0) == 0.0);
}

TEST_CASE("fb_smoothed on hand-computed points") {
  CHECK(fb_smoothed(3.0, 4.0, 0.0) == doctest::Approx(-2.0).epsilon(1e-15));
  CHECK(fb_smoothed(0.0, 0.0, 1.0) == 1.0);
  CHECK(fb_smoothed(0.0, 0.0, 1e-4) == doctest::Approx(1e-4).epsilon(1e-15));
}

TEST_CASE("fb agrees with the naive formula away from cancellation") {
  std::mt19937_64 rng(7);
  for (int k = 0; k < 1000; ++k) {
    const Vec ab = uniform(rng, 2, -5.0, 5.0);
    CHECK(fb(ab(0), ab(1)) == doctest::Approx(fb_naive(ab(0), ab(1))).epsilon(1e-12).scale(1.0));
  }
}

TEST_CASE("fb vanishes exactly on the complementarity set") {
  auto comp = [](double a, double b) {
    return a >= 0.0 && b >= 0.0 && a * b <= 1e-14 * (1 + a) * (1 + b);
  };
  int mismatches = 0;
  for (int i = 0; i <= 100; ++i)
    for (int j = 0; j <= 100; ++j) {
      const double a = -5.0 + 0.1 * i;
      const double b = -5.0 + 0.1 * j;
      if ((std::abs(fb(a, b)) <= 1e-12) != comp(a, b)) ++mismatches;
    }
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-5.0, 5.0);
  for (int k = 0; k < 10000; ++k) {
    const double a = u(rng), b = u(rng);
    if ((std::abs(fb(a, b)) <= 1e-12) != comp(a, b)) ++mismatches;
  }
  CHECK(mismatches == 0);
}

TEST_CASE("fb_smoothed approaches fb monotonically with error at most eps") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-5.0, 5.0);
  for (int k = 0; k < 2000; ++k) {
    const double a = u(rng), b = u(rng);
    double prev = fb_smoothed(a, b, 1.0);
    for (double eps : {1e-1, 1e-2, 1e-4, 1e-8}) {
      const double cur = fb_smoothed(a, b, eps);
      CHECK(std::abs(cur - fb(a, b)) <= eps * (1 + 1e-12));
      CHECK(cur <= prev + 1e-15);
      prev = cur;
    }
  }
}

TEST_CASE("constraint values on the tiny instance") {
  const auto inst = tiny_instance(0.0, -1.0);
  CHECK(constraint_values(inst, vec({0, 0})) == vec({0, 0, 0, -10}));
  CHECK(constraint_values(inst, vec({0, -1})) == vec({-1, -1, -1, -9}));
  CHECK_THROWS_AS(constraint_values(inst, vec({0, 0, 0})), Error);
}

TEST_CASE("constraint values vanish where (A+B) tau = c") {
  std::mt19937_64 rng(5);
  const auto inst = random_instance(rng, 2, 0.7);
  const Vec tau = uniform(rng, 4, -1.0, 1.0);
  const Vec c = inst.G() * tau;
  const AqviInstance shifted(inst.A(), inst.B(), c, inst.D(), inst.e());
  CHECK(constraint_values(shifted, tau).lpNorm<Eigen::Infinity>() == 0.0);
}

TEST_CASE("KKT residual at known solutions of the tiny instance") {
  const auto pulled = tiny_instance(0.0, -1.0);
  CHECK(kkt_residual(pulled, vec({0, 0}), vec({0, 0, 1, 0})).lpNorm<Eigen::Infinity>() == 0.0);

  const auto pressed = tiny_instance(0.0, 1.0);
  CHECK(kkt_residual(pressed, vec({0, -1}), vec({0, 0, 0, 0})).lpNorm<Eigen::Infinity>() == 0.0);
}

TEST_CASE("KKT residual complementarity block is zero for lambda = 0 and g <= 0") {
  std::mt19937_64 rng(9);
  const auto inst = random_instance(rng, 2, 1.0);
  for (int k = 0; k < 200; ++k) {
    Vec tau = uniform(rng, 4, -1.0, 0.0);
    tau(0) = 0.5 * tau(1);  // |tangential| <= |normal|
    tau(2) = -0.5 * tau(3);
    REQUIRE(constraint_values(inst, tau).maxCoeff() <= 0.0);
    const Vec y = kkt_residual(inst, tau, Vec::Zero(8));
    CHECK(y.tail(8).lpNorm<Eigen::Infinity>() == 0.0);
  }
}

TEST_CASE("primal merit values and the 1/2|Y|^2 identity") {
  const auto inst = tiny_instance(0.0, -1.0);
  CHECK(primal_merit(inst, vec({0, 0}), vec({0, 0, 0, 0})) == doctest::Approx(0.0));
  CHECK(primal_merit(inst, vec({0, 0}), vec({0, 0, 1, 0})) == doctest::Approx(-0.5).epsilon(1e-15));

  std::mt19937_64 rng(21);
  for (int k = 0; k < 200; ++k) {
    const auto r = static_cast<std::size_t>(1 + k % 3);
    const auto in = random_instance(rng, r, 1.0);
    const Vec tau = uniform(rng, static_cast<Eigen::Index>(in.n()), -2.0, 2.0);
    const Vec lambda = uniform(rng, static_cast<Eigen::Index>(in.m()), -2.0, 2.0);
    const double p = primal_merit(in, tau, lambda);
    const double y = 0.5 * kkt_residual(in, tau, lambda).squaredNorm();
    const double ee = 0.5 * in.e().squaredNorm();
    CHECK(std::abs(p + ee - y) <= 1e-12 * std::max(1.0, y));
    CHECK(p >= -ee - 1e-12);
  }
}

TEST_CASE("assemble_quadratic builds the stacked outer product") {
  std::mt19937_64 rng(13);
  const Mat D = random_spd(rng, 4);
  const Mat A = build_constraint_matrices(2, 1.0, 1.0).A;

  SUBCASE("zero offset gives zero linear term") {
    const auto q = assemble_quadratic(D, A, Vec::Zero(4));
    CHECK(q.fvec.isZero(0.0));
  }
  SUBCASE("entrywise against an explicit triple loop") {
    const Vec e = uniform(rng, 4, -1.0, 1.0);
    const auto q = assemble_quadratic(D, A, e);
    // K = [D A^T] (N x (N+m)); M_ij = sum_k K_ki K_kj, fvec_i = -sum_k K_ki e_k.
    auto K = [&](Eigen::Index k, Eigen::Index i) { return i < 4 ? D(k, i) : A(i - 4, k); };
    for (Eigen::Index i = 0; i < 12; ++i) {
      double fi = 0.0;
      for (Eigen::Index k = 0; k < 4; ++k) fi -= K(k, i) * e(k);
      CHECK(q.fvec(i) == doctest::Approx(fi).epsilon(1e-13));
      for (Eigen::Index j = 0; j < 12; ++j) {
        double s = 0.0;
        for (Eigen::Index k = 0; k < 4; ++k) s += K(k, i) * K(k, j);
        CHECK(q.M(i, j) == doctest::Approx(s).epsilon(1e-13).scale(1.0));
      }
    }
  }
  SUBCASE("identity D gives an identity upper-left block") {
    const auto q = assemble_quadratic(Mat::Identity(2, 2), build_constraint_matrices(1, 1.0, 10.0).A,
                                      vec({0, -1}));
    CHECK(q.M.topLeftCorner(2, 2) == Mat::Identity(2, 2));
    CHECK(q.fvec == vec({0, 1, 0, 0, 1, -1}));
  }
}

TEST_CASE("M is symmetric positive semidefinite") {
  std::mt19937_64 rng(17);
  for (int k = 0; k < 20; ++k) {
    const auto inst = random_instance(rng, 1 + static_cast<std::size_t>(k % 3), 2.0);
    const Mat& M = inst.M();
    CHECK((M - M.transpose()).lpNorm<Eigen::Infinity>() == 0.0);
    Eigen::SelfAdjointEigenSolver<Mat> es(M, Eigen::EigenvaluesOnly);
    CHECK(es.eigenvalues().minCoeff() >= -1e-10 * M.norm());
    for (int t = 0; t < 20; ++t) {
      const Vec z = uniform(rng, M.rows(), -3.0, 3.0);
      CHECK(z.dot(M * z) >= -1e-10 * M.norm() * z.squaredNorm());
    }
  }
}

TEST_CASE("instance construction rejects inconsistent data") {
  const auto cm = build_constraint_matrices(1, 1.0, 10.0);
  const Mat I = Mat::Identity(2, 2);

  SUBCASE("wrong e length") {
    CHECK_THROWS_AS(AqviInstance(cm.A, cm.B, cm.c, I, Vec::Zero(3)), Error);
  }
  SUBCASE("m != 2N") {
    try {
      AqviInstance(cm.A.topRows(3), cm.B.topRows(3), cm.c.head(3), I, Vec::Zero(2));
      FAIL("expected an error");
    } catch (const Error& ex) {
      CHECK(ex.kind() == ErrorKind::InvalidInstance);
    }
  }
  SUBCASE("D not positive definite") {
    Mat D = I;
    D(1, 1) = -1.0;
    try {
      AqviInstance(cm.A, cm.B, cm.c, D, Vec::Zero(2));
      FAIL("expected an error");
    } catch (const Error& ex) {
      CHECK(ex.kind() == ErrorKind::InvalidInstance);
    }
  }
  SUBCASE("D not symmetric") {
    Mat D = I;
    D(0, 1) = 0.5;
    CHECK_THROWS_AS(AqviInstance(cm.A, cm.B, cm.c, D, Vec::Zero(2)), Error);
  }
}

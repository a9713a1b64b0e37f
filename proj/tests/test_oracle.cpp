#include "cdqvi/error.hpp"
#include "cdqvi/oracle.hpp"
#include "test_support.hpp"

#include <doctest.h>

using namespace cdqvi;
using namespace cdqvi::testing;

namespace {

// KKT conditions checked entry by entry, without the library residual.
bool satisfies_kkt(const AqviInstance& inst, const Vec& tau, const Vec& lambda, double tol) {
  const Vec stat = inst.D() * tau + inst.e() + inst.A().transpose() * lambda;
  if (stat.lpNorm<Eigen::Infinity>() > tol) return false;
  const Vec g = (inst.A() + inst.B()) * tau - inst.c();
  for (Eigen::Index i = 0; i < g.size(); ++i) {
    if (lambda(i) < -tol || g(i) > tol || std::abs(lambda(i) * g(i)) > tol) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("hand-solved single-node instances") {
  SUBCASE("pressed into the obstacle") {
    // D = I, e = (0, -1): tau = (0, 0), lambda_3 = 1, lambda_1 = lambda_2 taken minimal
    const auto pts = enumerate_kkt(tiny_instance(0.0, -1.0));
    REQUIRE(pts.size() == 1);
    CHECK(pts[0].tau.lpNorm<Eigen::Infinity>() <= 1e-12);
    CHECK((pts[0].lambda - vec({0, 0, 1, 0})).lpNorm<Eigen::Infinity>() <= 1e-12);
    CHECK(pts[0].residual <= 1e-12);
  }
  SUBCASE("interior stick") {
    const auto pts = enumerate_kkt(tiny_instance(-0.5, 1.0));
    REQUIRE(pts.size() == 1);
    CHECK((pts[0].tau - vec({0.5, -1.0})).lpNorm<Eigen::Infinity>() <= 1e-12);
    CHECK(pts[0].lambda.isZero(1e-12));
    CHECK(pts[0].active_set == 0u);
  }
  SUBCASE("sliding") {
    // unconstrained (3, -1) violates |tau_t| <= |tau_n|; slides at tau = (1, -1), lambda_1 = 2
    const auto pts = enumerate_kkt(tiny_instance(-3.0, 1.0));
    REQUIRE(pts.size() == 1);
    CHECK((pts[0].tau - vec({1.0, -1.0})).lpNorm<Eigen::Infinity>() <= 1e-12);
    CHECK((pts[0].lambda - vec({2, 0, 0, 0})).lpNorm<Eigen::Infinity>() <= 1e-12);
    CHECK(pts[0].active_set == 1u);
  }
  SUBCASE("normal stress limit") {
    // e_n = 20 pushes tau_n below -l = -10
    const auto pts = enumerate_kkt(tiny_instance(0.0, 20.0));
    REQUIRE(pts.size() == 1);
    CHECK((pts[0].tau - vec({0.0, -10.0})).lpNorm<Eigen::Infinity>() <= 1e-12);
    CHECK((pts[0].lambda - vec({0, 0, 0, 10})).lpNorm<Eigen::Infinity>() <= 1e-12);
    CHECK(pts[0].active_set == 8u);
  }
}

TEST_CASE("zero load gives the origin") {
  std::mt19937_64 rng(51);
  const auto cm = build_constraint_matrices(2, 0.7, 10.0);
  const AqviInstance inst(cm.A, cm.B, cm.c, random_spd(rng, 4), Vec::Zero(4));
  bool origin = false;
  for (const auto& p : enumerate_kkt(inst)) origin = origin || (p.tau.isZero(1e-12) && p.lambda.isZero(1e-12));
  CHECK(origin);
}

TEST_CASE("every reported point satisfies KKT and output is ordered") {
  std::mt19937_64 rng(53);
  int total = 0;
  for (int k = 0; k < 40; ++k) {
    const auto inst = random_instance(rng, 1 + k % 2, 0.1 + 0.5 * (k % 4));
    const auto pts = enumerate_kkt(inst);
    for (std::size_t i = 0; i < pts.size(); ++i) {
      CHECK(satisfies_kkt(inst, pts[i].tau, pts[i].lambda, 1e-9));
      CHECK(pts[i].residual <= 1e-10);
      CHECK(pts[i].tau.size() == static_cast<Eigen::Index>(inst.n()));
      if (i > 0) CHECK(pts[i - 1].active_set < pts[i].active_set);
      for (std::size_t j = 0; j < i; ++j) {
        const double d = std::max((pts[i].tau - pts[j].tau).lpNorm<Eigen::Infinity>(),
                                  (pts[i].lambda - pts[j].lambda).lpNorm<Eigen::Infinity>());
        CHECK(d > 1e-8);
      }
      // lambda vanishes off the active set
      for (Eigen::Index c = 0; c < pts[i].lambda.size(); ++c)
        if (!(pts[i].active_set & (1u << c))) CHECK(pts[i].lambda(c) == 0.0);
    }
    total += static_cast<int>(pts.size());
  }
  CHECK(total >= 40);
}

TEST_CASE("oracle capacity") {
  std::mt19937_64 rng(59);
  CHECK_NOTHROW(enumerate_kkt(random_instance(rng, 5, 0.5)));  // m = 20
  try {
    enumerate_kkt(random_instance(rng, 6, 0.5));
    FAIL("expected a capability error");
  } catch (const Error& ex) {
    CHECK(ex.kind() == ErrorKind::Capability);
  }
  CHECK_THROWS_AS(enumerate_kkt(tiny_instance(0, -1), -1.0), Error);
}

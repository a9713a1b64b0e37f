#include "cdqvi/oracle.hpp"

#include "cdqvi/error.hpp"

#include <vector>

namespace cdqvi {

namespace {

constexpr double kSystemTol = 1e-10;
constexpr double kResidualTol = 1e-10;
constexpr double kDedupTol = 1e-8;

}  // namespace

std::vector<KktPoint> enumerate_kkt(const AqviInstance& inst, double tol) {
  const auto n = static_cast<Eigen::Index>(inst.n());
  const auto m = static_cast<Eigen::Index>(inst.m());
  require(static_cast<std::size_t>(m) <= kOracleMaxConstraints, ErrorKind::Capability,
          "oracle enumeration is limited to m <= 20 constraints (got m=" + std::to_string(m) + ")");
  require(tol >= 0.0, ErrorKind::Usage, "oracle tolerance must be nonnegative");

  const Mat& D = inst.D();
  const Mat& A = inst.A();
  const Mat& G = inst.G();
  const Vec& c = inst.c();
  const Vec& e = inst.e();

  std::vector<KktPoint> points;
  std::vector<Eigen::Index> active;
  const std::uint32_t subsets = std::uint32_t{1} << m;
  for (std::uint32_t mask = 0; mask < subsets; ++mask) {
    active.clear();
    for (Eigen::Index i = 0; i < m; ++i)
      if (mask & (std::uint32_t{1} << i)) active.push_back(i);
    const auto k = static_cast<Eigen::Index>(active.size());

    // Unknowns (tau, lambda_S); equations stationarity then active constraints.
    Mat sys = Mat::Zero(n + k, n + k);
    Vec rhs(n + k);
    sys.topLeftCorner(n, n) = D;
    rhs.head(n) = -e;
    for (Eigen::Index j = 0; j < k; ++j) {
      const Eigen::Index i = active[static_cast<std::size_t>(j)];
      sys.block(0, n + j, n, 1) = A.row(i).transpose();
      sys.block(n + j, 0, 1, n) = G.row(i);
      rhs(n + j) = c(i);
    }
    const Vec sol = sys.completeOrthogonalDecomposition().solve(rhs);
    const double scale = 1.0 + rhs.lpNorm<Eigen::Infinity>();
    if (!sol.allFinite() || (sys * sol - rhs).lpNorm<Eigen::Infinity>() > kSystemTol * scale) continue;

    KktPoint p;
    p.tau = sol.head(n);
    p.lambda = Vec::Zero(m);
    for (Eigen::Index j = 0; j < k; ++j) p.lambda(active[static_cast<std::size_t>(j)]) = sol(n + j);
    if (p.lambda.minCoeff() < -tol) continue;
    if (constraint_values(inst, p.tau).maxCoeff() > tol) continue;
    p.residual = kkt_residual(inst, p.tau, p.lambda).lpNorm<Eigen::Infinity>();
    if (p.residual > kResidualTol) continue;
    p.active_set = mask;

    bool duplicate = false;
    for (const auto& q : points) {
      if ((q.tau - p.tau).lpNorm<Eigen::Infinity>() <= kDedupTol &&
          (q.lambda - p.lambda).lpNorm<Eigen::Infinity>() <= kDedupTol) {
        duplicate = true;
        break;
      }
    }
    if (!duplicate) points.push_back(std::move(p));
  }
  return points;
}

}  // namespace cdqvi

#include "cdqvi/contact.hpp"

#include "cdqvi/error.hpp"
#include "cdqvi/instance_io.hpp"

#include <cmath>
#include <numbers>
#include <random>

namespace cdqvi {

ConstraintMatrices build_constraint_matrices(std::size_t nodes, double phi, double l) {
  require(nodes >= 1, ErrorKind::Usage, "need at least one contact node");
  require(phi > 0.0 && std::isfinite(phi), ErrorKind::Usage, "friction coefficient must be positive");
  require(l > 0.0 && std::isfinite(l), ErrorKind::Usage, "normal bound l must be positive");

  const auto n = static_cast<Eigen::Index>(2 * nodes);
  const auto m = 2 * n;
  ConstraintMatrices cm{Mat::Zero(m, n), Mat::Zero(m, n), Vec::Zero(m)};
  for (Eigen::Index j = 0; j < static_cast<Eigen::Index>(nodes); ++j) {
    const Eigen::Index t = 2 * j;
    const Eigen::Index nn = t + 1;
    const Eigen::Index row = 4 * j;
    cm.A(row, t) = 1.0;
    cm.A(row + 1, t) = -1.0;
    cm.A(row + 2, nn) = 1.0;
    cm.A(row + 3, nn) = -1.0;
    // Sign is +phi: with tau_n <= 0 the bound reads |mu_t| <= -phi tau_n.
    cm.B(row, nn) = phi;
    cm.B(row + 1, nn) = phi;
    cm.c(row + 3) = l;
  }
  return cm;
}

namespace {

Mat lattice_stiffness(std::size_t nodes, const SpringLattice& s) {
  require(s.k_t > 0.0 && s.k_n > 0.0, ErrorKind::Usage, "spring stiffnesses must be positive");
  require(s.coupling >= 0.0, ErrorKind::Usage, "coupling must be nonnegative");
  const auto n = static_cast<Eigen::Index>(2 * nodes);
  Mat C = Mat::Zero(n, n);
  for (Eigen::Index j = 0; j < static_cast<Eigen::Index>(nodes); ++j) {
    C(2 * j, 2 * j) = s.k_t;
    C(2 * j + 1, 2 * j + 1) = s.k_n;
    if (j + 1 < static_cast<Eigen::Index>(nodes)) {
      for (Eigen::Index d = 0; d < 2; ++d) {
        C(2 * j + d, 2 * (j + 1) + d) = -s.coupling;
        C(2 * (j + 1) + d, 2 * j + d) = -s.coupling;
      }
    }
  }
  const double floor = 1e-8 * C.diagonal().maxCoeff();
  Eigen::SelfAdjointEigenSolver<Mat> es(C, Eigen::EigenvaluesOnly);
  const double lmin = es.eigenvalues().minCoeff();
  if (lmin < floor) C.diagonal().array() += floor - lmin;
  return C;
}

}  // namespace

Mat build_stiffness(const ContactSpec& spec) {
  if (const auto* lattice = std::get_if<SpringLattice>(&spec.stiffness)) {
    return lattice_stiffness(spec.nodes, *lattice);
  }
  const auto& file = std::get<StiffnessFile>(spec.stiffness);
  Mat C = load_stiffness_file(file.path);
  const auto n = static_cast<Eigen::Index>(2 * spec.nodes);
  require(C.rows() == n && C.cols() == n, ErrorKind::InvalidInstance,
          "stiffness file dimension does not match 2 * nodes");
  const double scale = std::max(1.0, C.cwiseAbs().maxCoeff());
  require((C - C.transpose()).cwiseAbs().maxCoeff() <= 1e-12 * scale, ErrorKind::InvalidInstance,
          "stiffness matrix is not symmetric");
  Eigen::LLT<Mat> llt(C);
  require(llt.info() == Eigen::Success, ErrorKind::InvalidInstance,
          "stiffness matrix is not positive definite");
  return C;
}

AqviInstance build_instance(const Mat& C, const Vec& fext, const ConstraintMatrices& cm) {
  require(C.rows() == C.cols(), ErrorKind::Usage, "C must be square");
  require(fext.size() == C.rows(), ErrorKind::Usage, "fext must have N entries");
  Eigen::LLT<Mat> llt(C);
  require(llt.info() == Eigen::Success, ErrorKind::InvalidInstance,
          "stiffness matrix is singular or not positive definite");
  Mat D = llt.solve(Mat::Identity(C.rows(), C.cols()));
  D = (0.5 * (D + D.transpose())).eval();
  Vec e = -(D * fext);
  return AqviInstance(cm.A, cm.B, cm.c, std::move(D), std::move(e));
}

Vec default_load(std::size_t nodes, double normal_amplitude, double tangential_amplitude) {
  const auto r = static_cast<Eigen::Index>(nodes);
  Vec f(2 * r);
  for (Eigen::Index j = 0; j < r; ++j) {
    const double s = (static_cast<double>(j) + 0.5) / static_cast<double>(r);
    f(2 * j) = tangential_amplitude * (1.0 - 2.0 * s);
    f(2 * j + 1) = -normal_amplitude * (std::sin(std::numbers::pi * s) - 0.15);
  }
  return f;
}

ContactProblem ContactProblem::with_phi(double new_phi) const {
  auto cm = build_constraint_matrices(nodes(), new_phi, l);
  return ContactProblem{AqviInstance(std::move(cm.A), std::move(cm.B), std::move(cm.c),
                                     instance.D(), instance.e()),
                        new_phi, l, meta_json};
}

ContactProblem generate_problem(const ContactSpec& spec) {
  require(spec.fext.size() == static_cast<Eigen::Index>(2 * spec.nodes), ErrorKind::Usage,
          "fext must have 2 * nodes entries");
  const Mat C = build_stiffness(spec);
  const auto cm = build_constraint_matrices(spec.nodes, spec.phi, spec.l);
  return ContactProblem{build_instance(C, spec.fext, cm), spec.phi, spec.l, "{}"};
}

ContactProblem random_problem(std::size_t nodes, double phi, double l, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  const auto n = static_cast<Eigen::Index>(2 * nodes);
  Mat R(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) R(i, j) = unit(rng);
  Mat C = R.transpose() * R / static_cast<double>(n);
  C.diagonal().array() += 0.5;
  Vec f(n);
  for (Eigen::Index j = 0; j < n / 2; ++j) {
    f(2 * j) = unit(rng);
    f(2 * j + 1) = 1.25 * unit(rng) - 0.75;  // mostly compressive
  }
  const auto cm = build_constraint_matrices(nodes, phi, l);
  return ContactProblem{build_instance(C, f, cm), phi, l, "{}"};
}

}  // namespace cdqvi

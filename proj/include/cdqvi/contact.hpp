#pragma once

#include "cdqvi/aqvi.hpp"

#include <cstdint>
#include <filesystem>
#include <string>
#include <variant>

namespace cdqvi {

/// Surrogate stiffness: each contact node carries a tangential spring k_t
/// and a normal spring k_n; neighbouring nodes are coupled by -coupling
/// between dofs of the same type.
struct SpringLattice {
  double k_t = 1.0;
  double k_n = 1.0;
  double coupling = 0.0;
};

/// Stiffness read from a JSON file holding {"C": [[...]]}.
struct StiffnessFile {
  std::filesystem::path path;
};

using StiffnessModel = std::variant<SpringLattice, StiffnessFile>;

/// Variables are interleaved per node: index 2j (0-based) is tangential,
/// 2j + 1 is normal.
struct ContactSpec {
  std::size_t nodes = 1;
  double phi = 1.0;
  double l = 10.0;
  StiffnessModel stiffness = SpringLattice{};
  Vec fext;  // length 2 * nodes
};

struct ConstraintMatrices {
  Mat A;
  Mat B;
  Vec c;
};

/// Rows come in groups of four per node j (tangential t = 2j, normal n = 2j+1):
///    mu_t + phi tau_n       <= 0
///   -mu_t + phi tau_n       <= 0
///    mu_n                   <= 0
///   -mu_n              - l  <= 0
/// which, for tau_n <= 0, encodes |mu_t| <= phi |tau_n| and -l <= mu_n <= 0.
ConstraintMatrices build_constraint_matrices(std::size_t nodes, double phi, double l);

/// Throws Error(InvalidInstance) for a file matrix that is not SPD.
Mat build_stiffness(const ContactSpec& spec);

/// D = C^{-1}, e = -C^{-1} fext.
AqviInstance build_instance(const Mat& C, const Vec& fext, const ConstraintMatrices& cm);

/// Smooth deterministic load on node j at s = (j + 1/2) / nodes:
/// tangential t (1 - 2s), normal -n (sin(pi s) - 0.15). The body is pressed
/// onto the obstacle with the peak at the centre and sheared outwards; the
/// outermost nodes of a fine discretisation see a slight pull-off.
Vec default_load(std::size_t nodes, double normal_amplitude, double tangential_amplitude);

/// An AQVI together with the contact parameters it was built from.
struct ContactProblem {
  AqviInstance instance;
  double phi = 1.0;
  double l = 10.0;
  std::string meta_json = "{}";

  std::size_t nodes() const noexcept { return instance.n() / 2; }

  /// Same stiffness and load, constraint matrices rebuilt for a new friction
  /// coefficient.
  ContactProblem with_phi(double new_phi) const;
};

ContactProblem generate_problem(const ContactSpec& spec);

/// Random SPD stiffness and random load, used for test instances. Deterministic
/// for a fixed seed.
ContactProblem random_problem(std::size_t nodes, double phi, double l, std::uint64_t seed);

}  // namespace cdqvi

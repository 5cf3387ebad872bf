#pragma once

#include <Eigen/Core>
#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "lpvstab/errors.hpp"

namespace lpvstab {

/// Polytopic LPV system: A(theta) = sum_i theta_i * A_i over the unit simplex.
struct PolytopicSystem {
  int n = 0;
  std::vector<Eigen::MatrixXd> vertices;
  std::string label;

  int r() const { return static_cast<int>(vertices.size()); }
  void validate() const;
};

/// Mass-damper-spring chain: q masses, q+1 springs/dampers tying neighbours
/// and the end walls. Spring indices are 1-based ({1..q+1}); the indices in
/// `tv_indices` vary over `tv_ranges`, the rest take their `springs_fixed`
/// value.
struct MdofConfig {
  int q = 0;
  Eigen::VectorXd masses;   // q entries, kg
  Eigen::VectorXd dampers;  // q+1 entries, Ns/m
  std::map<int, double> springs_fixed;             // index -> N/m
  std::vector<int> tv_indices;                     // ascending
  std::map<int, std::array<double, 2>> tv_ranges;  // index -> {min, max}
  std::uint64_t seed = 0;

  int l() const { return static_cast<int>(tv_indices.size()); }
  void validate() const;
};

/// Tridiagonal coupling pattern of the chain: diagonal psi_j + psi_{j+1},
/// off-diagonal -psi_{j+1}. psi has q+1 entries for a q x q result.
Eigen::MatrixXd theta_matrix(const Eigen::VectorXd& psi);

/// State matrix [[0, I], [-M^-1 K, -M^-1 C]] for x = [y, y'].
/// Throws SingularMass when M is not invertible to working precision.
Eigen::MatrixXd mdof_state_matrix(const Eigen::MatrixXd& m,
                                  const Eigen::MatrixXd& c,
                                  const Eigen::MatrixXd& k);

/// Enumerates the 2^l corner assignments of the time-varying springs to their
/// range endpoints and emits one state matrix per corner. Corner order is
/// binary counting with the smallest tv index as the fastest digit.
PolytopicSystem build_mdof_polytope(const MdofConfig& cfg);

/// Random chain configuration: masses U[5.00, 5.50] kg, dampers
/// U[4.00, 8.00] Ns/m, springs U[100, 200] N/m, and a uniform size-l subset
/// of {1..q+1} marked time-varying with range [100, 200]. Deterministic in
/// `seed`.
MdofConfig sample_configuration(int q, int l, std::uint64_t seed);

/// Convex combination of the vertex matrices. theta must lie in the unit
/// simplex within 1e-12 (throws NotInSimplex otherwise).
Eigen::MatrixXd evaluate_at(const PolytopicSystem& sys,
                            const Eigen::VectorXd& theta);

/// True iff every eigenvalue satisfies Re(lambda) < -margin.
bool is_hurwitz(const Eigen::MatrixXd& a, double margin = 0.0);

}  // namespace lpvstab

#pragma once

#include <Eigen/Core>
#include <string>
#include <vector>

#include "lpvstab/derivset.hpp"
#include "lpvstab/lpvmodel.hpp"

namespace lpvstab {

enum class Method { Quadratic, PdlfExact, PdlfSimplex };

std::string method_name(Method m);
Method method_from_name(const std::string& name);

/// One symmetrized contribution w * (L^T P_v R + R^T P_v L) of variable v.
struct AffineTerm {
  int var = 0;
  Eigen::MatrixXd left;
  Eigen::MatrixXd right;
  double weight = 1.0;
};

/// constant + sum of terms, required positive definite after substitution.
struct AffineBlock {
  Eigen::MatrixXd constant;
  std::vector<AffineTerm> terms;
  std::string tag;
};

/// Symbolic LMI feasibility problem over var_count symmetric n x n matrix
/// variables. All blocks are normalized to the sense "positive definite".
struct ConstraintSet {
  int n = 0;
  int var_count = 0;
  std::vector<AffineBlock> blocks;
  Method method = Method::Quadratic;
};

/// Common quadratic stability: P > 0 and -(A_i^T P + P A_i) > 0 per vertex.
/// r + 1 blocks.
ConstraintSet assemble_quadratic(const PolytopicSystem& sys);

/// Affine parameter-dependent Lyapunov conditions over the rate vertices:
///   (a) P_i > 0 for each i;
///   (b) -(A_i^T P_i + P_i A_i + sum_k h^l_k P_k) > 0 per rate column l, per i;
///   (c) -(A_i^T P_j + P_j A_i + A_j^T P_i + P_i A_j + 2 sum_k h^l_k P_k) > 0
///       per rate column l, per pair i < j.
/// r + p * r(r+1)/2 blocks. The method is PdlfExact for an ExactPolytope rate
/// matrix and PdlfSimplex for a CircumscribingSimplex.
ConstraintSet assemble_pdlf(const PolytopicSystem& sys,
                            const VertexMatrix& deriv);

/// Numeric evaluation of every block under the assignment, preserving order.
std::vector<Eigen::MatrixXd> substitute(
    const ConstraintSet& cs, const std::vector<Eigen::MatrixXd>& assign);

/// (P, P, ..., P): a common quadratic certificate viewed as a PDLF assignment.
std::vector<Eigen::MatrixXd> embed_quadratic(const Eigen::MatrixXd& p, int r);

}  // namespace lpvstab

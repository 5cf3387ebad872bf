#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <string>
#include <vector>

#include "lpvstab/lmi.hpp"

namespace lpvstab {

/// Frobenius-norm cap on each matrix variable. Feasibility sets here are
/// homogeneous cones, so the cap only rules out unbounded rays.
inline constexpr double kNormCap = 1e3;

struct SolveOptions {
  double epsilon = 1e-6;      // relative strictness margin
  int max_iters = 2000;       // refit-sweep budget
  double time_budget = 120.0; // wall-clock cap, seconds
  std::uint64_t seed = 0;     // recorded; the solve itself is deterministic
  double tol_converge = 1e-12;

  void validate() const;
};

enum class SolveStatus { FeasibleCertified, NotCertified };

struct Outcome {
  SolveStatus status = SolveStatus::NotCertified;
  std::vector<Eigen::MatrixXd> assignment;  // best-effort when not certified
  double margin = 0.0;  // smallest normalized block eigenvalue achieved
  int iters = 0;
  double wall_time = 0.0;
  std::string diagnostics;
};

struct MarginReport {
  struct Block {
    std::string tag;
    double lambda_min = 0.0;
    double scale = 1.0;
    double margin = 0.0;  // lambda_min / scale
  };
  std::vector<Block> blocks;
  double min_margin = 0.0;
  bool pass = false;
};

/// Searches for an assignment whose substituted blocks are all positive
/// definite with normalized margin >= opts.epsilon, under the norm cap.
///
/// Method: Lyapunov-equation warm starts followed by eigenvalue-clipping
/// alternating projections (clip every violating block's spectrum at an
/// adaptive floor, refit the variables by least squares through a
/// precomputed Gram factorization, rescale to the cap). Deterministic.
/// FeasibleCertified is returned only when verify_certificate passes; a
/// exhausted budget is reported as NotCertified with diagnostics.
Outcome solve_feasibility(const ConstraintSet& cs, const SolveOptions& opts);

/// Independent soundness check: substitutes the assignment, computes every
/// block's smallest eigenvalue with the in-repo Jacobi iteration (share no
/// code with the solver's Eigen-based estimates) and normalizes by
///   scale_k = max(1, ||C_k||_F + sum_t |w_t| sigma(L_t) sigma(R_t) X),
/// with X = max_i sigma_max(P_i). Passes iff the minimum margin >= epsilon.
MarginReport verify_certificate(const ConstraintSet& cs,
                                const std::vector<Eigen::MatrixXd>& assign,
                                double epsilon);

/// Smallest eigenvalue of a (nearly) symmetric matrix via the Jacobi path.
double min_eig(const Eigen::MatrixXd& s);

}  // namespace lpvstab

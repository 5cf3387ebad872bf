#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <optional>
#include <vector>

#include "lpvstab/errors.hpp"

namespace lpvstab {

/// Tolerances for the rate-polytope geometry, all applied relative to
/// max(1, ||.||_inf) of the quantity under test.
inline constexpr double kTolZero = 1e-12;   // zero-sum residual
inline constexpr double kTolDedup = 1e-10;  // duplicate-column detection
inline constexpr double kTolBary = 1e-9;    // affine-hull membership

/// Enumeration guard: vertex counts explode combinatorially past this.
inline constexpr int kMaxRateDim = 14;

/// Per-coordinate bounds on the scheduling-parameter rates (units 1/s).
struct DerivativeBounds {
  Eigen::VectorXd delta_min;
  Eigen::VectorXd delta_max;

  int r() const { return static_cast<int>(delta_min.size()); }

  /// Componentwise delta_min = -delta_max.
  bool is_symmetric(double tol = kTolZero) const;

  /// Throws EmptyManifold or std::invalid_argument on a malformed value.
  void validate() const;

  static DerivativeBounds symmetric(const Eigen::VectorXd& delta);
  static DerivativeBounds symmetric(int r, double delta);
};

enum class VertexKind { ExactPolytope, CircumscribingSimplex };

/// Rate vertices stacked as columns (r x p).
struct VertexMatrix {
  Eigen::MatrixXd columns;
  VertexKind kind = VertexKind::ExactPolytope;

  int r() const { return static_cast<int>(columns.rows()); }
  int p() const { return static_cast<int>(columns.cols()); }
};

/// All vertices of { v : sum(v) = 0, delta_min <= v <= delta_max },
/// deduplicated and sorted lexicographically.
///
/// Every vertex of this box slice has at most one coordinate strictly between
/// its bounds, so enumeration walks each choice of free coordinate and each
/// bound assignment of the others.
VertexMatrix enumerate_h_vertices(const DerivativeBounds& b);

/// Closed-form vertex count for symmetric equal bounds:
/// C(r, r/2) for even r, r * C(r-1, (r-1)/2) for odd r.
std::int64_t count_h_vertices(int r);

/// The r-column circumscribing simplex of the rate polytope:
/// column j is delta_min + s * e_j with the common bump s = -sum(delta_min).
/// Columns always sum to zero and the simplex contains the exact polytope
/// whenever the bounds admit a nonempty manifold.
VertexMatrix build_hbar(const DerivativeBounds& b);

/// Barycentric coordinates of `point` w.r.t. the simplex columns: lambda with
/// sum(lambda) = 1 and columns * lambda = point, solved in the least-squares
/// sense. Empty when the residual exceeds kTolBary * max(1, ||point||_inf).
std::optional<Eigen::VectorXd> barycentric_coordinates(
    const Eigen::VectorXd& point, const VertexMatrix& simplex);

struct ContainmentReport {
  struct Column {
    int index = 0;
    bool in_affine_hull = false;
    double min_lambda = 0.0;  // meaningful only when in_affine_hull
  };
  bool contained = false;
  std::vector<Column> columns;
};

/// For each column of `h`, tests membership in the convex hull of `hbar`
/// (barycentric coordinates all >= -tol). Overall flag is the conjunction.
ContainmentReport check_containment(const VertexMatrix& h,
                                    const VertexMatrix& hbar, double tol);

}  // namespace lpvstab

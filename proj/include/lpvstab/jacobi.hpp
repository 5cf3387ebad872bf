#pragma once

#include <Eigen/Core>
#include <cmath>

#include "lpvstab/errors.hpp"

namespace lpvstab {

/// Cyclic Jacobi eigenvalue iteration for dense symmetric matrices.
///
/// This is deliberately self-contained: it shares no code with Eigen's
/// SelfAdjointEigenSolver so it can act as an independent numerical
/// cross-check on anything the solver computes with Eigen.
///
/// Returns the eigenvalues in ascending order. Throws EigenFailure if the
/// off-diagonal mass has not vanished after `max_sweeps` cyclic sweeps.
template <typename Scalar>
Eigen::Matrix<Scalar, Eigen::Dynamic, 1> jacobi_eigenvalues(
    Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> a,
    Scalar rel_tol = Scalar(1e-14), int max_sweeps = 64) {
  using std::abs;
  using std::sqrt;
  const Eigen::Index n = a.rows();
  if (n == 0) return {};
  if (n == 1) {
    Eigen::Matrix<Scalar, Eigen::Dynamic, 1> ev(1);
    ev(0) = a(0, 0);
    return ev;
  }

  const Scalar norm = a.norm();
  const Scalar stop = rel_tol * (norm > Scalar(0) ? norm : Scalar(1));

  auto off_norm = [&a, n]() {
    Scalar s = 0;
    for (Eigen::Index p = 0; p < n; ++p)
      for (Eigen::Index q = p + 1; q < n; ++q) s += a(p, q) * a(p, q);
    return sqrt(Scalar(2) * s);
  };

  int sweep = 0;
  while (off_norm() > stop) {
    if (++sweep > max_sweeps)
      throw EigenFailure("jacobi_eigenvalues: sweep cap reached");
    for (Eigen::Index p = 0; p < n - 1; ++p) {
      for (Eigen::Index q = p + 1; q < n; ++q) {
        const Scalar apq = a(p, q);
        if (abs(apq) <= stop / Scalar(n * n)) continue;
        const Scalar theta = (a(q, q) - a(p, p)) / (Scalar(2) * apq);
        const Scalar t = (theta >= Scalar(0))
                             ? Scalar(1) / (theta + sqrt(theta * theta + 1))
                             : Scalar(-1) / (-theta + sqrt(theta * theta + 1));
        const Scalar c = Scalar(1) / sqrt(t * t + 1);
        const Scalar s = t * c;

        // A <- J^T A J on rows/columns p and q, exploiting symmetry.
        const Scalar app = a(p, p), aqq = a(q, q);
        a(p, p) = app - t * apq;
        a(q, q) = aqq + t * apq;
        a(p, q) = a(q, p) = Scalar(0);
        for (Eigen::Index k = 0; k < n; ++k) {
          if (k == p || k == q) continue;
          const Scalar akp = a(k, p), akq = a(k, q);
          a(k, p) = a(p, k) = c * akp - s * akq;
          a(k, q) = a(q, k) = s * akp + c * akq;
        }
      }
    }
  }

  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> ev = a.diagonal();
  std::sort(ev.data(), ev.data() + n);
  return ev;
}

}  // namespace lpvstab

#include "lpvstab/derivset.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

namespace lpvstab {

namespace {

double inf_scale(const Eigen::VectorXd& v) {
  return std::max(1.0, v.size() ? v.lpNorm<Eigen::Infinity>() : 0.0);
}

bool lex_less(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    if (a(i) < b(i)) return true;
    if (a(i) > b(i)) return false;
  }
  return false;
}

bool near_equal(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  const double tol =
      kTolDedup * std::max(inf_scale(a), inf_scale(b));
  return (a - b).lpNorm<Eigen::Infinity>() <= tol;
}

}  // namespace

bool DerivativeBounds::is_symmetric(double tol) const {
  return (delta_min + delta_max).lpNorm<Eigen::Infinity>() <=
         tol * inf_scale(delta_max);
}

void DerivativeBounds::validate() const {
  if (delta_min.size() == 0 || delta_min.size() != delta_max.size())
    throw std::invalid_argument("DerivativeBounds: bound vectors must be nonempty and equally sized");
  for (Eigen::Index i = 0; i < delta_min.size(); ++i)
    if (delta_min(i) > delta_max(i))
      throw std::invalid_argument("DerivativeBounds: delta_min exceeds delta_max at coordinate " +
                                  std::to_string(i + 1));
  if (delta_min.sum() > 0.0 || delta_max.sum() < 0.0)
    throw EmptyManifold("DerivativeBounds: zero-sum manifold is empty for these bounds");
}

DerivativeBounds DerivativeBounds::symmetric(const Eigen::VectorXd& delta) {
  return DerivativeBounds{-delta, delta};
}

DerivativeBounds DerivativeBounds::symmetric(int r, double delta) {
  return symmetric(Eigen::VectorXd::Constant(r, delta));
}

VertexMatrix enumerate_h_vertices(const DerivativeBounds& b) {
  b.validate();
  const int r = b.r();
  if (r > kMaxRateDim)
    throw DimensionGuard("enumerate_h_vertices: r = " + std::to_string(r) +
                         " exceeds the enumeration guard (" +
                         std::to_string(kMaxRateDim) + ")");

  std::vector<Eigen::VectorXd> cols;
  Eigen::VectorXd v(r);
  const std::uint32_t patterns = 1u << (r - 1);
  for (int free = 0; free < r; ++free) {
    for (std::uint32_t mask = 0; mask < patterns; ++mask) {
      int bit = 0;
      for (int i = 0; i < r; ++i) {
        if (i == free) continue;
        v(i) = (mask >> bit & 1u) ? b.delta_max(i) : b.delta_min(i);
        ++bit;
      }
      v(free) = 0.0;
      const double solved = -v.sum();
      const double tol = kTolZero * inf_scale(v);
      if (solved < b.delta_min(free) - tol || solved > b.delta_max(free) + tol)
        continue;
      v(free) = solved;
      cols.push_back(v);
    }
  }

  std::sort(cols.begin(), cols.end(), lex_less);
  cols.erase(std::unique(cols.begin(), cols.end(), near_equal), cols.end());

  VertexMatrix out;
  out.kind = VertexKind::ExactPolytope;
  out.columns.resize(r, static_cast<Eigen::Index>(cols.size()));
  for (std::size_t j = 0; j < cols.size(); ++j) out.columns.col(j) = cols[j];
  return out;
}

std::int64_t count_h_vertices(int r) {
  if (r < 1) throw std::invalid_argument("count_h_vertices: r must be positive");
  auto binom = [](int n, int k) {
    std::int64_t acc = 1;
    for (int i = 1; i <= k; ++i) acc = acc * (n - k + i) / i;
    return acc;
  };
  if (r % 2 == 0) return binom(r, r / 2);
  return static_cast<std::int64_t>(r) * binom(r - 1, (r - 1) / 2);
}

VertexMatrix build_hbar(const DerivativeBounds& b) {
  b.validate();
  const int r = b.r();
  const double bump = -b.delta_min.sum();
  if (bump <= kTolDedup * inf_scale(b.delta_min))
    throw DegenerateSimplex("build_hbar: simplex columns coincide (zero diagonal bump)");

  VertexMatrix out;
  out.kind = VertexKind::CircumscribingSimplex;
  out.columns = b.delta_min.replicate(1, r);
  out.columns.diagonal().array() += bump;
  return out;
}

std::optional<Eigen::VectorXd> barycentric_coordinates(
    const Eigen::VectorXd& point, const VertexMatrix& simplex) {
  if (simplex.kind != VertexKind::CircumscribingSimplex)
    throw std::invalid_argument("barycentric_coordinates: expected a CircumscribingSimplex");
  const int r = simplex.r();
  if (point.size() != r)
    throw DimensionMismatch("barycentric_coordinates: point length does not match simplex dimension");

  Eigen::MatrixXd sys(r + 1, r);
  sys.topRows(r) = simplex.columns;
  sys.row(r).setOnes();
  Eigen::VectorXd rhs(r + 1);
  rhs.head(r) = point;
  rhs(r) = 1.0;

  const Eigen::VectorXd lambda = sys.colPivHouseholderQr().solve(rhs);
  const double resid = (sys * lambda - rhs).lpNorm<Eigen::Infinity>();
  if (resid > kTolBary * inf_scale(point)) return std::nullopt;
  return lambda;
}

ContainmentReport check_containment(const VertexMatrix& h,
                                    const VertexMatrix& hbar, double tol) {
  if (h.r() != hbar.r())
    throw DimensionMismatch("check_containment: dimension mismatch between vertex matrices");

  ContainmentReport report;
  report.contained = true;
  report.columns.reserve(h.p());
  for (int j = 0; j < h.p(); ++j) {
    ContainmentReport::Column col;
    col.index = j;
    if (auto lambda = barycentric_coordinates(h.columns.col(j), hbar)) {
      col.in_affine_hull = true;
      col.min_lambda = lambda->minCoeff();
      if (col.min_lambda < -tol) report.contained = false;
    } else {
      col.in_affine_hull = false;
      report.contained = false;
    }
    report.columns.push_back(col);
  }
  return report;
}

}  // namespace lpvstab

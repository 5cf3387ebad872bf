#include "lpvstab/lpvmodel.hpp"

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <algorithm>
#include <numeric>

#include "lpvstab/derivset.hpp"
#include "lpvstab/rng.hpp"

namespace lpvstab {

void PolytopicSystem::validate() const {
  if (vertices.empty()) throw std::invalid_argument("PolytopicSystem: needs at least one vertex");
  for (const auto& a : vertices)
    if (a.rows() != n || a.cols() != n)
      throw DimensionMismatch("PolytopicSystem: vertex matrix is not n x n");
}

void MdofConfig::validate() const {
  if (q < 1) throw std::invalid_argument("MdofConfig: q must be >= 1");
  if (masses.size() != q || dampers.size() != q + 1)
    throw DimensionMismatch("MdofConfig: masses must have q entries and dampers q+1");
  if ((masses.array() <= 0).any() || (dampers.array() <= 0).any())
    throw std::invalid_argument("MdofConfig: physical parameters must be positive");
  if (static_cast<int>(tv_indices.size()) > q + 1)
    throw std::invalid_argument("MdofConfig: more time-varying springs than springs");
  if (!std::is_sorted(tv_indices.begin(), tv_indices.end()))
    throw std::invalid_argument("MdofConfig: tv_indices must be ascending");
  for (int j = 1; j <= q + 1; ++j) {
    const bool tv = std::binary_search(tv_indices.begin(), tv_indices.end(), j);
    if (tv) {
      auto it = tv_ranges.find(j);
      if (it == tv_ranges.end())
        throw std::invalid_argument("MdofConfig: missing range for time-varying spring " + std::to_string(j));
      if (it->second[0] <= 0 || it->second[1] < it->second[0])
        throw std::invalid_argument("MdofConfig: bad range for spring " + std::to_string(j));
    } else {
      auto it = springs_fixed.find(j);
      if (it == springs_fixed.end())
        throw std::invalid_argument("MdofConfig: missing fixed value for spring " + std::to_string(j));
      if (it->second <= 0)
        throw std::invalid_argument("MdofConfig: spring coefficients must be positive");
    }
  }
}

Eigen::MatrixXd theta_matrix(const Eigen::VectorXd& psi) {
  const int q = static_cast<int>(psi.size()) - 1;
  if (q < 1) throw std::invalid_argument("theta_matrix: psi needs at least two entries");
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(q, q);
  for (int j = 0; j < q; ++j) {
    out(j, j) = psi(j) + psi(j + 1);
    if (j + 1 < q) {
      out(j, j + 1) = -psi(j + 1);
      out(j + 1, j) = -psi(j + 1);
    }
  }
  return out;
}

Eigen::MatrixXd mdof_state_matrix(const Eigen::MatrixXd& m,
                                  const Eigen::MatrixXd& c,
                                  const Eigen::MatrixXd& k) {
  const int q = static_cast<int>(m.rows());
  if (m.cols() != q || c.rows() != q || c.cols() != q || k.rows() != q || k.cols() != q)
    throw DimensionMismatch("mdof_state_matrix: M, C, K must be square and equally sized");

  Eigen::FullPivLU<Eigen::MatrixXd> lu(m);
  if (!lu.isInvertible())
    throw SingularMass("mdof_state_matrix: mass matrix is singular to working precision");

  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(2 * q, 2 * q);
  a.topRightCorner(q, q).setIdentity();
  a.bottomLeftCorner(q, q) = -lu.solve(k);
  a.bottomRightCorner(q, q) = -lu.solve(c);
  return a;
}

PolytopicSystem build_mdof_polytope(const MdofConfig& cfg) {
  cfg.validate();
  const int l = cfg.l();
  if (l > kMaxRateDim)
    throw DimensionGuard("build_mdof_polytope: 2^l vertices exceed the dimension guard");

  const Eigen::MatrixXd m = cfg.masses.asDiagonal();
  const Eigen::MatrixXd c = theta_matrix(cfg.dampers);

  Eigen::VectorXd springs(cfg.q + 1);
  for (const auto& [idx, val] : cfg.springs_fixed) springs(idx - 1) = val;

  PolytopicSystem sys;
  sys.n = 2 * cfg.q;
  sys.label = "mdof(q=" + std::to_string(cfg.q) + ",l=" + std::to_string(l) +
              ",seed=" + std::to_string(cfg.seed) + ")";
  const std::uint32_t corners = 1u << l;
  sys.vertices.reserve(corners);
  for (std::uint32_t corner = 0; corner < corners; ++corner) {
    for (int b = 0; b < l; ++b) {
      const auto& range = cfg.tv_ranges.at(cfg.tv_indices[b]);
      springs(cfg.tv_indices[b] - 1) = (corner >> b & 1u) ? range[1] : range[0];
    }
    sys.vertices.push_back(mdof_state_matrix(m, c, theta_matrix(springs)));
  }
  return sys;
}

MdofConfig sample_configuration(int q, int l, std::uint64_t seed) {
  if (q < 1 || l < 1 || l > q + 1)
    throw std::invalid_argument("sample_configuration: need q >= 1 and 1 <= l <= q+1");

  Rng rng(seed);
  MdofConfig cfg;
  cfg.q = q;
  cfg.seed = seed;
  cfg.masses.resize(q);
  for (int i = 0; i < q; ++i) cfg.masses(i) = rng.uniform(5.00, 5.50);
  cfg.dampers.resize(q + 1);
  for (int i = 0; i < q + 1; ++i) cfg.dampers(i) = rng.uniform(4.00, 8.00);

  Eigen::VectorXd springs(q + 1);
  for (int i = 0; i < q + 1; ++i) springs(i) = rng.uniform(100.0, 200.0);

  // Partial Fisher-Yates draw of a size-l subset of {1..q+1}.
  std::vector<int> pool(q + 1);
  std::iota(pool.begin(), pool.end(), 1);
  for (int i = 0; i < l; ++i)
    std::swap(pool[i], pool[rng.uniform_int(i, q)]);
  cfg.tv_indices.assign(pool.begin(), pool.begin() + l);
  std::sort(cfg.tv_indices.begin(), cfg.tv_indices.end());

  for (int j = 1; j <= q + 1; ++j) {
    if (std::binary_search(cfg.tv_indices.begin(), cfg.tv_indices.end(), j))
      cfg.tv_ranges[j] = {100.0, 200.0};
    else
      cfg.springs_fixed[j] = springs(j - 1);
  }
  return cfg;
}

Eigen::MatrixXd evaluate_at(const PolytopicSystem& sys,
                            const Eigen::VectorXd& theta) {
  sys.validate();
  if (theta.size() != sys.r())
    throw DimensionMismatch("evaluate_at: theta length must equal the vertex count");
  if (theta.minCoeff() < -1e-12 || std::abs(theta.sum() - 1.0) > 1e-12)
    throw NotInSimplex("evaluate_at: theta is outside the unit simplex");

  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(sys.n, sys.n);
  for (int i = 0; i < sys.r(); ++i) a += theta(i) * sys.vertices[i];
  return a;
}

bool is_hurwitz(const Eigen::MatrixXd& a, double margin) {
  if (a.rows() != a.cols())
    throw DimensionMismatch("is_hurwitz: matrix must be square");
  Eigen::EigenSolver<Eigen::MatrixXd> es(a, /*computeEigenvectors=*/false);
  if (es.info() != Eigen::Success)
    throw EigenFailure("is_hurwitz: eigenvalue iteration did not converge");
  return (es.eigenvalues().real().array() < -margin).all();
}

}  // namespace lpvstab

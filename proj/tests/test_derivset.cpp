#include <doctest.h>

#include <Eigen/Dense>
#include <algorithm>
#include <set>

#include "lpvstab/derivset.hpp"
#include "lpvstab/rng.hpp"

using namespace lpvstab;
using Eigen::VectorXd;

namespace {

VectorXd vec(std::initializer_list<double> vals) {
  VectorXd v(static_cast<Eigen::Index>(vals.size()));
  Eigen::Index i = 0;
  for (double x : vals) v(i++) = x;
  return v;
}

// Vertex characterization oracle for the box slice {sum v = 0, lo <= v <= hi}:
// feasible, and at most one coordinate strictly between its bounds.
bool is_feasible_extreme(const VectorXd& v, const DerivativeBounds& b) {
  const double tol = 1e-9;
  if (std::abs(v.sum()) > tol * std::max(1.0, v.lpNorm<Eigen::Infinity>()))
    return false;
  int strictly_inside = 0;
  for (int i = 0; i < b.r(); ++i) {
    if (v(i) < b.delta_min(i) - tol || v(i) > b.delta_max(i) + tol) return false;
    if (v(i) > b.delta_min(i) + tol && v(i) < b.delta_max(i) - tol)
      ++strictly_inside;
  }
  return strictly_inside <= 1;
}

std::set<std::vector<double>> column_set(const VertexMatrix& m) {
  std::set<std::vector<double>> out;
  for (int j = 0; j < m.p(); ++j) {
    std::vector<double> col(m.r());
    for (int i = 0; i < m.r(); ++i) col[static_cast<std::size_t>(i)] = m.columns(i, j);
    out.insert(std::move(col));
  }
  return out;
}

}  // namespace

TEST_CASE("DerivativeBounds validation") {
  DerivativeBounds b = DerivativeBounds::symmetric(3, 1.0);
  CHECK_NOTHROW(b.validate());
  CHECK(b.is_symmetric());

  b.delta_min(0) = 2.0;  // min > max
  CHECK_THROWS_AS(b.validate(), std::invalid_argument);

  DerivativeBounds empty{vec({0.5, 0.5}), vec({1.0, 1.0})};
  CHECK_THROWS_AS(empty.validate(), EmptyManifold);

  DerivativeBounds asym{vec({-1.0, -0.5}), vec({0.25, 1.0})};
  CHECK_NOTHROW(asym.validate());
  CHECK_FALSE(asym.is_symmetric());
}

TEST_CASE("enumerate_h_vertices small cases") {
  SUBCASE("r=2 symmetric unit bounds") {
    const VertexMatrix h = enumerate_h_vertices(DerivativeBounds::symmetric(2, 1.0));
    CHECK(h.p() == 2);
    CHECK(h.kind == VertexKind::ExactPolytope);
    const auto cols = column_set(h);
    CHECK(cols.count({-1.0, 1.0}) == 1);
    CHECK(cols.count({1.0, -1.0}) == 1);
  }

  SUBCASE("r=3: all permutations of (1,-1,0), each feasible and extreme") {
    const DerivativeBounds b = DerivativeBounds::symmetric(3, 1.0);
    const VertexMatrix h = enumerate_h_vertices(b);
    CHECK(h.p() == 6);
    std::set<std::vector<double>> expect{{1, -1, 0}, {1, 0, -1}, {-1, 1, 0},
                                         {-1, 0, 1}, {0, 1, -1}, {0, -1, 1}};
    CHECK(column_set(h) == expect);
    for (int j = 0; j < h.p(); ++j)
      CHECK(is_feasible_extreme(h.columns.col(j), b));
  }

  SUBCASE("r=1: zero-sum forces the zero vertex") {
    const VertexMatrix h =
        enumerate_h_vertices(DerivativeBounds{vec({-1.0}), vec({1.0})});
    CHECK(h.p() == 1);
    CHECK(h.columns(0, 0) == 0.0);
  }

  SUBCASE("guard and empty manifold") {
    CHECK_THROWS_AS(enumerate_h_vertices(DerivativeBounds::symmetric(15, 1.0)),
                    DimensionGuard);
    CHECK_THROWS_AS(
        enumerate_h_vertices(DerivativeBounds{vec({0.1, 0.1}), vec({1.0, 1.0})}),
        EmptyManifold);
  }
}

TEST_CASE("vertex counts match the closed form for r = 1..11") {
  const std::int64_t expected[] = {1, 2, 6, 6, 30, 20, 140, 70, 630, 252, 2772};
  for (int r = 1; r <= 11; ++r) {
    CAPTURE(r);
    CHECK(count_h_vertices(r) == expected[r - 1]);
    const VertexMatrix h = enumerate_h_vertices(DerivativeBounds::symmetric(r, 1.0));
    CHECK(h.p() == expected[r - 1]);
  }
  CHECK_THROWS_AS(count_h_vertices(0), std::invalid_argument);
}

TEST_CASE("enumerated vertices satisfy bounds and zero sum, random bounds") {
  Rng rng(2024);
  for (int trial = 0; trial < 120; ++trial) {
    const int r = rng.uniform_int(2, 6);
    VectorXd lo(r), hi(r);
    for (int i = 0; i < r; ++i) {
      lo(i) = -rng.uniform(0.1, 2.0);
      hi(i) = rng.uniform(0.1, 2.0);
    }
    DerivativeBounds b{lo, hi};
    if (lo.sum() > 0.0 || hi.sum() < 0.0) continue;
    const VertexMatrix h = enumerate_h_vertices(b);
    for (int j = 0; j < h.p(); ++j) {
      const VectorXd v = h.columns.col(j);
      const double scale = std::max(1.0, v.lpNorm<Eigen::Infinity>());
      CHECK(std::abs(v.sum()) <= 1e-12 * scale);
      for (int i = 0; i < r; ++i) {
        CHECK(v(i) >= lo(i) - 1e-12 * scale);
        CHECK(v(i) <= hi(i) + 1e-12 * scale);
      }
    }
    for (int j = 0; j + 1 < h.p(); ++j) {
      const VectorXd a = h.columns.col(j), c = h.columns.col(j + 1);
      bool less = false;
      for (int i = 0; i < r; ++i) {
        if (a(i) != c(i)) {
          less = a(i) < c(i);
          break;
        }
      }
      CHECK(less);  // lexicographic column order
    }
  }
}

TEST_CASE("build_hbar") {
  SUBCASE("r=2 unit bounds coincides with H") {
    const DerivativeBounds b = DerivativeBounds::symmetric(2, 1.0);
    const VertexMatrix hbar = build_hbar(b);
    CHECK(hbar.kind == VertexKind::CircumscribingSimplex);
    CHECK(hbar.p() == 2);
    CHECK(column_set(hbar) == column_set(enumerate_h_vertices(b)));
  }

  SUBCASE("r=3 unit bounds: the triangle around the hexagon") {
    const VertexMatrix hbar = build_hbar(DerivativeBounds::symmetric(3, 1.0));
    std::set<std::vector<double>> expect{{2, -1, -1}, {-1, 2, -1}, {-1, -1, 2}};
    CHECK(column_set(hbar) == expect);
  }

  SUBCASE("always r columns, zero column sums for symmetric bounds") {
    Rng rng(55);
    for (int r = 2; r <= 16; ++r) {
      VectorXd d(r);
      for (int i = 0; i < r; ++i) d(i) = rng.uniform(0.1, 2.0);
      const VertexMatrix hbar = build_hbar(DerivativeBounds::symmetric(d));
      CHECK(hbar.p() == r);
      for (int j = 0; j < r; ++j)
        CHECK(std::abs(hbar.columns.col(j).sum()) <= 1e-12 * d.maxCoeff() * r);
    }
  }

  SUBCASE("degenerate bump") {
    CHECK_THROWS_AS(build_hbar(DerivativeBounds::symmetric(3, 0.0)),
                    DegenerateSimplex);
  }
}

TEST_CASE("barycentric_coordinates") {
  const VertexMatrix tri = build_hbar(DerivativeBounds::symmetric(3, 1.0));

  SUBCASE("hand-solved interior point") {
    const auto lambda = barycentric_coordinates(vec({1, -1, 0}), tri);
    REQUIRE(lambda.has_value());
    CHECK((*lambda - vec({2.0 / 3, 0.0, 1.0 / 3})).lpNorm<Eigen::Infinity>() <
          1e-12);
  }

  SUBCASE("simplex columns map to unit vectors") {
    for (int j = 0; j < 3; ++j) {
      const auto lambda = barycentric_coordinates(tri.columns.col(j), tri);
      REQUIRE(lambda.has_value());
      VectorXd unit = VectorXd::Zero(3);
      unit(j) = 1.0;
      CHECK((*lambda - unit).lpNorm<Eigen::Infinity>() < 1e-12);
    }
  }

  SUBCASE("centroid by symmetry") {
    const auto lambda = barycentric_coordinates(vec({0, 0, 0}), tri);
    REQUIRE(lambda.has_value());
    CHECK((*lambda - vec({1.0 / 3, 1.0 / 3, 1.0 / 3})).lpNorm<Eigen::Infinity>() <
          1e-12);
  }

  SUBCASE("point off the affine hull is rejected") {
    CHECK_FALSE(barycentric_coordinates(vec({1, 1, 1}), tri).has_value());
  }

  SUBCASE("requires a simplex") {
    const VertexMatrix h = enumerate_h_vertices(DerivativeBounds::symmetric(3, 1.0));
    CHECK_THROWS_AS(barycentric_coordinates(vec({0, 0, 0}), h),
                    std::invalid_argument);
  }
}

TEST_CASE("check_containment") {
  SUBCASE("symmetric equal bounds, r = 2..8") {
    for (int r = 2; r <= 8; ++r) {
      CAPTURE(r);
      const DerivativeBounds b = DerivativeBounds::symmetric(r, 0.7);
      const auto report =
          check_containment(enumerate_h_vertices(b), build_hbar(b), 1e-9);
      CHECK(report.contained);
    }
  }

  SUBCASE("simplex contains itself") {
    const VertexMatrix hbar = build_hbar(DerivativeBounds::symmetric(4, 1.0));
    CHECK(check_containment(hbar, hbar, 1e-9).contained);
  }

  SUBCASE("random symmetric non-equal bounds") {
    Rng rng(99);
    for (int trial = 0; trial < 120; ++trial) {
      const int r = rng.uniform_int(2, 6);
      VectorXd d(r);
      for (int i = 0; i < r; ++i) d(i) = rng.uniform(0.25, 2.5);
      const DerivativeBounds b = DerivativeBounds::symmetric(d);
      const auto report =
          check_containment(enumerate_h_vertices(b), build_hbar(b), 1e-9);
      CHECK(report.contained);
    }
  }

  SUBCASE("a shrunken simplex fails with per-column diagnostics") {
    const DerivativeBounds b = DerivativeBounds::symmetric(3, 1.0);
    const VertexMatrix h = enumerate_h_vertices(b);
    VertexMatrix small = build_hbar(b);
    small.columns *= 0.1;
    const auto report = check_containment(h, small, 1e-9);
    CHECK_FALSE(report.contained);
    CHECK(report.columns.size() == static_cast<std::size_t>(h.p()));
  }

  SUBCASE("dimension mismatch") {
    const VertexMatrix h2 = enumerate_h_vertices(DerivativeBounds::symmetric(2, 1.0));
    const VertexMatrix s3 = build_hbar(DerivativeBounds::symmetric(3, 1.0));
    CHECK_THROWS_AS(check_containment(h2, s3, 1e-9), DimensionMismatch);
  }
}

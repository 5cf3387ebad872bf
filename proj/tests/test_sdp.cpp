#include <doctest.h>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include "lpvstab/jacobi.hpp"
#include "lpvstab/lpvmodel.hpp"
#include "lpvstab/rng.hpp"
#include "lpvstab/sdp.hpp"

using namespace lpvstab;
using Eigen::MatrixXd;
using Eigen::VectorXd;

namespace {

PolytopicSystem single_vertex(const MatrixXd& a) {
  PolytopicSystem sys;
  sys.n = static_cast<int>(a.rows());
  sys.vertices = {a};
  return sys;
}

MatrixXd random_symmetric(int n, Rng& rng) {
  MatrixXd m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) m(i, j) = m(j, i) = rng.uniform(-2.0, 2.0);
  return m;
}

MatrixXd random_matrix(int n, Rng& rng) {
  MatrixXd m(n, n);
  for (int i = 0; i < n * n; ++i) m(i / n, i % n) = rng.uniform(-1.0, 1.0);
  return m;
}

}  // namespace

TEST_CASE("min_eig") {
  SUBCASE("diagonal and exchange matrices") {
    CHECK(min_eig(Eigen::Vector3d(3, 1, 2).asDiagonal().toDenseMatrix()) ==
          doctest::Approx(1.0).epsilon(1e-12));
    MatrixXd x(2, 2);
    x << 0, 1, 1, 0;
    CHECK(min_eig(x) == doctest::Approx(-1.0).epsilon(1e-12));
  }

  SUBCASE("reconstructed spectra from random orthogonal bases") {
    Rng rng(21);
    for (int trial = 0; trial < 50; ++trial) {
      const int n = rng.uniform_int(2, 12);
      VectorXd lam(n);
      for (int i = 0; i < n; ++i) lam(i) = rng.uniform(-5.0, 5.0);
      const Eigen::HouseholderQR<MatrixXd> qr(random_matrix(n, rng));
      const MatrixXd q = qr.householderQ();
      const MatrixXd s = q * lam.asDiagonal() * q.transpose();
      CHECK(min_eig(s) == doctest::Approx(lam.minCoeff())
                              .epsilon(1e-9 * std::max(1.0, s.norm())));
    }
  }

  SUBCASE("non-square input") {
    CHECK_THROWS_AS(min_eig(MatrixXd::Zero(2, 3)), DimensionMismatch);
  }
}

TEST_CASE("jacobi and Eigen eigenvalue paths agree to 1e-6 relative") {
  Rng rng(22);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = rng.uniform_int(1, 12);
    const MatrixXd s = random_symmetric(n, rng);
    const double jac = min_eig(s);
    Eigen::SelfAdjointEigenSolver<MatrixXd> es(s, Eigen::EigenvaluesOnly);
    const double ref = es.eigenvalues()(0);
    CHECK(std::abs(jac - ref) <= 1e-6 * std::max(1.0, std::abs(ref)));
  }
}

TEST_CASE("solve_feasibility on scalar toy problems") {
  SolveOptions opts;
  opts.max_iters = 200;

  SUBCASE("A = -I is certified") {
    const Outcome out =
        solve_feasibility(assemble_quadratic(single_vertex(-MatrixXd::Identity(1, 1))), opts);
    CHECK(out.status == SolveStatus::FeasibleCertified);
    CHECK(out.margin >= opts.epsilon);
    REQUIRE(out.assignment.size() == 1);
    CHECK(out.assignment[0](0, 0) > 0.0);
  }

  SUBCASE("A = +I can never be certified") {
    const Outcome out =
        solve_feasibility(assemble_quadratic(single_vertex(MatrixXd::Identity(1, 1))), opts);
    CHECK(out.status == SolveStatus::NotCertified);
  }

  SUBCASE("budget is respected") {
    SolveOptions tight;
    tight.max_iters = 3;
    const Outcome out = solve_feasibility(
        assemble_quadratic(single_vertex(MatrixXd::Identity(2, 2))), tight);
    CHECK(out.status == SolveStatus::NotCertified);
    CHECK(out.iters <= 3);
  }

  SUBCASE("options are validated") {
    SolveOptions bad;
    bad.epsilon = 0.0;
    CHECK_THROWS_AS(
        solve_feasibility(assemble_quadratic(single_vertex(-MatrixXd::Identity(1, 1))), bad),
        std::invalid_argument);
  }
}

TEST_CASE("verify_certificate") {
  const ConstraintSet cs = assemble_quadratic(single_vertex(-MatrixXd::Identity(3, 3)));

  SUBCASE("A = -I, P = I gives normalized margin exactly 1") {
    const MarginReport rep = verify_certificate(cs, {MatrixXd::Identity(3, 3)}, 1e-6);
    CHECK(rep.pass);
    CHECK(rep.min_margin == doctest::Approx(1.0).epsilon(1e-12));
    REQUIRE(rep.blocks.size() == 2);
    CHECK(rep.blocks[0].lambda_min == doctest::Approx(1.0));
    CHECK(rep.blocks[1].lambda_min == doctest::Approx(2.0));
  }

  SUBCASE("pass/fail is invariant under positive scaling") {
    for (double scale : {0.1, 1.0, 10.0, 1000.0}) {
      const MarginReport rep =
          verify_certificate(cs, {scale * MatrixXd::Identity(3, 3)}, 1e-6);
      CHECK(rep.pass);
    }
    const MarginReport bad = verify_certificate(cs, {-MatrixXd::Identity(3, 3)}, 1e-6);
    CHECK_FALSE(bad.pass);
  }

  SUBCASE("harder-set monotonicity: certificates survive block subsets") {
    Rng rng(31);
    PolytopicSystem sys;
    sys.n = 2;
    sys.vertices = {random_matrix(2, rng) - 3.0 * MatrixXd::Identity(2, 2),
                    random_matrix(2, rng) - 3.0 * MatrixXd::Identity(2, 2)};
    const ConstraintSet full = assemble_quadratic(sys);
    ConstraintSet subset = full;
    subset.blocks.pop_back();

    const Outcome out = solve_feasibility(full, SolveOptions{});
    REQUIRE(out.status == SolveStatus::FeasibleCertified);
    const MarginReport rep = verify_certificate(subset, out.assignment, 1e-6);
    CHECK(rep.pass);
    CHECK(rep.min_margin >= out.margin);
  }
}

TEST_CASE("solver is deterministic") {
  const PolytopicSystem sys =
      build_mdof_polytope(sample_configuration(2, 1, 33));
  const ConstraintSet cs = assemble_quadratic(sys);
  SolveOptions opts;
  const Outcome a = solve_feasibility(cs, opts);
  const Outcome b = solve_feasibility(cs, opts);
  CHECK(a.status == b.status);
  CHECK(a.iters == b.iters);
  CHECK(a.margin == b.margin);
  REQUIRE(a.assignment.size() == b.assignment.size());
  for (std::size_t i = 0; i < a.assignment.size(); ++i)
    CHECK((a.assignment[i] - b.assignment[i]).norm() == 0.0);
}

TEST_CASE("nominal MDOF chain certifies under the simplex PDLF") {
  // q=2, l=2, symmetric rates 0.5: the paper-style easy case.
  const PolytopicSystem sys = build_mdof_polytope(sample_configuration(2, 2, 1234));
  const DerivativeBounds b = DerivativeBounds::symmetric(sys.r(), 0.5);
  const ConstraintSet cs = assemble_pdlf(sys, build_hbar(b));
  const Outcome out = solve_feasibility(cs, SolveOptions{});
  CHECK(out.status == SolveStatus::FeasibleCertified);
  CHECK(verify_certificate(cs, out.assignment, 1e-6).pass);
}

TEST_CASE("mini soundness sweep over mixed toy sets") {
  Rng rng(41);
  int certified = 0;
  for (int trial = 0; trial < 60; ++trial) {
    const int n = rng.uniform_int(2, 3);
    const int r = rng.uniform_int(1, 2);
    const bool make_stable = trial % 2 == 0;
    PolytopicSystem sys;
    sys.n = n;
    for (int i = 0; i < r; ++i) {
      MatrixXd a = random_matrix(n, rng);
      if (make_stable) a -= 3.0 * MatrixXd::Identity(n, n);
      sys.vertices.push_back(a);
    }
    ConstraintSet cs;
    if (trial % 3 == 0) {
      cs = assemble_quadratic(sys);
    } else {
      const DerivativeBounds b = DerivativeBounds::symmetric(r, rng.uniform(0.1, 1.0));
      cs = trial % 3 == 1 ? assemble_pdlf(sys, build_hbar(b))
                          : assemble_pdlf(sys, enumerate_h_vertices(b));
    }
    SolveOptions opts;
    opts.max_iters = 300;
    opts.time_budget = 5.0;
    const Outcome out = solve_feasibility(cs, opts);
    if (out.status == SolveStatus::FeasibleCertified) {
      ++certified;
      CHECK(verify_certificate(cs, out.assignment, opts.epsilon).pass);
      for (const auto& a : sys.vertices) CHECK(is_hurwitz(a));
    }
  }
  CHECK(certified > 10);  // the stable half should mostly certify
}

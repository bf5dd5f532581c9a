// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <random>

#include <Eigen/LU>

#include "mhdfem/assembly.hpp"
#include "mhdfem/linsolve.hpp"

using namespace mhdfem;

namespace
{

SparseMatrix random_sparse(int n, std::mt19937 &rng)
{
  std::uniform_real_distribution<double> d(-1.0, 1.0);
  std::uniform_int_distribution<int> col(0, n - 1);
  Triplets t;
  for (int i = 0; i < n; ++i)
  {
    t.emplace_back(i, i, 8.0 + d(rng));
    for (int k = 0; k < 4; ++k)
    {
      t.emplace_back(i, col(rng), d(rng));
    }
  }
  SparseMatrix A(n, n);
  A.setFromTriplets(t.begin(), t.end());
  return A;
}

}  // namespace

TEST_CASE("identity system")
{
  SparseMatrix I(5, 5);
  I.setIdentity();
  const Eigen::VectorXd b = Eigen::VectorXd::LinSpaced(5, 1.0, 5.0);
  for (SolverMethod m : {SolverMethod::DirectLU, SolverMethod::GmresIlu})
  {
    SolverConfig cfg;
    cfg.method = m;
    CHECK((solve(I, b, cfg) - b).norm() <= 1e-14 * b.norm());
  }
}

TEST_CASE("zero right-hand side gives zero")
{
  std::mt19937 rng(1);
  const SparseMatrix A = random_sparse(20, rng);
  CHECK(solve(A, Eigen::VectorXd::Zero(20)).norm() == 0.0);
}

TEST_CASE("random nonsymmetric systems match a dense LU")
{
  std::mt19937 rng(5);
  for (SolverMethod m : {SolverMethod::DirectLU, SolverMethod::GmresIlu, SolverMethod::Auto})
  {
    CAPTURE(solver_method_name(m));
    const SparseMatrix A = random_sparse(50, rng);
    Eigen::VectorXd b(50);
    for (int i = 0; i < 50; ++i)
    {
      b(i) = std::sin(i + 1.0);
    }
    SolverConfig cfg;
    cfg.method = m;
    SolveReport rep;
    const Eigen::VectorXd x = solve(A, b, cfg, &rep);
    const Eigen::VectorXd ref = Eigen::MatrixXd(A).partialPivLu().solve(b);
    CHECK((x - ref).norm() <= 1e-10 * ref.norm());
    CHECK(rep.relative_residual <= 1e-12);
  }
}

TEST_CASE("mass matrix solve recovers an interpolant's moments")
{
  const auto mesh = std::make_shared<const Mesh>(build_unit_square_mesh(6));
  const FESpace Q(mesh, Family::Nedelec, 2);
  const SparseMatrix M = assemble_mass(Q);
  const Eigen::VectorXd c =
      interpolate(Q, VectorFn([](const Eigen::Vector3d &x) { return Eigen::Vector3d(x(1) * x(1), 1.0 - x(0), 0.0); }));
  const Eigen::VectorXd b = M * c;
  const Eigen::VectorXd x = solve(M, b);
  CHECK((x - c).norm() <= 1e-10 * c.norm());
}

TEST_CASE("factorization reuse for a sequence of nearby systems")
{
  std::mt19937 rng(9);
  const SparseMatrix A = random_sparse(200, rng);
  LinearSolver s;
  const Eigen::VectorXd b = Eigen::VectorXd::Ones(200);
  s.solve(A, b);
  CHECK(s.report().factorized);
  SparseMatrix A2 = A;
  A2.coeffs() *= 1.0 + 1e-4;
  A2.diagonal().array() += 1e-3;
  const Eigen::VectorXd x = s.solve(A2, b);
  CHECK_FALSE(s.report().factorized);
  CHECK((b - A2 * x).norm() <= 1e-12 * b.norm());
  // A different pattern forces a fresh factorization.
  const SparseMatrix A3 = random_sparse(200, rng);
  s.solve(A3, b);
  CHECK(s.report().factorized);
}

TEST_CASE("singular systems fail loudly")
{
  SparseMatrix A(3, 3);
  A.insert(0, 0) = 1.0;
  A.insert(1, 1) = 1.0;
  const Eigen::VectorXd b = Eigen::VectorXd::Ones(3);
  CHECK_THROWS_AS(solve(A, b), Error);
}

TEST_CASE("method names")
{
  CHECK(parse_solver_method("auto") == SolverMethod::Auto);
  CHECK(parse_solver_method("direct-lu") == SolverMethod::DirectLU);
  CHECK(parse_solver_method("gmres-ilu") == SolverMethod::GmresIlu);
  CHECK_THROWS_AS(parse_solver_method("cg"), Error);
  CHECK(std::string(solver_method_name(SolverMethod::GmresIlu)) == "gmres-ilu");
}

// SPDX-License-Identifier: Apache-2.0

#include "mhdfem/linsolve.hpp"

#include <Eigen/SparseLU>
#include <unsupported/Eigen/IterativeSolvers>

namespace mhdfem
{

namespace
{

using ColMatrix = Eigen::SparseMatrix<double, Eigen::ColMajor>;
using LU = Eigen::SparseLU<ColMatrix, Eigen::COLAMDOrdering<int>>;

// Applies a previously computed LU factorization as a preconditioner.
class LaggedLU
{
public:
  using Scalar = double;
  using RealScalar = double;
  using StorageIndex = int;
  enum
  {
    ColsAtCompileTime = Eigen::Dynamic,
    MaxColsAtCompileTime = Eigen::Dynamic
  };

  LaggedLU() = default;
  void set(const LU *lu) { lu_ = lu; }
  template <typename M>
  LaggedLU &analyzePattern(const M &)
  {
    return *this;
  }
  template <typename M>
  LaggedLU &factorize(const M &)
  {
    return *this;
  }
  template <typename M>
  LaggedLU &compute(const M &)
  {
    return *this;
  }
  template <typename R>
  Eigen::VectorXd solve(const R &b) const
  {
    return lu_->solve(b);
  }
  Eigen::ComputationInfo info() const { return Eigen::Success; }

private:
  const LU *lu_ = nullptr;
};

}  // namespace

SolverMethod parse_solver_method(const std::string &name)
{
  if (name == "auto")
  {
    return SolverMethod::Auto;
  }
  if (name == "direct-lu" || name == "direct")
  {
    return SolverMethod::DirectLU;
  }
  if (name == "gmres-ilu" || name == "gmres")
  {
    return SolverMethod::GmresIlu;
  }
  throw Error("unknown solver '" + name + "' (expected auto, direct-lu or gmres-ilu)");
}

const char *solver_method_name(SolverMethod m)
{
  switch (m)
  {
    case SolverMethod::Auto:
      return "auto";
    case SolverMethod::DirectLU:
      return "direct-lu";
    case SolverMethod::GmresIlu:
      return "gmres-ilu";
  }
  return "?";
}

struct LinearSolver::Impl
{
  LU lu;
  Eigen::Index rows = -1, nnz = -1;
  bool analyzed = false;
  bool factorized = false;
  bool stale = false;

  void factorize(const ColMatrix &A)
  {
    if (!analyzed || rows != A.rows() || nnz != A.nonZeros())
    {
      lu.analyzePattern(A);
      rows = A.rows();
      nnz = A.nonZeros();
      analyzed = true;
    }
    lu.factorize(A);
    if (lu.info() != Eigen::Success)
    {
      analyzed = factorized = false;
      throw Error("direct solve failed: " + lu.lastErrorMessage());
    }
    factorized = true;
    stale = false;
  }
};

LinearSolver::LinearSolver(SolverConfig cfg) : cfg_(cfg), impl_(std::make_unique<Impl>())
{
  if (!(cfg_.relative_residual_tol > 0.0))
  {
    throw Error("solver tolerance must be positive");
  }
}

LinearSolver::~LinearSolver() = default;
LinearSolver::LinearSolver(LinearSolver &&) noexcept = default;
LinearSolver &LinearSolver::operator=(LinearSolver &&) noexcept = default;

Eigen::VectorXd LinearSolver::solve(const SparseMatrix &A, const Eigen::VectorXd &b)
{
  if (A.rows() != A.cols())
  {
    throw Error("solve: matrix is not square");
  }
  if (b.size() != A.rows())
  {
    throw Error("solve: right-hand side has the wrong length");
  }
  SolverMethod method = cfg_.method;
  if (method == SolverMethod::Auto)
  {
    method = A.rows() <= cfg_.direct_limit ? SolverMethod::DirectLU : SolverMethod::GmresIlu;
  }
  report_ = {};
  report_.method = method;
  const double bnorm = b.norm();
  if (bnorm == 0.0)
  {
    return Eigen::VectorXd::Zero(b.size());
  }
  const double tol = cfg_.relative_residual_tol;
  const ColMatrix Ac(A);
  Eigen::VectorXd x;

  if (method == SolverMethod::DirectLU)
  {
    Impl &im = *impl_;
    const bool same_pattern = im.factorized && im.rows == Ac.rows() && im.nnz == Ac.nonZeros();
    bool done = false;
    if (cfg_.reuse_factorization && same_pattern && !im.stale)
    {
      LaggedLU pre;
      pre.set(&im.lu);
      Eigen::GMRES<ColMatrix, LaggedLU> gmres;
      gmres.preconditioner() = pre;
      gmres.set_restart(cfg_.restart);
      gmres.setMaxIterations(cfg_.refactor_iterations);
      gmres.setTolerance(0.5 * tol);
      gmres.compute(Ac);
      x = gmres.solve(b);
      report_.iterations = static_cast<int>(gmres.iterations());
      report_.relative_residual = (b - Ac * x).norm() / bnorm;
      done = report_.relative_residual <= tol;
      im.stale = report_.iterations > cfg_.refactor_iterations / 2;
    }
    if (!done)
    {
      im.factorize(Ac);
      report_.factorized = true;
      x = im.lu.solve(b);
      Eigen::VectorXd r = b - Ac * x;
      double rnorm = r.norm();
      int sweeps = 0;
      while (rnorm > tol * bnorm && sweeps < cfg_.refinement_steps)
      {
        x += im.lu.solve(r);
        r = b - Ac * x;
        const double next = r.norm();
        ++sweeps;
        const bool stagnates = next > 0.5 * rnorm;
        rnorm = next;
        if (stagnates)
        {
          break;
        }
      }
      report_.iterations = sweeps;
      report_.relative_residual = rnorm / bnorm;
    }
  }
  else
  {
    Eigen::GMRES<ColMatrix, Eigen::IncompleteLUT<double>> gmres;
    gmres.preconditioner().setDroptol(1e-4);
    gmres.preconditioner().setFillfactor(20);
    gmres.set_restart(cfg_.restart);
    gmres.setMaxIterations(cfg_.max_iterations);
    gmres.setTolerance(0.5 * tol);
    gmres.compute(Ac);
    if (gmres.info() == Eigen::NumericalIssue)
    {
      throw Error("ILU preconditioner setup failed (zero pivot)");
    }
    x = gmres.solve(b);
    report_.iterations = static_cast<int>(gmres.iterations());
    report_.relative_residual = (b - Ac * x).norm() / bnorm;
  }
  if (!(report_.relative_residual <= tol))
  {
    throw Error(std::string(solver_method_name(method)) + " did not reach the residual tolerance: " +
                std::to_string(report_.relative_residual) + " > " + std::to_string(tol) + " after " +
                std::to_string(report_.iterations) + " iterations");
  }
  return x;
}

Eigen::VectorXd solve(const SparseMatrix &A, const Eigen::VectorXd &b, const SolverConfig &cfg,
                      SolveReport *report)
{
  LinearSolver s(cfg);
  Eigen::VectorXd x = s.solve(A, b);
  if (report != nullptr)
  {
    *report = s.report();
  }
  return x;
}

}  // namespace mhdfem

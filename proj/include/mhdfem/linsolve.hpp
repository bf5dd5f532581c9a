// SPDX-License-Identifier: Apache-2.0

#ifndef MHDFEM_LINSOLVE_HPP
#define MHDFEM_LINSOLVE_HPP

#include <memory>
#include <string>

#include "mhdfem/fespace.hpp"

namespace mhdfem
{

enum class SolverMethod
{
  Auto,      // direct up to direct_limit unknowns, GMRES above
  DirectLU,
  GmresIlu
};

SolverMethod parse_solver_method(const std::string &name);
const char *solver_method_name(SolverMethod m);

struct SolverConfig
{
  SolverMethod method = SolverMethod::Auto;
  double relative_residual_tol = 1e-12;
  int max_iterations = 2000;
  int restart = 50;
  Eigen::Index direct_limit = 300000;
  int refinement_steps = 10;
  // Direct path: keep the last factorization and use it to precondition GMRES
  // on later systems with the same pattern; refactorize when more than
  // refactor_iterations iterations would be needed.
  bool reuse_factorization = true;
  int refactor_iterations = 20;
};

struct SolveReport
{
  SolverMethod method = SolverMethod::DirectLU;
  double relative_residual = 0.0;
  int iterations = 0;  // refinement sweeps (direct) or GMRES iterations
  bool factorized = false;  // a new factorization was computed
};

//
// Sparse solver for a sequence of systems sharing one pattern. The direct path
// computes the fill-reducing ordering once and refactorizes numerically.
// Throws Error when the residual contract ||b - Ax|| <= tol ||b|| cannot be met.
//
class LinearSolver
{
public:
  explicit LinearSolver(SolverConfig cfg = {});
  ~LinearSolver();
  LinearSolver(LinearSolver &&) noexcept;
  LinearSolver &operator=(LinearSolver &&) noexcept;

  Eigen::VectorXd solve(const SparseMatrix &A, const Eigen::VectorXd &b);
  const SolveReport &report() const { return report_; }
  const SolverConfig &config() const { return cfg_; }

private:
  struct Impl;
  SolverConfig cfg_;
  SolveReport report_;
  std::unique_ptr<Impl> impl_;
};

// One-shot solve.
Eigen::VectorXd solve(const SparseMatrix &A, const Eigen::VectorXd &b, const SolverConfig &cfg = {},
                      SolveReport *report = nullptr);

}  // namespace mhdfem

#endif  // MHDFEM_LINSOLVE_HPP

// SPDX-License-Identifier: Apache-2.0

#ifndef MHDFEM_TIMELOOP_HPP
#define MHDFEM_TIMELOOP_HPP

#include <functional>
#include <iosfwd>
#include <optional>
#include <vector>

#include "mhdfem/assembly.hpp"
#include "mhdfem/linsolve.hpp"

namespace mhdfem
{

struct State
{
  int n = 0;
  double t = 0.0;
  Eigen::VectorXd u, p, B;
};

// One ledger row. Magnetic quantities carry the weight kL/kI so that the
// discrete identity  kin + mag + viscous + ohmic = kin_prev + mag_prev + work
// holds for every coefficient set. BDF2 rows leave the dissipation columns at NaN.
struct EnergyRecord
{
  int n = 0;
  double t = 0.0;
  double kinetic = 0.0;
  double magnetic = 0.0;
  double viscous = 0.0;
  double ohmic = 0.0;
  double work = 0.0;
  double identity_residual = 0.0;
  double weak_div = 0.0;
  double steady_rel = 0.0;

  double total() const { return kinetic + magnetic; }
};

// Boundary data, sources and initial fields. Empty callables mean zero.
struct ProblemData
{
  TimeVectorFn u_boundary;
  TimeVectorFn B_boundary;
  TimeVectorFn f;
  TimeVectorFn g;
  VectorFn u0;
  VectorFn B0;
  TimeScalarFn p_pin;
  // False when boundary data and sources do not depend on t (they are then evaluated once).
  bool time_dependent = true;
};

class TimeStepper
{
public:
  TimeStepper(MhdOperator &op, ProblemData data, SolverConfig solver = {});

  MhdOperator &op() { return op_; }
  const ProblemData &data() const { return data_; }
  const SolveReport &last_solve() const { return solver_.report(); }

  // u0 = Pi u0, B0 = Pi B0, optionally projected to be orthogonal to discrete gradients, p = 0.
  State initialize(bool clean_divergence);
  // Makes B orthogonal (in M2) to the gradients of the free potential DOFs.
  Eigen::VectorXd clean_divergence(const Eigen::VectorXd &B) const;

  State step_backward_euler(const State &prev, EnergyRecord *record = nullptr);
  State step_bdf2(const State &prev, const State &prev2, EnergyRecord *record = nullptr);

  // max_i |(B, grad phi_i)| over potential DOFs not fixed by essential B data.
  double weak_divergence_norm(const Eigen::VectorXd &B) const;
  // Sum of relative L2 changes of u, p and B between two states.
  double steady_indicator(const State &now, const State &before) const;

private:
  struct LevelData
  {
    Eigen::VectorXd F, G, u_bc, B_bc;
    double p_pin = 0.0;
  };
  const LevelData &level(double t);
  State solve_step(const StepInput &in, double t, int n);
  void energy(const State &now, const State &prev, const LevelData &lv, bool full,
              EnergyRecord &rec) const;

  MhdOperator &op_;
  ProblemData data_;
  LinearSolver solver_;
  SparseMatrix Mp_;
  std::vector<int> free_potential_;
  LevelData cache_;
  double cache_t_ = -1.0;
  bool cache_valid_ = false;
};

struct RunOptions
{
  double t_final = 1.0;
  bool bdf2 = false;
  bool clean_divergence = true;
  double steady_tol = 0.0;  // stop when the steady indicator drops below this (0: never)
  // Called after every step and once for the initial state (record == nullptr).
  std::function<void(const State &, const EnergyRecord *)> observer;
};

struct RunSummary
{
  State initial;
  State final;
  std::vector<EnergyRecord> ledger;
  bool stopped_steady = false;
  double max_solver_residual = 0.0;
};

// Number of steps T / tau; throws if it is not an integer.
int step_count(double t_final, double tau);

RunSummary run(TimeStepper &stepper, const RunOptions &options);

inline constexpr const char *kLedgerHeader =
    "n,t,kinetic,magnetic,viscous,ohmic,work,identity_residual,weak_div,steady_rel";
void write_ledger_csv(std::ostream &os, const std::vector<EnergyRecord> &ledger);

}  // namespace mhdfem

#endif  // MHDFEM_TIMELOOP_HPP

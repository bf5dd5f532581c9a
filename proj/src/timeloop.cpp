// SPDX-License-Identifier: Apache-2.0

#include "mhdfem/timeloop.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>

#include <Eigen/SparseCholesky>

namespace mhdfem
{

namespace
{

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double mass_norm(const SparseMatrix &M, const Eigen::VectorXd &x)
{
  return std::sqrt(std::max(0.0, x.dot(M * x)));
}

double relative_change(const SparseMatrix &M, const Eigen::VectorXd &now, const Eigen::VectorXd &before)
{
  const double d = mass_norm(M, now - before);
  const double n = mass_norm(M, now);
  if (n == 0.0)
  {
    return d == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
  }
  return d / n;
}

}  // namespace

TimeStepper::TimeStepper(MhdOperator &op, ProblemData data, SolverConfig solver)
    : op_(op), data_(std::move(data)), solver_(solver), Mp_(assemble_mass(op.pressure()))
{
  std::vector<char> fixed(op_.potential().num_dofs(), 0);
  if (op_.options().b_sides != 0)
  {
    for (int i : op_.potential().boundary_dofs(op_.options().b_sides))
    {
      fixed[i] = 1;
    }
  }
  for (int i = 0; i < static_cast<int>(fixed.size()); ++i)
  {
    if (!fixed[i])
    {
      free_potential_.push_back(i);
    }
  }
}

const TimeStepper::LevelData &TimeStepper::level(double t)
{
  if (cache_valid_ && (!data_.time_dependent || cache_t_ == t))
  {
    return cache_;
  }
  const MhdOperator &op = op_;
  LevelData &lv = cache_;
  lv.F = data_.f ? assemble_load(op.velocity(), data_.f, t) : Eigen::VectorXd();
  lv.G = data_.g ? assemble_load(op.magnetic(), data_.g, t) : Eigen::VectorXd();
  if (data_.u_boundary && !op.constrained_u().empty())
  {
    lv.u_bc = interpolate(op.velocity(), VectorFn([&](const Eigen::Vector3d &x) { return data_.u_boundary(x, t); }));
  }
  else
  {
    lv.u_bc.resize(0);
  }
  if (data_.B_boundary && !op.constrained_b().empty())
  {
    lv.B_bc = interpolate(op.magnetic(), VectorFn([&](const Eigen::Vector3d &x) { return data_.B_boundary(x, t); }));
  }
  else
  {
    lv.B_bc.resize(0);
  }
  lv.p_pin = 0.0;
  if (data_.p_pin && op.pin_dof() >= 0)
  {
    lv.p_pin = data_.p_pin(op.options().pin_point, t);
  }
  cache_t_ = t;
  cache_valid_ = true;
  return lv;
}

Eigen::VectorXd TimeStepper::clean_divergence(const Eigen::VectorXd &B) const
{
  const SparseMatrix &G = op_.gradient_map();
  const SparseMatrix GtM = G.transpose() * op_.M2();
  const SparseMatrix L = GtM * G;
  const Eigen::VectorXd rhs = GtM * B;

  // Without essential B data the potential is fixed up to a constant: drop DOF 0.
  std::vector<int> unknowns = free_potential_;
  if (op_.options().b_sides == 0 && !unknowns.empty())
  {
    unknowns.erase(unknowns.begin());
  }
  const auto nv = static_cast<int>(op_.potential().num_dofs());
  std::vector<int> index(nv, -1);
  for (int k = 0; k < static_cast<int>(unknowns.size()); ++k)
  {
    index[unknowns[k]] = k;
  }
  Triplets trip;
  for (int r = 0; r < L.outerSize(); ++r)
  {
    if (index[r] < 0)
    {
      continue;
    }
    for (SparseMatrix::InnerIterator it(L, r); it; ++it)
    {
      if (index[it.col()] >= 0)
      {
        trip.emplace_back(index[r], index[it.col()], it.value());
      }
    }
  }
  Eigen::SparseMatrix<double> Lr(static_cast<Eigen::Index>(unknowns.size()),
                                 static_cast<Eigen::Index>(unknowns.size()));
  Lr.setFromTriplets(trip.begin(), trip.end());
  Eigen::VectorXd br(unknowns.size());
  for (std::size_t k = 0; k < unknowns.size(); ++k)
  {
    br(static_cast<Eigen::Index>(k)) = rhs(unknowns[k]);
  }
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt(Lr);
  if (ldlt.info() != Eigen::Success)
  {
    throw Error("divergence cleaning: potential problem is singular");
  }
  const Eigen::VectorXd sr = ldlt.solve(br);
  Eigen::VectorXd s = Eigen::VectorXd::Zero(nv);
  for (std::size_t k = 0; k < unknowns.size(); ++k)
  {
    s(unknowns[k]) = sr(static_cast<Eigen::Index>(k));
  }
  return B - G * s;
}

State TimeStepper::initialize(bool clean)
{
  State s;
  const VectorFn zero = [](const Eigen::Vector3d &) { return Eigen::Vector3d::Zero().eval(); };
  s.u = interpolate(op_.velocity(), data_.u0 ? data_.u0 : zero);
  s.B = interpolate(op_.magnetic(), data_.B0 ? data_.B0 : zero);
  if (clean)
  {
    s.B = clean_divergence(s.B);
  }
  s.p = Eigen::VectorXd::Zero(op_.pressure().num_dofs());
  return s;
}

State TimeStepper::solve_step(const StepInput &in, double t, int n)
{
  op_.build(in);
  const Eigen::VectorXd x = solver_.solve(op_.matrix(), op_.rhs());
  State s;
  s.n = n;
  s.t = t;
  op_.split(x, s.u, s.p, s.B);
  return s;
}

void TimeStepper::energy(const State &now, const State &prev, const LevelData &lv, bool full,
                         EnergyRecord &rec) const
{
  const Coefficients &k = op_.options().coeffs;
  const double w = k.magnetic_weight();
  const double tau = op_.options().tau;
  rec.n = now.n;
  rec.t = now.t;
  rec.kinetic = now.u.dot(op_.M1() * now.u);
  rec.magnetic = w * now.B.dot(op_.M2() * now.B);
  rec.weak_div = weak_divergence_norm(now.B);
  rec.steady_rel = steady_indicator(now, prev);
  if (!full)
  {
    rec.viscous = rec.ohmic = rec.work = rec.identity_residual = kNaN;
    return;
  }
  const Eigen::VectorXd ubar = 0.5 * (now.u + prev.u);
  const Eigen::VectorXd Bbar = 0.5 * (now.B + prev.B);
  rec.viscous = 2.0 * tau * k.viscous * ubar.dot(op_.K1() * ubar);
  rec.ohmic = 2.0 * tau * w * k.diffusion * Bbar.dot(op_.K2() * Bbar);
  double work = 0.0;
  if (lv.F.size() > 0)
  {
    work += ubar.dot(lv.F);
  }
  if (lv.G.size() > 0)
  {
    work += w * Bbar.dot(lv.G);
  }
  rec.work = 2.0 * tau * work;
  const double before = prev.u.dot(op_.M1() * prev.u) + w * prev.B.dot(op_.M2() * prev.B);
  rec.identity_residual = std::abs(rec.kinetic + rec.magnetic + rec.viscous + rec.ohmic - before - rec.work);
}

State TimeStepper::step_backward_euler(const State &prev, EnergyRecord *record)
{
  const int n = prev.n + 1;
  const double t = n * op_.options().tau;
  const LevelData &lv = level(t);
  StepInput in;
  in.scheme = Scheme::BackwardEuler;
  in.u1 = &prev.u;
  in.B1 = &prev.B;
  in.F = lv.F.size() > 0 ? &lv.F : nullptr;
  in.G = lv.G.size() > 0 ? &lv.G : nullptr;
  in.u_bc = lv.u_bc.size() > 0 ? &lv.u_bc : nullptr;
  in.B_bc = lv.B_bc.size() > 0 ? &lv.B_bc : nullptr;
  in.p_pin = lv.p_pin;
  State s = solve_step(in, t, n);
  if (record != nullptr)
  {
    energy(s, prev, lv, true, *record);
  }
  return s;
}

State TimeStepper::step_bdf2(const State &prev, const State &prev2, EnergyRecord *record)
{
  const int n = prev.n + 1;
  const double t = n * op_.options().tau;
  const LevelData &lv = level(t);
  StepInput in;
  in.scheme = Scheme::Bdf2;
  in.u1 = &prev.u;
  in.B1 = &prev.B;
  in.u2 = &prev2.u;
  in.B2 = &prev2.B;
  in.F = lv.F.size() > 0 ? &lv.F : nullptr;
  in.G = lv.G.size() > 0 ? &lv.G : nullptr;
  in.u_bc = lv.u_bc.size() > 0 ? &lv.u_bc : nullptr;
  in.B_bc = lv.B_bc.size() > 0 ? &lv.B_bc : nullptr;
  in.p_pin = lv.p_pin;
  State s = solve_step(in, t, n);
  if (record != nullptr)
  {
    energy(s, prev, lv, false, *record);
  }
  return s;
}

double TimeStepper::weak_divergence_norm(const Eigen::VectorXd &B) const
{
  const Eigen::VectorXd r = op_.gradient_map().transpose() * (op_.M2() * B);
  double m = 0.0;
  for (int i : free_potential_)
  {
    m = std::max(m, std::abs(r(i)));
  }
  return m;
}

double TimeStepper::steady_indicator(const State &now, const State &before) const
{
  return relative_change(op_.M1(), now.u, before.u) + relative_change(Mp_, now.p, before.p) +
         relative_change(op_.M2(), now.B, before.B);
}

int step_count(double t_final, double tau)
{
  if (!(tau > 0.0) || !(t_final > 0.0))
  {
    throw Error("time step and final time must be positive");
  }
  const double ratio = t_final / tau;
  const double n = std::round(ratio);
  if (std::abs(ratio - n) > 1e-9 * std::max(1.0, ratio))
  {
    throw Error("final time " + std::to_string(t_final) + " is not an integer multiple of tau " +
                std::to_string(tau));
  }
  return static_cast<int>(n);
}

RunSummary run(TimeStepper &stepper, const RunOptions &options)
{
  const int N = step_count(options.t_final, stepper.op().options().tau);
  RunSummary out;
  out.initial = stepper.initialize(options.clean_divergence);
  if (options.observer)
  {
    options.observer(out.initial, nullptr);
  }
  State prev2;
  State prev = out.initial;
  for (int n = 1; n <= N; ++n)
  {
    EnergyRecord rec;
    State next = (options.bdf2 && n >= 2) ? stepper.step_bdf2(prev, prev2, &rec)
                                          : stepper.step_backward_euler(prev, &rec);
    out.max_solver_residual = std::max(out.max_solver_residual, stepper.last_solve().relative_residual);
    out.ledger.push_back(rec);
    if (options.observer)
    {
      options.observer(next, &out.ledger.back());
    }
    prev2 = std::move(prev);
    prev = std::move(next);
    if (options.steady_tol > 0.0 && n >= 2 && rec.steady_rel < options.steady_tol)
    {
      out.stopped_steady = true;
      break;
    }
  }
  out.final = std::move(prev);
  return out;
}

void write_ledger_csv(std::ostream &os, const std::vector<EnergyRecord> &ledger)
{
  const auto flags = os.flags();
  const auto prec = os.precision(17);
  os << kLedgerHeader << '\n';
  for (const EnergyRecord &r : ledger)
  {
    os << r.n << ',' << r.t << ',' << r.kinetic << ',' << r.magnetic << ',' << r.viscous << ',' << r.ohmic
       << ',' << r.work << ',' << r.identity_residual << ',' << r.weak_div << ',' << r.steady_rel << '\n';
  }
  os.precision(prec);
  os.flags(flags);
}

}  // namespace mhdfem

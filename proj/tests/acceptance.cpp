// SPDX-License-Identifier: Apache-2.0
//
// Acceptance suite: one PASS/FAIL line per criterion. Pass criterion numbers
// as arguments to run a subset. Exit status is nonzero if any selected
// criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <functional>
#include <iostream>
#include <random>
#include <set>
#include <sstream>
#include <string>

#include "dense_oracle.hpp"
#include "mhdfem/cases.hpp"

using namespace mhdfem;

namespace
{

struct Outcome
{
  bool pass = false;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::string fmt(const char *f, ...) __attribute__((format(printf, 1, 2)));
std::string fmt(const char *f, ...)
{
  char buf[512];
  va_list ap;
  va_start(ap, f);
  std::vsnprintf(buf, sizeof buf, f, ap);
  va_end(ap);
  return buf;
}

CaseOptions quiet()
{
  CaseOptions o;
  o.write_outputs = false;
  return o;
}

ProblemConfig decay_config(double tau, int steps)
{
  ProblemConfig c = default_config(CaseId::Decay);
  c.M = 16;
  c.tau = tau;
  c.t_final = tau * steps;
  return c;
}

Eigen::VectorXd random_vector(Eigen::Index n, std::mt19937 &rng)
{
  std::uniform_real_distribution<double> d(-1.0, 1.0);
  Eigen::VectorXd v(n);
  for (Eigen::Index i = 0; i < n; ++i)
  {
    v(i) = d(rng);
  }
  return v;
}

// 1. Energy identity along the decay test.
Outcome energy_identity()
{
  const auto t0 = Clock::now();
  const CaseResult r = run_case(decay_config(0.01, 200), quiet());
  const double secs = seconds_since(t0);
  double worst = 0.0;
  for (const EnergyRecord &e : r.run.ledger)
  {
    worst = std::max(worst, e.identity_residual / e.total());
  }
  const bool ok = r.run.ledger.size() == 200 && worst <= 1e-9 && secs < 60.0;
  return {ok, fmt("max identity_residual/energy = %.3e over %zu steps (<= 1e-9), runtime %.1f s (< 60 s)", worst,
                  r.run.ledger.size(), secs)};
}

// 2. Energy never increases for tau in {1, 0.1, 0.01}.
Outcome energy_stability()
{
  std::string detail;
  bool ok = true;
  for (double tau : {1.0, 0.1, 0.01})
  {
    const CaseResult r = run_case(decay_config(tau, 200), quiet());
    int increases = 0;
    // Initial energy recovered from the first row's balance.
    const EnergyRecord &first = r.run.ledger.front();
    double prev = first.total() + first.viscous + first.ohmic - first.work;
    for (const EnergyRecord &e : r.run.ledger)
    {
      if (e.total() > prev)
      {
        ++increases;
      }
      prev = e.total();
    }
    ok = ok && increases == 0;
    detail += fmt("tau=%g: %d increases in %zu steps (E_end %.3e); ", tau, increases, r.run.ledger.size(),
                  r.run.ledger.back().total());
  }
  detail.resize(detail.size() - 2);
  return {ok, detail};
}

// 3. Weak divergence stays at solver level along the decay test.
Outcome weak_divergence()
{
  ProblemConfig cfg = decay_config(0.01, 200);
  const auto mesh = std::make_shared<const Mesh>(build_unit_square_mesh(cfg.M));
  MhdOperator op(mesh, cfg.order_b, cfg.system_options());
  TimeStepper ts(op, make_problem_data(cfg, nullptr), cfg.solver);
  RunOptions ro;
  ro.t_final = cfg.t_final;
  ro.clean_divergence = true;
  double worst = 0.0;
  int count = 0;
  ro.observer = [&](const State &s, const EnergyRecord *) {
    worst = std::max(worst, ts.weak_divergence_norm(s.B));
    ++count;
  };
  run(ts, ro);
  return {worst <= 1e-10 && count == 201,
          fmt("max_i |(B^n, grad phi_i)| = %.3e over n = 0..%d (<= 1e-10)", worst, count - 1)};
}

// 4. Skew convection and the positive quadratic form of the coupled matrix.
Outcome skew_and_cancellation()
{
  std::mt19937 rng(2024);
  double worst_skew = 0.0, worst_form = 0.0;
  for (int dim : {2, 3})
  {
    SystemOptions o;
    o.coeffs = {0.37, 1.9, 0.23, 0.71};
    o.tau = 0.03;
    o.dirichlet_u = false;
    o.pressure = PressureMode::None;
    const auto mesh = std::make_shared<const Mesh>(dim == 2 ? build_unit_square_mesh(4) : build_unit_cube_mesh(4));
    MhdOperator op(mesh, 1, o);
    const DofLayout &L = op.layout();
    const double w = o.coeffs.magnetic_weight();
    for (int trial = 0; trial < 100; ++trial)
    {
      const Eigen::VectorXd u1 = random_vector(L.nu, rng);
      const Eigen::VectorXd B1 = random_vector(L.nb, rng);
      StepInput in;
      in.u1 = &u1;
      in.B1 = &B1;
      op.build(in);
      const Eigen::VectorXd x = random_vector(L.size(), rng);
      const Eigen::VectorXd u = x.head(L.nu);
      const Eigen::VectorXd B = x.segment(L.b0(), L.nb);
      worst_skew = std::max(worst_skew, std::abs(u.dot(op.N1() * u)) / u.squaredNorm());
      Eigen::VectorXd Dx = x;
      Dx.segment(L.b0(), L.nb) *= w;
      const double lhs = Dx.dot(op.matrix() * x);
      const double rhs = u.dot(op.M1() * u) / o.tau + 0.5 * o.coeffs.viscous * u.dot(op.K1() * u) +
                         w * (B.dot(op.M2() * B) / o.tau + 0.5 * o.coeffs.diffusion * B.dot(op.K2() * B));
      worst_form = std::max(worst_form, std::abs(lhs - rhs) / rhs);
    }
  }
  return {worst_skew <= 1e-13 && worst_form <= 1e-12,
          fmt("max |x'N1 x|/|x|^2 = %.2e (<= 1e-13), max relative quadratic-form mismatch = %.2e (<= 1e-12), "
              "200 trials in 2D and 3D",
              worst_skew, worst_form)};
}

// 5. One step against a dense assembly and dense solve.
Outcome dense_equivalence()
{
  std::mt19937 rng(5);
  double worst[2] = {0.0, 0.0};
  for (int order : {1, 2})
  {
    for (int scheme = 0; scheme < 2; ++scheme)
    {
      const bool bdf2 = scheme == 1;
      SystemOptions o;
      o.coeffs = Coefficients::from_numbers(2.0, 3.0, 0.5);
      o.tau = 0.1;
      o.b_sides = 0xF;
      const auto mesh = std::make_shared<const Mesh>(build_unit_square_mesh(2));
      MhdOperator op(mesh, order, o);
      oracle::Step st;
      st.bdf2 = bdf2;
      st.t = 0.2;
      st.u1 = random_vector(op.velocity().num_dofs(), rng);
      st.B1 = random_vector(op.magnetic().num_dofs(), rng);
      st.u2 = random_vector(op.velocity().num_dofs(), rng);
      st.B2 = random_vector(op.magnetic().num_dofs(), rng);
      st.f = [](const Eigen::Vector3d &x, double t) { return Eigen::Vector3d(1.0 + x(1) * t, x(0) * x(0), 0.0); };
      st.g = [](const Eigen::Vector3d &x, double) { return Eigen::Vector3d(x(0) - x(1), 2.0 * x(1), 0.0); };
      st.u_bc = random_vector(op.velocity().num_dofs(), rng);
      st.B_bc = random_vector(op.magnetic().num_dofs(), rng);
      const oracle::Result ref = oracle::solve_step(*mesh, op.velocity(), op.pressure(), op.magnetic(), o, st);
      const Eigen::VectorXd F = assemble_load(op.velocity(), st.f, st.t);
      const Eigen::VectorXd G = assemble_load(op.magnetic(), st.g, st.t);
      StepInput in;
      in.scheme = bdf2 ? Scheme::Bdf2 : Scheme::BackwardEuler;
      in.u1 = &st.u1;
      in.B1 = &st.B1;
      in.u2 = &st.u2;
      in.B2 = &st.B2;
      in.F = &F;
      in.G = &G;
      in.u_bc = &st.u_bc;
      in.B_bc = &st.B_bc;
      op.build(in);
      Eigen::VectorXd u, p, B;
      op.split(solve(op.matrix(), op.rhs()), u, p, B);
      const double d = std::max({(u - ref.u).cwiseAbs().maxCoeff(), (p - ref.p).cwiseAbs().maxCoeff(),
                                 (B - ref.B).cwiseAbs().maxCoeff()});
      worst[scheme] = std::max(worst[scheme], d);
    }
  }
  return {worst[0] <= 1e-10 && worst[1] <= 1e-10,
          fmt("M=2, magnetic orders 1 and 2: max coefficient difference backward Euler %.2e, BDF2 %.2e (<= 1e-10)",
              worst[0], worst[1])};
}

// 6. Lowest-order 3D manufactured solution.
Outcome table_3d()
{
  const ProblemConfig base = default_config(CaseId::Mms3d);
  const std::vector<ConvergenceRow> rows = convergence_study(base, {4, 8}, TauRule::Linear, 0.5, quiet());
  const double paper[2] = {6.4876e-3, 3.3178e-3};
  bool ok = true;
  for (int i = 0; i < 2; ++i)
  {
    const double ratio = rows[i].err_u_l2 / paper[i];
    ok = ok && ratio <= 2.0 && ratio >= 0.5;
  }
  const ConvergenceRow &r = rows[1];
  ok = ok && r.order_u >= 0.9 && r.order_p >= 0.9 && r.order_B >= 0.9;
  return {ok, fmt("L2(u) %.4e / %.4e (reference 6.4876e-3 / 3.3178e-3), orders u %.3f p %.3f B %.3f (>= 0.9); "
                  "L2(p) %.4e / %.4e, L2(B) %.4e / %.4e",
                  rows[0].err_u_l2, rows[1].err_u_l2, r.order_u, r.order_p, r.order_B, rows[0].err_p_l2,
                  rows[1].err_p_l2, rows[0].err_B_l2, rows[1].err_B_l2)};
}

// 7. Second-order spatial convergence in 2D.
Outcome spatial_order_2d()
{
  const ProblemConfig base = default_config(CaseId::Mms2d);
  const std::vector<ConvergenceRow> rows = convergence_study(base, {8, 16, 32}, TauRule::Quadratic, 1.0, quiet());
  bool ok = true;
  for (std::size_t i = 1; i < rows.size(); ++i)
  {
    ok = ok && rows[i].order_u >= 1.9 && rows[i].order_B >= 1.9;
  }
  return {ok, fmt("tau = 1/M^2, M = 8/16/32: orders u %.3f, %.3f; B %.3f, %.3f (>= 1.9); p %.3f, %.3f",
                  rows[1].order_u, rows[2].order_u, rows[1].order_B, rows[2].order_B, rows[1].order_p,
                  rows[2].order_p)};
}

// 8. Second-order convergence in time of the three-level scheme.
Outcome temporal_order()
{
  ProblemConfig base = default_config(CaseId::Mms2d);
  base.solution = "poly";
  base.M = 32;
  base.t_final = 1.0;
  base.bdf2 = true;
  const std::vector<ConvergenceRow> rows = temporal_study(base, {0.1, 0.05, 0.025}, quiet());
  double e[3], order[2];
  for (int i = 0; i < 3; ++i)
  {
    e[i] = rows[i].err_u_l2 + rows[i].err_B_l2;
  }
  for (int i = 0; i < 2; ++i)
  {
    order[i] = observed_order(e[i], e[i + 1]);
  }
  return {order[0] >= 1.8 && order[1] >= 1.8,
          fmt("M=32, tau = 1/10, 1/20, 1/40: L2(u)+L2(B) = %.3e, %.3e, %.3e; orders %.3f, %.3f (>= 1.8)", e[0], e[1],
              e[2], order[0], order[1])};
}

// 9. Hartmann flow.
Outcome hartmann()
{
  const ProblemConfig cfg = default_config(CaseId::Hartmann);
  const auto t0 = Clock::now();
  const std::unique_ptr<ExactSolution> exact = make_exact(cfg);
  const auto mesh = std::make_shared<const Mesh>(build_unit_square_mesh(cfg.M));
  MhdOperator op(mesh, cfg.order_b, cfg.system_options());
  TimeStepper ts(op, make_problem_data(cfg, exact.get()), cfg.solver);
  RunOptions ro;
  ro.t_final = cfg.t_final;
  ro.clean_divergence = cfg.clean_divergence;
  const RunSummary s = run(ts, ro);
  const double secs = seconds_since(t0);
  const double err = error_norms(op.velocity(), s.final.u, *exact, Field::Velocity, s.final.t).l2;
  const double norm =
      error_norms(op.velocity(), Eigen::VectorXd::Zero(op.velocity().num_dofs()), *exact, Field::Velocity, 0.0).l2;
  const double u_mid = evaluate(op.velocity(), s.final.u, Eigen::Vector3d(0.5, 0.0, 0.0))(0);
  double profile = 0.0;
  for (int i = 0; i <= 100; ++i)
  {
    const double y = i / 100.0;
    profile = std::max(profile, std::abs(evaluate(op.velocity(), s.final.u, Eigen::Vector3d(0.5, y, 0.0))(0) -
                                         HartmannSolution::u1(y)));
  }
  const bool ok = s.ledger.size() == 2000 && err / norm <= 1e-3 && std::abs(u_mid - 0.122459) <= 1e-3 && profile <= 1e-3 && secs < 600.0;
  return {ok, fmt("relative L2(u) %.3e (<= 1e-3), u1(0.5,0) = %.6f vs 0.122459, max profile deviation on x=0.5 "
                  "%.2e, t=%.2f after %zu steps, runtime %.0f s (< 600 s)",
                  err / norm, u_mid, profile, s.final.t, s.ledger.size(), secs)};
}

// 10. Lid-driven cavity.
Outcome cavity()
{
  const ProblemConfig cfg = default_config(CaseId::Cavity3d);
  const auto t0 = Clock::now();
  const CaseResult r = run_case(cfg, quiet());
  const double secs = seconds_since(t0);
  const std::vector<EnergyRecord> &L = r.run.ledger;
  double emax = 0.0;
  bool finite = true;
  for (const EnergyRecord &e : L)
  {
    finite = finite && std::isfinite(e.total()) && std::isfinite(e.steady_rel);
    emax = std::max(emax, e.total());
  }
  const double e0 = L.front().total();
  int increases = 0;
  double first_t = -1.0, last_t = -1.0;
  for (std::size_t i = 1; i < L.size(); ++i)
  {
    if (L[i - 1].t >= 1.0 - 1e-12 && !(L[i].steady_rel < L[i - 1].steady_rel))
    {
      ++increases;
      if (first_t < 0)
      {
        first_t = L[i].t;
      }
      last_t = L[i].t;
    }
  }
  const bool bounded = finite && emax <= 10.0 * e0;
  const bool completed = L.size() == 400 && std::abs(r.run.final.t - 4.0) < 1e-12;
  std::string detail = fmt("%zu steps to t=%.2f in %.0f s, energy in [%.4f, %.4f] (bounded: %s), "
                           "steady indicator %.3e -> %.3e; ",
                           L.size(), r.run.final.t, secs, e0, emax, bounded ? "yes" : "no", L[99].steady_rel,
                           L.back().steady_rel);
  if (increases == 0)
  {
    detail += "strictly decreasing for t >= 1";
  }
  else
  {
    detail += fmt("not monotone for t >= 1: %d non-decreasing steps between t=%.2f and t=%.2f", increases, first_t,
                  last_t);
  }
  return {completed && bounded && increases == 0, detail};
}

}  // namespace

int main(int argc, char **argv)
{
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"energy identity (decay test)", energy_identity},
      {"unconditional energy stability", energy_stability},
      {"weak divergence preservation", weak_divergence},
      {"skew convection and coupling cancellation", skew_and_cancellation},
      {"dense oracle equivalence", dense_equivalence},
      {"3D lowest-order manufactured solution", table_3d},
      {"2D spatial order 2", spatial_order_2d},
      {"temporal order 2 (BDF2)", temporal_order},
      {"Hartmann flow", hartmann},
      {"lid-driven cavity", cavity}};
  std::set<int> selected;
  for (int i = 1; i < argc; ++i)
  {
    selected.insert(std::atoi(argv[i]));
  }
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i)
  {
    const int id = static_cast<int>(i) + 1;
    if (!selected.empty() && !selected.count(id))
    {
      continue;
    }
    Outcome o;
    try
    {
      o = criteria[i].second();
    }
    catch (const std::exception &e)
    {
      o = {false, std::string("exception: ") + e.what()};
    }
    failures += o.pass ? 0 : 1;
    std::cout << "criterion " << id << " " << (o.pass ? "PASS" : "FAIL") << " [" << criteria[i].first << "] "
              << o.detail << std::endl;
  }
  return failures == 0 ? 0 : 1;
}

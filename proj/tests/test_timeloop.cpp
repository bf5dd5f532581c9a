// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "dense_oracle.hpp"
#include "mhdfem/cases.hpp"
#include "mhdfem/timeloop.hpp"

using namespace mhdfem;

namespace
{

std::shared_ptr<const Mesh> square(int M) { return std::make_shared<const Mesh>(build_unit_square_mesh(M)); }

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

State zero_state(const MhdOperator &op)
{
  State s;
  s.u = Eigen::VectorXd::Zero(op.velocity().num_dofs());
  s.p = Eigen::VectorXd::Zero(op.pressure().num_dofs());
  s.B = Eigen::VectorXd::Zero(op.magnetic().num_dofs());
  return s;
}

SystemOptions unit_options(double tau)
{
  SystemOptions o;
  o.coeffs = Coefficients::from_numbers(1.0, 1.0, 1.0);
  o.tau = tau;
  return o;
}

}  // namespace

TEST_CASE("zero data stays zero")
{
  MhdOperator op(square(3), 1, unit_options(0.1));
  TimeStepper ts(op, ProblemData{});
  const State z = zero_state(op);
  EnergyRecord rec;
  const State s1 = ts.step_backward_euler(z, &rec);
  CHECK(s1.u.norm() == 0.0);
  CHECK(s1.B.norm() == 0.0);
  CHECK(s1.p.norm() == 0.0);
  CHECK(rec.n == 1);
  CHECK(rec.identity_residual == 0.0);
  const State s2 = ts.step_bdf2(s1, z);
  CHECK(s2.u.norm() == 0.0);
  CHECK(s2.B.norm() == 0.0);
  CHECK(s2.n == 2);
  CHECK(s2.t == doctest::Approx(0.2));
}

TEST_CASE("single steps match the dense oracle")
{
  std::mt19937 rng(21);
  for (int order : {1, 2})
  {
    for (bool bdf2 : {false, true})
    {
      CAPTURE(order);
      CAPTURE(bdf2);
      SystemOptions o;
      o.coeffs = {0.7, 1.3, 0.4, 0.9};
      o.tau = 0.05;
      o.b_sides = side_bit(1) | side_bit(3);
      const auto mesh = square(2);
      MhdOperator op(mesh, order, o);
      oracle::Step st;
      st.bdf2 = bdf2;
      st.t = 0.1;
      st.u1 = random_vector(op.velocity().num_dofs(), rng);
      st.B1 = random_vector(op.magnetic().num_dofs(), rng);
      st.u2 = random_vector(op.velocity().num_dofs(), rng);
      st.B2 = random_vector(op.magnetic().num_dofs(), rng);
      st.f = [](const Eigen::Vector3d &x, double t) { return Eigen::Vector3d(x(0) * x(1) + t, 1.0 - x(1), 0.0); };
      st.g = [](const Eigen::Vector3d &x, double) { return Eigen::Vector3d(x(1), x(0) * x(0), 0.0); };
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
      const double scale = std::max({1.0, ref.u.cwiseAbs().maxCoeff(), ref.B.cwiseAbs().maxCoeff(),
                                     ref.p.cwiseAbs().maxCoeff()});
      CHECK((u - ref.u).cwiseAbs().maxCoeff() <= 1e-10 * scale);
      CHECK((p - ref.p).cwiseAbs().maxCoeff() <= 1e-10 * scale);
      CHECK((B - ref.B).cwiseAbs().maxCoeff() <= 1e-10 * scale);
    }
  }
}

TEST_CASE("decay run: energy identity, monotone energy and weak divergence")
{
  ProblemConfig cfg = default_config(CaseId::Decay);
  cfg.M = 8;
  cfg.tau = 0.05;
  cfg.t_final = 1.0;
  CaseOptions opts;
  opts.write_outputs = false;
  const CaseResult r = run_case(cfg, opts);
  REQUIRE(r.run.ledger.size() == 20);
  double prev = r.run.ledger.front().total() + 1.0;
  for (const EnergyRecord &e : r.run.ledger)
  {
    CHECK(e.identity_residual <= 1e-9 * e.total());
    CHECK(e.total() <= prev);
    CHECK(e.weak_div <= 1e-10);
    CHECK(e.work == 0.0);
    prev = e.total();
  }
}

TEST_CASE("divergence cleaning")
{
  SUBCASE("constant field is untouched when B is essential on every side")
  {
    SystemOptions o = unit_options(0.1);
    o.b_sides = 0xF;
    MhdOperator op(square(4), 1, o);
    ProblemData d;
    d.B0 = [](const Eigen::Vector3d &) { return Eigen::Vector3d(0.0, 1.0, 0.0); };
    TimeStepper ts(op, d);
    const Eigen::VectorXd B = interpolate(op.magnetic(), d.B0);
    CHECK((ts.clean_divergence(B) - B).cwiseAbs().maxCoeff() <= 1e-12);
    CHECK(ts.weak_divergence_norm(B) <= 1e-12);
  }
  SUBCASE("cleaned data is orthogonal to discrete gradients")
  {
    for (int order : {1, 2})
    {
      MhdOperator op(square(6), order, unit_options(0.1));
      ProblemData d;
      d.B0 = [](const Eigen::Vector3d &x) { return Eigen::Vector3d(x(0) * x(0), std::sin(x(0) + x(1)), 0.0); };
      TimeStepper ts(op, d);
      const State s = ts.initialize(true);
      CHECK(ts.weak_divergence_norm(s.B) <= 1e-10);
      CHECK(ts.weak_divergence_norm(interpolate(op.magnetic(), d.B0)) > 1e-3);
    }
  }
  SUBCASE("divergent and gradient fields are detected")
  {
    MhdOperator op(square(8), 1, unit_options(0.1));
    TimeStepper ts(op, ProblemData{});
    const Eigen::VectorXd B =
        interpolate(op.magnetic(), VectorFn([](const Eigen::Vector3d &x) { return Eigen::Vector3d(x(0), 0.0, 0.0); }));
    CHECK(ts.weak_divergence_norm(B) > 1e-3);
    Eigen::VectorXd s = Eigen::VectorXd::Zero(op.potential().num_dofs());
    s(7) = 1.0;
    CHECK(ts.weak_divergence_norm(op.gradient_map() * s) > 0.0);
  }
}

TEST_CASE("steady solution inside the spaces is reproduced")
{
  for (bool bdf2 : {false, true})
  {
    CAPTURE(bdf2);
    ProblemConfig cfg = default_config(CaseId::Mms2d);
    cfg.solution = "poly-steady";
    cfg.order_b = 1;
    cfg.M = 4;
    cfg.tau = 0.1;
    cfg.t_final = 0.5;
    cfg.bdf2 = bdf2;
    CaseOptions opts;
    opts.write_outputs = false;
    const CaseResult r = run_case(cfg, opts);
    CHECK(r.errors.err_u_l2 <= 1e-10);
    CHECK(r.errors.err_B_l2 <= 1e-10);
    CHECK(r.errors.err_p_l2 <= 1e-9);
    for (std::size_t n = 1; n < r.run.ledger.size(); ++n)
    {
      CHECK(r.run.ledger[n].steady_rel <= 1e-9);
    }
  }
}

TEST_CASE("step count and ledger shape")
{
  CHECK(step_count(1.0, 0.1) == 10);
  CHECK(step_count(0.25, 1.0 / 64) == 16);
  CHECK_THROWS_AS(step_count(1.0, 0.3), Error);
  CHECK_THROWS_AS(step_count(1.0, 0.0), Error);

  MhdOperator op(square(2), 1, unit_options(0.01));
  ProblemData d;
  d.u0 = [](const Eigen::Vector3d &x) { return Eigen::Vector3d(x(1) * (1 - x(1)), 0.0, 0.0); };
  TimeStepper ts(op, d);
  RunOptions ro;
  ro.t_final = 0.1;
  int calls = 0;
  ro.observer = [&](const State &, const EnergyRecord *) { ++calls; };
  const RunSummary s = run(ts, ro);
  CHECK(s.ledger.size() == 10);
  CHECK(calls == 11);
  CHECK(s.final.n == 10);
  CHECK(s.final.t == doctest::Approx(0.1));

  std::ostringstream os;
  write_ledger_csv(os, s.ledger);
  std::istringstream is(os.str());
  std::string line;
  std::getline(is, line);
  CHECK(line == kLedgerHeader);
  int rows = 0;
  while (std::getline(is, line))
  {
    ++rows;
    CHECK(std::count(line.begin(), line.end(), ',') == 9);
  }
  CHECK(rows == 10);
  // 17 significant digits reproduce the doubles exactly.
  std::istringstream first(os.str().substr(os.str().find('\n') + 1));
  std::string cell;
  std::getline(first, cell, ',');
  std::getline(first, cell, ',');
  std::getline(first, cell, ',');
  CHECK(std::stod(cell) == s.ledger.front().kinetic);
}

TEST_CASE("BDF2 rows leave dissipation columns unset")
{
  MhdOperator op(square(2), 1, unit_options(0.1));
  ProblemData d;
  d.u0 = [](const Eigen::Vector3d &x) { return Eigen::Vector3d(x(1) * (1 - x(1)), 0.0, 0.0); };
  TimeStepper ts(op, d);
  RunOptions ro;
  ro.t_final = 0.3;
  ro.bdf2 = true;
  const RunSummary s = run(ts, ro);
  CHECK(std::isfinite(s.ledger[0].viscous));
  CHECK(std::isnan(s.ledger[1].viscous));
  CHECK(std::isnan(s.ledger[2].identity_residual));
  CHECK(std::isfinite(s.ledger[2].kinetic));
}

TEST_CASE("runs are deterministic")
{
  ProblemConfig cfg = default_config(CaseId::Decay);
  cfg.M = 4;
  cfg.tau = 0.1;
  cfg.t_final = 0.5;
  CaseOptions opts;
  opts.write_outputs = false;
  const CaseResult a = run_case(cfg, opts);
  const CaseResult b = run_case(cfg, opts);
  std::ostringstream sa, sb;
  write_ledger_csv(sa, a.run.ledger);
  write_ledger_csv(sb, b.run.ledger);
  CHECK(sa.str() == sb.str());
}

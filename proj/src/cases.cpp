// SPDX-License-Identifier: Apache-2.0

#include "mhdfem/cases.hpp"

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <ostream>
#include <set>
#include <sstream>

namespace mhdfem
{

namespace
{

const double kPi = std::acos(-1.0);

std::shared_ptr<const Mesh> make_mesh(const ProblemConfig &cfg)
{
  return std::make_shared<const Mesh>(cfg.dim == 2 ? build_unit_square_mesh(cfg.M) : build_unit_cube_mesh(cfg.M));
}

void open_out(std::ofstream &f, const std::string &path)
{
  f.open(path);
  if (!f)
  {
    throw Error("cannot write '" + path + "'");
  }
}

std::string join(const std::string &dir, const std::string &name)
{
  return (std::filesystem::path(dir) / name).string();
}

void require(const ProblemConfig &cfg, CaseId id)
{
  if (cfg.case_id != id)
  {
    throw ConfigError(std::string("configuration is for case '") + case_name(cfg.case_id) + "', not '" +
                      case_name(id) + "'");
  }
}

}  // namespace

std::unique_ptr<ExactSolution> make_exact(const ProblemConfig &cfg)
{
  switch (cfg.case_id)
  {
    case CaseId::Hartmann:
      return std::make_unique<HartmannSolution>();
    case CaseId::Mms2d:
      if (cfg.solution == "trig")
      {
        return std::make_unique<TrigSolution2D>();
      }
      return std::make_unique<PolySolution2D>(cfg.solution == "poly-steady");
    case CaseId::Mms3d:
      return std::make_unique<CubeSolution3D>();
    case CaseId::Cavity3d:
    case CaseId::Decay:
      return nullptr;
  }
  return nullptr;
}

ProblemData make_problem_data(const ProblemConfig &cfg, const ExactSolution *exact)
{
  ProblemData d;
  const Coefficients k = cfg.coefficients();
  if (exact != nullptr)
  {
    d.u_boundary = [exact](const Eigen::Vector3d &x, double t) { return exact->u(x, t); };
    d.B_boundary = [exact](const Eigen::Vector3d &x, double t) { return exact->B(x, t); };
    d.f = [exact, k](const Eigen::Vector3d &x, double t) { return momentum_source(*exact, k, x, t); };
    d.g = [exact, k](const Eigen::Vector3d &x, double t) { return magnetic_source(*exact, k, x, t); };
    d.u0 = [exact](const Eigen::Vector3d &x) { return exact->u(x, 0.0); };
    d.B0 = [exact](const Eigen::Vector3d &x) { return exact->B(x, 0.0); };
    if (cfg.pin_value)
    {
      const double v = *cfg.pin_value;
      d.p_pin = [v](const Eigen::Vector3d &, double) { return v; };
    }
    else
    {
      d.p_pin = [exact](const Eigen::Vector3d &x, double t) { return exact->p(x, t); };
    }
    d.time_dependent = !(cfg.case_id == CaseId::Hartmann || cfg.solution == "poly-steady");
  }
  else if (cfg.pin_value)
  {
    const double v = *cfg.pin_value;
    d.p_pin = [v](const Eigen::Vector3d &, double) { return v; };
  }

  switch (cfg.case_id)
  {
    case CaseId::Hartmann:
      d.u0 = [](const Eigen::Vector3d &) { return Eigen::Vector3d(1.0, 0.0, 0.0); };
      d.B0 = [](const Eigen::Vector3d &) { return Eigen::Vector3d(0.0, 1.0, 0.0); };
      break;
    case CaseId::Cavity3d:
    {
      const double alpha = cfg.alpha;
      d.u0 = [alpha](const Eigen::Vector3d &x) { return Eigen::Vector3d(lid_profile(x(2), alpha), 0.0, 0.0); };
      d.u_boundary = [alpha](const Eigen::Vector3d &x, double) {
        return Eigen::Vector3d(lid_profile(x(2), alpha), 0.0, 0.0);
      };
      d.B0 = [](const Eigen::Vector3d &) { return Eigen::Vector3d(1.0, 0.0, 0.0); };
      d.time_dependent = false;
      break;
    }
    case CaseId::Decay:
      // u0 = curl of sin^2(pi x) sin^2(pi y); B0 tangent to the boundary.
      d.u0 = [](const Eigen::Vector3d &x) {
        const double sx = std::sin(kPi * x(0)), cx = std::cos(kPi * x(0));
        const double sy = std::sin(kPi * x(1)), cy = std::cos(kPi * x(1));
        return Eigen::Vector3d(2.0 * kPi * sx * sx * sy * cy, -2.0 * kPi * sx * cx * sy * sy, 0.0);
      };
      d.B0 = [](const Eigen::Vector3d &x) {
        return Eigen::Vector3d(std::sin(kPi * x(0)) * std::cos(kPi * x(1)),
                               -std::cos(kPi * x(0)) * std::sin(kPi * x(1)), 0.0);
      };
      d.time_dependent = false;
      break;
    case CaseId::Mms2d:
    case CaseId::Mms3d:
      break;
  }
  return d;
}

CaseResult run_case(const ProblemConfig &cfg, const CaseOptions &opts)
{
  cfg.validate();
  const auto start = std::chrono::steady_clock::now();
  CaseResult res;
  res.config = cfg;
  const std::unique_ptr<ExactSolution> exact = make_exact(cfg);
  const std::shared_ptr<const Mesh> mesh = make_mesh(cfg);
  MhdOperator op(mesh, cfg.order_b, cfg.system_options());
  TimeStepper stepper(op, make_problem_data(cfg, exact.get()), cfg.solver);
  const std::string name = case_name(cfg.case_id);

  if (opts.write_outputs)
  {
    std::filesystem::create_directories(cfg.out);
  }
  auto snapshot = [&](const State &s) {
    const std::string path = join(cfg.out, snapshot_name(name, s.t));
    export_vtk(path, *mesh,
               {{"u", &op.velocity(), &s.u}, {"p", &op.pressure(), &s.p}, {"B", &op.magnetic(), &s.B}});
    res.written.push_back(path);
  };
  std::set<int> snapshot_steps;
  for (double ts : cfg.snapshot_times)
  {
    snapshot_steps.insert(static_cast<int>(std::lround(ts / cfg.tau)));
  }
  if (opts.log)
  {
    std::ostringstream os;
    os << name << ": M=" << cfg.M << " tau=" << cfg.tau << " T=" << cfg.t_final
       << " dofs=" << op.layout().size();
    opts.log(os.str());
  }

  RunOptions ro;
  ro.t_final = cfg.t_final;
  ro.bdf2 = cfg.bdf2;
  ro.clean_divergence = cfg.clean_divergence;
  ro.steady_tol = cfg.steady_tol;
  ro.observer = [&](const State &s, const EnergyRecord *rec) {
    if (opts.write_outputs && snapshot_steps.count(s.n) && s.n > 0)
    {
      snapshot(s);
    }
    if (opts.log && rec != nullptr && opts.progress_every > 0 && s.n % opts.progress_every == 0)
    {
      std::ostringstream os;
      os.precision(6);
      os << "  n=" << s.n << " t=" << s.t << " energy=" << rec->total() << " steady_rel=" << rec->steady_rel;
      opts.log(os.str());
    }
  };
  res.run = run(stepper, ro);
  const State &fin = res.run.final;

  res.errors.M = cfg.M;
  res.errors.h = mesh->h;
  res.errors.tau = cfg.tau;
  const double nan = std::numeric_limits<double>::quiet_NaN();
  res.errors.order_u = res.errors.order_p = res.errors.order_B = nan;
  if (exact)
  {
    res.has_exact = true;
    const ErrorNorms eu = error_norms(op.velocity(), fin.u, *exact, Field::Velocity, fin.t);
    const ErrorNorms ep = error_norms(op.pressure(), fin.p, *exact, Field::Pressure, fin.t);
    const ErrorNorms eb = error_norms(op.magnetic(), fin.B, *exact, Field::Magnetic, fin.t);
    res.errors.err_u_l2 = eu.l2;
    res.errors.err_u_h1 = eu.seminorm;
    res.errors.err_p_l2 = ep.l2;
    res.errors.err_B_l2 = eb.l2;
    res.errors.err_B_curl = eb.seminorm;
    const Eigen::VectorXd zero = Eigen::VectorXd::Zero(op.velocity().num_dofs());
    const double norm_u = error_norms(op.velocity(), zero, *exact, Field::Velocity, fin.t).l2;
    res.relative_u_l2 = norm_u > 0.0 ? eu.l2 / norm_u : eu.l2;
  }
  else
  {
    res.errors.err_u_l2 = res.errors.err_p_l2 = res.errors.err_B_l2 = nan;
    res.errors.err_u_h1 = res.errors.err_B_curl = nan;
    res.relative_u_l2 = nan;
  }

  if (opts.write_outputs)
  {
    std::ofstream f;
    const std::string ledger = join(cfg.out, "energy.csv");
    open_out(f, ledger);
    write_ledger_csv(f, res.run.ledger);
    f.close();
    res.written.push_back(ledger);
    if (exact)
    {
      const std::string errors = join(cfg.out, "errors.csv");
      open_out(f, errors);
      write_errors_csv(f, {res.errors});
      f.close();
      res.written.push_back(errors);
    }
    if (cfg.case_id == CaseId::Hartmann)
    {
      const std::string profile = join(cfg.out, "hartmann_profile.csv");
      open_out(f, profile);
      write_hartmann_profile(f, op, fin);
      f.close();
      res.written.push_back(profile);
    }
    if (!snapshot_steps.count(fin.n))
    {
      snapshot(fin);
    }
    const std::string used = join(cfg.out, "config.ini");
    open_out(f, used);
    write_config(f, cfg);
    f.close();
    res.written.push_back(used);
  }
  res.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return res;
}

CaseResult case_hartmann(const ProblemConfig &cfg, const CaseOptions &opts)
{
  require(cfg, CaseId::Hartmann);
  return run_case(cfg, opts);
}

CaseResult case_mms2d(const ProblemConfig &cfg, const CaseOptions &opts)
{
  require(cfg, CaseId::Mms2d);
  return run_case(cfg, opts);
}

CaseResult case_mms3d(const ProblemConfig &cfg, const CaseOptions &opts)
{
  require(cfg, CaseId::Mms3d);
  return run_case(cfg, opts);
}

CaseResult case_cavity3d(const ProblemConfig &cfg, const CaseOptions &opts)
{
  require(cfg, CaseId::Cavity3d);
  return run_case(cfg, opts);
}

TauRule parse_tau_rule(const std::string &name)
{
  if (name == "fixed")
  {
    return TauRule::Fixed;
  }
  if (name == "linear" || name == "h")
  {
    return TauRule::Linear;
  }
  if (name == "quadratic" || name == "h2")
  {
    return TauRule::Quadratic;
  }
  throw ConfigError("unknown tau rule '" + name + "' (fixed | linear | quadratic)");
}

double tau_for(TauRule rule, double c, int M)
{
  switch (rule)
  {
    case TauRule::Fixed:
      return c;
    case TauRule::Linear:
      return c / M;
    case TauRule::Quadratic:
      return c / (static_cast<double>(M) * M);
  }
  return c;
}

std::vector<ConvergenceRow> convergence_study(const ProblemConfig &base, const std::vector<int> &Ms, TauRule rule,
                                              double c, const CaseOptions &opts)
{
  std::vector<ConvergenceRow> rows;
  for (int M : Ms)
  {
    ProblemConfig cfg = base;
    cfg.M = M;
    cfg.tau = tau_for(rule, c, M);
    cfg.steady_tol = 0.0;
    cfg.snapshot_times.clear();
    CaseOptions o = opts;
    o.write_outputs = false;
    const CaseResult r = run_case(cfg, o);
    if (!r.has_exact)
    {
      throw ConfigError(std::string("case '") + case_name(cfg.case_id) + "' has no exact solution");
    }
    rows.push_back(r.errors);
  }
  compute_orders(rows);
  return rows;
}

std::vector<ConvergenceRow> temporal_study(const ProblemConfig &base, const std::vector<double> &taus,
                                           const CaseOptions &opts)
{
  std::vector<ConvergenceRow> rows;
  for (double tau : taus)
  {
    ProblemConfig cfg = base;
    cfg.tau = tau;
    cfg.steady_tol = 0.0;
    cfg.snapshot_times.clear();
    CaseOptions o = opts;
    o.write_outputs = false;
    const CaseResult r = run_case(cfg, o);
    if (!r.has_exact)
    {
      throw ConfigError(std::string("case '") + case_name(cfg.case_id) + "' has no exact solution");
    }
    rows.push_back(r.errors);
  }
  compute_orders(rows);
  return rows;
}

void write_hartmann_profile(std::ostream &os, const MhdOperator &op, const State &s, int n)
{
  const auto prec = os.precision(17);
  os << "y,u1,u1_exact,B1,B1_exact\n";
  for (int i = 0; i <= n; ++i)
  {
    const double y = static_cast<double>(i) / n;
    const Eigen::Vector3d x(0.5, y, 0.0);
    os << y << ',' << evaluate(op.velocity(), s.u, x)(0) << ',' << HartmannSolution::u1(y) << ','
       << evaluate(op.magnetic(), s.B, x)(0) << ',' << HartmannSolution::B1(y) << '\n';
  }
  os.precision(prec);
}

}  // namespace mhdfem

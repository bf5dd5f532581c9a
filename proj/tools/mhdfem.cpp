// SPDX-License-Identifier: Apache-2.0
//
// mhdfem: runs the MHD cases and convergence studies.

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>

#include "mhdfem/cases.hpp"

namespace
{

using namespace mhdfem;

constexpr int kUsageError = 2;

struct Overrides
{
  std::optional<int> m;
  std::optional<double> tau, t_final, alpha;
  std::optional<int> order_b;
  std::optional<std::string> bc_b, solver, out, solution;
  bool bdf2 = false;
  bool quiet = false;
  bool print_config = false;
};

void add_case_flags(CLI::App *app, Overrides &o)
{
  app->add_option("--m", o.m, "mesh subdivisions per side")->check(CLI::PositiveNumber);
  app->add_option("--tau", o.tau, "time step")->check(CLI::PositiveNumber);
  app->add_option("--t-final", o.t_final, "final time (integer multiple of tau)")->check(CLI::PositiveNumber);
  app->add_option("--order-b", o.order_b, "Nedelec order of the magnetic field (1 or 2)");
  app->add_option("--bc-b", o.bc_b, "B boundary: natural | tangential | comma list of sides 1..6");
  app->add_option("--solver", o.solver, "auto | direct-lu | gmres-ilu");
  app->add_flag("--bdf2", o.bdf2, "second-order three-level scheme");
  app->add_option("--out", o.out, "output directory");
  app->add_flag("--quiet", o.quiet, "no progress output");
  app->add_flag("--print-config", o.print_config, "print the resolved configuration and exit");
}

void apply(ProblemConfig &c, const Overrides &o)
{
  if (o.m)
  {
    c.M = *o.m;
  }
  if (o.tau)
  {
    c.tau = *o.tau;
  }
  if (o.t_final)
  {
    c.t_final = *o.t_final;
  }
  if (o.order_b)
  {
    c.order_b = *o.order_b;
  }
  if (o.bc_b)
  {
    c.b_sides = parse_b_sides(*o.bc_b, c.dim);
  }
  if (o.solver)
  {
    try
    {
      c.solver.method = parse_solver_method(*o.solver);
    }
    catch (const Error &e)
    {
      throw ConfigError(e.what());
    }
  }
  if (o.bdf2)
  {
    c.bdf2 = true;
  }
  if (o.out)
  {
    c.out = *o.out;
  }
  if (o.solution)
  {
    c.solution = *o.solution;
  }
  if (o.alpha)
  {
    c.alpha = *o.alpha;
  }
  c.validate();
}

CaseOptions case_options(const Overrides &o)
{
  CaseOptions opts;
  if (!o.quiet)
  {
    opts.log = [](const std::string &line) { std::cerr << line << '\n'; };
  }
  return opts;
}

void report(const CaseResult &r)
{
  std::cout.precision(6);
  const ProblemConfig &c = r.config;
  std::cout << case_name(c.case_id) << ": " << r.run.ledger.size() << " steps to t=" << r.run.final.t;
  if (r.run.stopped_steady)
  {
    std::cout << " (steady)";
  }
  std::cout << " in " << r.seconds << " s\n";
  if (!r.run.ledger.empty())
  {
    const EnergyRecord &e = r.run.ledger.back();
    std::cout << "  energy " << e.total() << "  steady_rel " << e.steady_rel << "  weak_div " << e.weak_div
              << "\n";
  }
  if (r.has_exact)
  {
    std::cout << "  L2 errors  u " << r.errors.err_u_l2 << "  p " << r.errors.err_p_l2 << "  B " << r.errors.err_B_l2
              << "\n  u relative " << r.relative_u_l2 << "  H1(u) " << r.errors.err_u_h1 << "  curl(B) "
              << r.errors.err_B_curl << "\n";
  }
  if (c.case_id == CaseId::Hartmann)
  {
    std::cout << "  u1(0.5, 0) exact " << HartmannSolution::u1(0.0) << "\n";
  }
  for (const std::string &f : r.written)
  {
    std::cout << "  wrote " << f << "\n";
  }
}

std::vector<int> parse_ms(const std::string &text)
{
  std::vector<int> ms;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ','))
  {
    try
    {
      std::size_t used = 0;
      const int m = std::stoi(item, &used);
      if (used != item.size() || m < 1)
      {
        throw std::invalid_argument(item);
      }
      ms.push_back(m);
    }
    catch (const std::exception &)
    {
      throw ConfigError("--ms expects a comma list of positive integers, got '" + text + "'");
    }
  }
  if (ms.empty())
  {
    throw ConfigError("--ms is empty");
  }
  return ms;
}

}  // namespace

int main(int argc, char **argv)
{
  CLI::App app{"Linearized energy-preserving finite element solver for incompressible MHD"};
  app.require_subcommand(1);

  Overrides hart_o, mms2_o, mms3_o, cav_o, run_o, conv_o;
  CLI::App *hart = app.add_subcommand("hartmann", "2D Hartmann channel flow");
  add_case_flags(hart, hart_o);
  CLI::App *mms2 = app.add_subcommand("mms2d", "2D manufactured solution, one resolution");
  add_case_flags(mms2, mms2_o);
  mms2->add_option("--solution", mms2_o.solution, "trig | poly | poly-steady");
  CLI::App *mms3 = app.add_subcommand("mms3d", "3D manufactured solution on the unit cube, one resolution");
  add_case_flags(mms3, mms3_o);
  CLI::App *cav = app.add_subcommand("cavity3d", "3D lid-driven cavity");
  add_case_flags(cav, cav_o);
  cav->add_option("--alpha", cav_o.alpha, "width of the lid regularization layer");

  std::string config_path;
  CLI::App *runc = app.add_subcommand("run", "run a configuration file");
  runc->add_option("config", config_path, "configuration file")->required()->check(CLI::ExistingFile);
  add_case_flags(runc, run_o);

  std::string conv_case = "mms2d", conv_ms = "8,16,32", conv_rule = "quadratic";
  double conv_c = 1.0;
  CLI::App *conv = app.add_subcommand("convergence", "spatial convergence study, writes errors.csv");
  conv->add_option("--case", conv_case, "mms2d | mms3d")->check(CLI::IsMember({"mms2d", "mms3d"}));
  conv->add_option("--ms", conv_ms, "comma list of M values");
  conv->add_option("--tau-rule", conv_rule, "fixed | linear | quadratic (tau = c, c/M, c/M^2)");
  conv->add_option("--tau-c", conv_c, "constant c of the tau rule")->check(CLI::PositiveNumber);
  add_case_flags(conv, conv_o);
  conv->add_option("--solution", conv_o.solution, "trig | poly | poly-steady (mms2d)");

  try
  {
    app.parse(argc, argv);
  }
  catch (const CLI::CallForHelp &e)
  {
    return app.exit(e);
  }
  catch (const CLI::ParseError &e)
  {
    app.exit(e);
    return kUsageError;
  }

  try
  {
    auto single = [](ProblemConfig cfg, const Overrides &o) {
      apply(cfg, o);
      if (o.print_config)
      {
        write_config(std::cout, cfg);
        return 0;
      }
      report(run_case(cfg, case_options(o)));
      return 0;
    };
    if (*hart)
    {
      return single(default_config(CaseId::Hartmann), hart_o);
    }
    if (*mms2)
    {
      return single(default_config(CaseId::Mms2d), mms2_o);
    }
    if (*mms3)
    {
      return single(default_config(CaseId::Mms3d), mms3_o);
    }
    if (*cav)
    {
      return single(default_config(CaseId::Cavity3d), cav_o);
    }
    if (*runc)
    {
      return single(load_config(config_path), run_o);
    }
    if (*conv)
    {
      ProblemConfig cfg = default_config(parse_case(conv_case));
      const TauRule rule = parse_tau_rule(conv_rule);
      const std::vector<int> ms = parse_ms(conv_ms);
      cfg.M = ms.front();
      cfg.tau = tau_for(rule, conv_c, cfg.M);
      apply(cfg, conv_o);
      if (conv_o.tau)
      {
        throw ConfigError("convergence takes --tau-rule/--tau-c instead of --tau");
      }
      for (int m : ms)
      {
        ProblemConfig probe = cfg;
        probe.M = m;
        probe.tau = tau_for(rule, conv_c, m);
        probe.validate();
      }
      if (conv_o.print_config)
      {
        write_config(std::cout, cfg);
        return 0;
      }
      const std::vector<ConvergenceRow> rows = convergence_study(cfg, ms, rule, conv_c, case_options(conv_o));
      std::filesystem::create_directories(cfg.out);
      const std::string path = (std::filesystem::path(cfg.out) / "errors.csv").string();
      std::ofstream f(path);
      if (!f)
      {
        throw Error("cannot write '" + path + "'");
      }
      write_errors_csv(f, rows);
      write_errors_csv(std::cout, rows);
      std::cout << "wrote " << path << "\n";
      return 0;
    }
  }
  catch (const ConfigError &e)
  {
    std::cerr << "error: " << e.what() << "\n" << app.help() << std::flush;
    return kUsageError;
  }
  catch (const std::exception &e)
  {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

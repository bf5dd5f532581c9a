// SPDX-License-Identifier: Apache-2.0

#include "mhdfem/config.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <map>
#include <sstream>

namespace mhdfem
{

namespace
{

std::string trim(const std::string &s)
{
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos)
  {
    return {};
  }
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string &s, char sep)
{
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep))
  {
    item = trim(item);
    if (!item.empty())
    {
      out.push_back(item);
    }
  }
  return out;
}

double to_real(const std::string &key, const std::string &v)
{
  std::size_t used = 0;
  double x = 0.0;
  try
  {
    x = std::stod(v, &used);
  }
  catch (const std::exception &)
  {
    used = 0;
  }
  if (used != v.size() || !std::isfinite(x))
  {
    throw ConfigError("config: '" + key + "' expects a real number, got '" + v + "'");
  }
  return x;
}

int to_int(const std::string &key, const std::string &v)
{
  std::size_t used = 0;
  int x = 0;
  try
  {
    x = std::stoi(v, &used);
  }
  catch (const std::exception &)
  {
    used = 0;
  }
  if (used != v.size())
  {
    throw ConfigError("config: '" + key + "' expects an integer, got '" + v + "'");
  }
  return x;
}

bool to_bool(const std::string &key, const std::string &v)
{
  if (v == "true" || v == "1" || v == "yes")
  {
    return true;
  }
  if (v == "false" || v == "0" || v == "no")
  {
    return false;
  }
  throw ConfigError("config: '" + key + "' expects true or false, got '" + v + "'");
}

std::vector<double> to_reals(const std::string &key, const std::string &v)
{
  std::vector<double> out;
  for (const std::string &item : split(v, ','))
  {
    out.push_back(to_real(key, item));
  }
  return out;
}

std::string real(double x)
{
  std::ostringstream os;
  os << std::setprecision(17) << x;
  return os.str();
}

std::string reals(const std::vector<double> &xs)
{
  std::string s;
  for (std::size_t i = 0; i < xs.size(); ++i)
  {
    s += (i ? ", " : "") + real(xs[i]);
  }
  return s;
}

const char *pressure_name(PressureMode m)
{
  switch (m)
  {
    case PressureMode::MeanZero:
      return "mean-zero";
    case PressureMode::PinNode:
      return "pin-node";
    case PressureMode::None:
      return "none";
  }
  return "?";
}

PressureMode parse_pressure(const std::string &v)
{
  if (v == "mean-zero")
  {
    return PressureMode::MeanZero;
  }
  if (v == "pin-node")
  {
    return PressureMode::PinNode;
  }
  if (v == "none")
  {
    return PressureMode::None;
  }
  throw ConfigError("config: unknown pressure mode '" + v + "' (mean-zero | pin-node | none)");
}

}  // namespace

CaseId parse_case(const std::string &name)
{
  static const std::map<std::string, CaseId> ids = {{"hartmann", CaseId::Hartmann},
                                                    {"mms2d", CaseId::Mms2d},
                                                    {"mms3d", CaseId::Mms3d},
                                                    {"cavity3d", CaseId::Cavity3d},
                                                    {"decay", CaseId::Decay}};
  const auto it = ids.find(name);
  if (it == ids.end())
  {
    throw ConfigError("unknown case '" + name + "'");
  }
  return it->second;
}

const char *case_name(CaseId id)
{
  switch (id)
  {
    case CaseId::Hartmann:
      return "hartmann";
    case CaseId::Mms2d:
      return "mms2d";
    case CaseId::Mms3d:
      return "mms3d";
    case CaseId::Cavity3d:
      return "cavity3d";
    case CaseId::Decay:
      return "decay";
  }
  return "?";
}

SideMask parse_b_sides(const std::string &text, int dim)
{
  const SideMask all = dim == 2 ? SideMask(0xF) : kAllSides;
  if (text == "natural")
  {
    return 0;
  }
  if (text == "tangential")
  {
    return all;
  }
  SideMask mask = 0;
  const std::vector<std::string> items = split(text, ',');
  if (items.empty())
  {
    throw ConfigError("B boundary mode is empty");
  }
  for (const std::string &item : items)
  {
    const int side = to_int("bc_b", item);
    if (side < 1 || side > 2 * dim)
    {
      throw ConfigError("B boundary side " + item + " outside 1.." + std::to_string(2 * dim));
    }
    mask |= side_bit(side);
  }
  return mask;
}

std::string format_b_sides(SideMask sides, int dim)
{
  const SideMask all = dim == 2 ? SideMask(0xF) : kAllSides;
  if (sides == 0)
  {
    return "natural";
  }
  if ((sides & all) == all)
  {
    return "tangential";
  }
  std::string s;
  for (int side = 1; side <= 2 * dim; ++side)
  {
    if (sides & side_bit(side))
    {
      s += (s.empty() ? "" : ",") + std::to_string(side);
    }
  }
  return s;
}

Coefficients ProblemConfig::coefficients() const
{
  return coefficient_override ? *coefficient_override : Coefficients::from_numbers(Re, Rm, Sc);
}

SystemOptions ProblemConfig::system_options() const
{
  SystemOptions o;
  o.coeffs = coefficients();
  o.tau = tau;
  o.dirichlet_u = dirichlet_u;
  o.b_sides = b_sides;
  o.pressure = pressure;
  o.pin_point = pin_point;
  return o;
}

void ProblemConfig::validate() const
{
  if (dim != 2 && dim != 3)
  {
    throw ConfigError("dim must be 2 or 3");
  }
  if (M < 1)
  {
    throw ConfigError("M must be at least 1");
  }
  if (!(tau > 0.0) || !(t_final > 0.0))
  {
    throw ConfigError("tau and t_final must be positive");
  }
  const double ratio = t_final / tau;
  if (std::abs(ratio - std::round(ratio)) > 1e-9 * std::max(1.0, ratio))
  {
    throw ConfigError("t_final must be an integer multiple of tau");
  }
  if (!(Re > 0.0) || !(Rm > 0.0) || !(Sc > 0.0))
  {
    throw ConfigError("Re, Rm and Sc must be positive");
  }
  if (coefficient_override)
  {
    const Coefficients &k = *coefficient_override;
    if (!(k.viscous > 0.0) || !(k.lorentz > 0.0) || !(k.diffusion > 0.0) || !(k.induction > 0.0))
    {
      throw ConfigError("coefficient override entries must be positive");
    }
  }
  if (order_u != 2)
  {
    throw ConfigError("unsupported element: velocity degree " + std::to_string(order_u) +
                      " (only the P2-P1 pair is available)");
  }
  if (order_b < 1 || order_b > 2 || (dim == 3 && order_b != 1))
  {
    throw ConfigError("unsupported element: Nedelec order " + std::to_string(order_b) + " in " +
                      std::to_string(dim) + "D");
  }
  if (steady_tol < 0.0)
  {
    throw ConfigError("steady_tol must be nonnegative");
  }
  if (b_sides >> (2 * dim))
  {
    throw ConfigError("B boundary sides exceed the domain dimension");
  }
  if (case_id == CaseId::Hartmann && dim != 2)
  {
    throw ConfigError("hartmann requires dim = 2");
  }
  if ((case_id == CaseId::Mms3d || case_id == CaseId::Cavity3d) && dim != 3)
  {
    throw ConfigError(std::string(case_name(case_id)) + " requires dim = 3");
  }
  if ((case_id == CaseId::Mms2d || case_id == CaseId::Decay) && dim != 2)
  {
    throw ConfigError(std::string(case_name(case_id)) + " requires dim = 2");
  }
  if (case_id == CaseId::Mms2d && solution != "trig" && solution != "poly" && solution != "poly-steady")
  {
    throw ConfigError("unknown mms2d solution '" + solution + "' (trig | poly | poly-steady)");
  }
  if (case_id == CaseId::Cavity3d && !(alpha > 0.0 && alpha <= 1.0))
  {
    throw ConfigError("alpha must lie in (0, 1]");
  }
}

ProblemConfig default_config(CaseId id)
{
  ProblemConfig c;
  c.case_id = id;
  switch (id)
  {
    case CaseId::Hartmann:
      c.dim = 2;
      c.M = 32;
      c.tau = 0.005;
      c.t_final = 10.0;
      c.order_b = 2;
      c.b_sides = 0xF;
      c.pressure = PressureMode::PinNode;
      c.pin_point = Eigen::Vector3d::Zero();
      c.steady_tol = 1e-6;
      c.clean_divergence = false;
      break;
    case CaseId::Mms2d:
      c.dim = 2;
      c.M = 8;
      c.tau = 1.0 / 64;
      c.t_final = 0.25;
      c.order_b = 2;
      c.b_sides = 0xF;
      c.clean_divergence = false;
      break;
    case CaseId::Mms3d:
      c.dim = 3;
      c.M = 4;
      c.tau = 1.0 / 8;
      c.t_final = 1.0;
      c.order_b = 1;
      c.b_sides = kAllSides;
      c.clean_divergence = false;
      break;
    case CaseId::Cavity3d:
      c.dim = 3;
      c.M = 8;
      c.tau = 0.01;
      c.t_final = 4.0;
      c.order_b = 1;
      c.b_sides = 0;
      c.coefficient_override = Coefficients{0.01, 0.05, 0.005, 1.0};
      c.steady_tol = 1e-6;
      c.clean_divergence = false;
      c.snapshot_times = {4.0, 10.0};
      break;
    case CaseId::Decay:
      c.dim = 2;
      c.M = 16;
      c.tau = 0.01;
      c.t_final = 2.0;
      c.order_b = 1;
      c.b_sides = 0;
      c.clean_divergence = true;
      break;
  }
  return c;
}

ProblemConfig parse_config(std::istream &is)
{
  std::map<std::string, std::string> kv;
  std::string line, section;
  int lineno = 0;
  while (std::getline(is, line))
  {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos)
    {
      line.erase(hash);
    }
    line = trim(line);
    if (line.empty())
    {
      continue;
    }
    if (line.front() == '[')
    {
      if (line.back() != ']')
      {
        throw ConfigError("config line " + std::to_string(lineno) + ": malformed section header");
      }
      section = trim(line.substr(1, line.size() - 2));
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos)
    {
      throw ConfigError("config line " + std::to_string(lineno) + ": expected key = value");
    }
    const std::string key = (section.empty() ? "" : section + ".") + trim(line.substr(0, eq));
    if (!kv.emplace(key, trim(line.substr(eq + 1))).second)
    {
      throw ConfigError("config: duplicate key '" + key + "'");
    }
  }

  auto take = [&](const std::string &key) -> std::optional<std::string> {
    const auto it = kv.find(key);
    if (it == kv.end())
    {
      return std::nullopt;
    }
    std::string v = it->second;
    kv.erase(it);
    return v;
  };

  const auto name = take("case.name");
  if (!name)
  {
    throw ConfigError("config: missing [case] name");
  }
  ProblemConfig c = default_config(parse_case(*name));
  if (auto v = take("case.solution"))
  {
    c.solution = *v;
  }
  if (auto v = take("case.out"))
  {
    c.out = *v;
  }
  if (auto v = take("case.alpha"))
  {
    c.alpha = to_real("alpha", *v);
  }
  if (auto v = take("mesh.dim"))
  {
    c.dim = to_int("dim", *v);
  }
  if (auto v = take("mesh.M"))
  {
    c.M = to_int("M", *v);
  }
  if (auto v = take("time.tau"))
  {
    c.tau = to_real("tau", *v);
  }
  if (auto v = take("time.t_final"))
  {
    c.t_final = to_real("t_final", *v);
  }
  if (auto v = take("time.bdf2"))
  {
    c.bdf2 = to_bool("bdf2", *v);
  }
  if (auto v = take("time.steady_tol"))
  {
    c.steady_tol = to_real("steady_tol", *v);
  }
  if (auto v = take("time.snapshots"))
  {
    c.snapshot_times = to_reals("snapshots", *v);
  }
  if (auto v = take("physics.Re"))
  {
    c.Re = to_real("Re", *v);
  }
  if (auto v = take("physics.Rm"))
  {
    c.Rm = to_real("Rm", *v);
  }
  if (auto v = take("physics.Sc"))
  {
    c.Sc = to_real("Sc", *v);
  }
  if (auto v = take("physics.coefficients"))
  {
    if (*v == "derived")
    {
      c.coefficient_override.reset();
    }
    else
    {
      const std::vector<double> k = to_reals("coefficients", *v);
      if (k.size() != 4)
      {
        throw ConfigError("config: coefficients expects 'derived' or four reals");
      }
      c.coefficient_override = Coefficients{k[0], k[1], k[2], k[3]};
    }
  }
  if (auto v = take("elements.order_u"))
  {
    c.order_u = to_int("order_u", *v);
  }
  if (auto v = take("elements.order_b"))
  {
    c.order_b = to_int("order_b", *v);
  }
  if (auto v = take("boundary.dirichlet_u"))
  {
    c.dirichlet_u = to_bool("dirichlet_u", *v);
  }
  if (auto v = take("boundary.bc_b"))
  {
    c.b_sides = parse_b_sides(*v, c.dim);
  }
  if (auto v = take("pressure.mode"))
  {
    c.pressure = parse_pressure(*v);
  }
  if (auto v = take("pressure.pin_point"))
  {
    const std::vector<double> p = to_reals("pin_point", *v);
    if (p.empty() || p.size() > 3)
    {
      throw ConfigError("config: pin_point expects up to three coordinates");
    }
    c.pin_point.setZero();
    for (std::size_t i = 0; i < p.size(); ++i)
    {
      c.pin_point(static_cast<Eigen::Index>(i)) = p[i];
    }
  }
  if (auto v = take("pressure.pin_value"))
  {
    if (*v == "exact")
    {
      c.pin_value.reset();
    }
    else
    {
      c.pin_value = to_real("pin_value", *v);
    }
  }
  if (auto v = take("initial.clean_divergence"))
  {
    c.clean_divergence = to_bool("clean_divergence", *v);
  }
  if (auto v = take("solver.method"))
  {
    try
    {
      c.solver.method = parse_solver_method(*v);
    }
    catch (const Error &e)
    {
      throw ConfigError(e.what());
    }
  }
  if (auto v = take("solver.tolerance"))
  {
    c.solver.relative_residual_tol = to_real("tolerance", *v);
  }
  if (auto v = take("solver.max_iterations"))
  {
    c.solver.max_iterations = to_int("max_iterations", *v);
  }
  if (auto v = take("solver.restart"))
  {
    c.solver.restart = to_int("restart", *v);
  }
  if (!kv.empty())
  {
    throw ConfigError("config: unknown key '" + kv.begin()->first + "'");
  }
  c.validate();
  return c;
}

ProblemConfig load_config(const std::string &path)
{
  std::ifstream in(path);
  if (!in)
  {
    throw ConfigError("cannot open config file '" + path + "'");
  }
  return parse_config(in);
}

void write_config(std::ostream &os, const ProblemConfig &c)
{
  os << "[case]\n"
     << "name = " << case_name(c.case_id) << '\n'
     << "solution = " << c.solution << '\n'
     << "out = " << c.out << '\n'
     << "alpha = " << real(c.alpha) << '\n'
     << "\n[mesh]\n"
     << "dim = " << c.dim << '\n'
     << "M = " << c.M << '\n'
     << "\n[time]\n"
     << "tau = " << real(c.tau) << '\n'
     << "t_final = " << real(c.t_final) << '\n'
     << "bdf2 = " << (c.bdf2 ? "true" : "false") << '\n'
     << "steady_tol = " << real(c.steady_tol) << '\n';
  if (!c.snapshot_times.empty())
  {
    os << "snapshots = " << reals(c.snapshot_times) << '\n';
  }
  os << "\n[physics]\n"
     << "Re = " << real(c.Re) << '\n'
     << "Rm = " << real(c.Rm) << '\n'
     << "Sc = " << real(c.Sc) << '\n';
  if (c.coefficient_override)
  {
    const Coefficients &k = *c.coefficient_override;
    os << "coefficients = " << reals({k.viscous, k.lorentz, k.diffusion, k.induction}) << '\n';
  }
  else
  {
    os << "coefficients = derived\n";
  }
  os << "\n[elements]\n"
     << "order_u = " << c.order_u << '\n'
     << "order_b = " << c.order_b << '\n'
     << "\n[boundary]\n"
     << "dirichlet_u = " << (c.dirichlet_u ? "true" : "false") << '\n'
     << "bc_b = " << format_b_sides(c.b_sides, c.dim) << '\n'
     << "\n[pressure]\n"
     << "mode = " << pressure_name(c.pressure) << '\n'
     << "pin_point = " << reals({c.pin_point.x(), c.pin_point.y(), c.pin_point.z()}) << '\n'
     << "pin_value = " << (c.pin_value ? real(*c.pin_value) : std::string("exact")) << '\n'
     << "\n[initial]\n"
     << "clean_divergence = " << (c.clean_divergence ? "true" : "false") << '\n'
     << "\n[solver]\n"
     << "method = " << solver_method_name(c.solver.method) << '\n'
     << "tolerance = " << real(c.solver.relative_residual_tol) << '\n'
     << "max_iterations = " << c.solver.max_iterations << '\n'
     << "restart = " << c.solver.restart << '\n';
}

}  // namespace mhdfem

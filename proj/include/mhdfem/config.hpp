// SPDX-License-Identifier: Apache-2.0

#ifndef MHDFEM_CONFIG_HPP
#define MHDFEM_CONFIG_HPP

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "mhdfem/assembly.hpp"
#include "mhdfem/linsolve.hpp"

namespace mhdfem
{

// Invalid configuration or usage; the CLI maps it to exit code 2.
class ConfigError : public Error
{
public:
  using Error::Error;
};

enum class CaseId
{
  Hartmann,
  Mms2d,
  Mms3d,
  Cavity3d,
  Decay
};

CaseId parse_case(const std::string &name);
const char *case_name(CaseId id);

//
// Everything needed to reproduce one run. Serialized as
//
//   [section]
//   key = value
//
// with '#' comments. Reals are written with 17 significant digits so a
// written config reloads to the identical run.
//
struct ProblemConfig
{
  CaseId case_id = CaseId::Mms2d;
  std::string solution = "trig";  // mms2d: trig | poly | poly-steady
  std::string out = ".";

  int dim = 2;
  int M = 8;

  double tau = 1.0 / 64;
  double t_final = 0.25;
  bool bdf2 = false;
  double steady_tol = 0.0;
  std::vector<double> snapshot_times;

  double Re = 1.0, Rm = 1.0, Sc = 1.0;
  // Replaces the (viscous, lorentz, diffusion, induction) weights derived from Re, Rm, Sc.
  std::optional<Coefficients> coefficient_override;

  int order_u = 2;  // velocity degree; pressure is one lower
  int order_b = 1;

  bool dirichlet_u = true;
  SideMask b_sides = 0;  // essential tangential B on these sides, natural elsewhere

  PressureMode pressure = PressureMode::MeanZero;
  Eigen::Vector3d pin_point = Eigen::Vector3d::Zero();
  // Pin value; empty means "exact pressure at the pin point" when the case has one, else 0.
  std::optional<double> pin_value;

  bool clean_divergence = true;
  double alpha = 0.001;

  SolverConfig solver;

  Coefficients coefficients() const;
  SystemOptions system_options() const;
  // Throws ConfigError on inconsistent values.
  void validate() const;
};

// Case defaults (before any overrides).
ProblemConfig default_config(CaseId id);

ProblemConfig parse_config(std::istream &is);
ProblemConfig load_config(const std::string &path);
void write_config(std::ostream &os, const ProblemConfig &cfg);

// "natural", "tangential" (all sides) or a comma list of side numbers 1..6.
SideMask parse_b_sides(const std::string &text, int dim);
std::string format_b_sides(SideMask sides, int dim);

}  // namespace mhdfem

#endif  // MHDFEM_CONFIG_HPP

// SPDX-License-Identifier: Apache-2.0

#ifndef MHDFEM_CASES_HPP
#define MHDFEM_CASES_HPP

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "mhdfem/config.hpp"
#include "mhdfem/diagnostics.hpp"
#include "mhdfem/exact.hpp"
#include "mhdfem/timeloop.hpp"

namespace mhdfem
{

// Exact solution of a case, or null (cavity, decay).
std::unique_ptr<ExactSolution> make_exact(const ProblemConfig &cfg);

// Boundary data, sources and initial fields of a case. `exact` must outlive the result.
ProblemData make_problem_data(const ProblemConfig &cfg, const ExactSolution *exact);

struct CaseOptions
{
  bool write_outputs = true;
  // Progress lines (every `progress_every` steps); empty for silence.
  std::function<void(const std::string &)> log;
  int progress_every = 100;
};

struct CaseResult
{
  ProblemConfig config;
  RunSummary run;
  bool has_exact = false;
  ConvergenceRow errors;  // errors at the final state; orders unset
  double relative_u_l2 = 0.0;
  std::vector<std::string> written;
  double seconds = 0.0;
};

CaseResult run_case(const ProblemConfig &cfg, const CaseOptions &opts = {});

CaseResult case_hartmann(const ProblemConfig &cfg, const CaseOptions &opts = {});
CaseResult case_mms2d(const ProblemConfig &cfg, const CaseOptions &opts = {});
CaseResult case_mms3d(const ProblemConfig &cfg, const CaseOptions &opts = {});
CaseResult case_cavity3d(const ProblemConfig &cfg, const CaseOptions &opts = {});

// Time step for mesh parameter M: fixed c, c / M or c / M^2.
enum class TauRule
{
  Fixed,
  Linear,
  Quadratic
};
TauRule parse_tau_rule(const std::string &name);
double tau_for(TauRule rule, double c, int M);

// Runs the case for each M (time step from the rule) and tabulates final-time errors.
std::vector<ConvergenceRow> convergence_study(const ProblemConfig &base, const std::vector<int> &Ms, TauRule rule,
                                              double c, const CaseOptions &opts = {});
// Same at fixed M over a list of time steps; orders use the tau ratios.
std::vector<ConvergenceRow> temporal_study(const ProblemConfig &base, const std::vector<double> &taus,
                                           const CaseOptions &opts = {});

// Samples u1 and B1 along the vertical line x = 0.5 (n + 1 points) next to the closed forms.
void write_hartmann_profile(std::ostream &os, const MhdOperator &op, const State &s, int n = 100);

}  // namespace mhdfem

#endif  // MHDFEM_CASES_HPP

// SPDX-License-Identifier: Apache-2.0

#ifndef MHDFEM_DIAGNOSTICS_HPP
#define MHDFEM_DIAGNOSTICS_HPP

#include <iosfwd>
#include <string>
#include <vector>

#include "mhdfem/exact.hpp"
#include "mhdfem/fespace.hpp"

namespace mhdfem
{

inline constexpr int kErrorDegree = 6;

struct ErrorNorms
{
  double l2 = 0.0;
  double seminorm = 0.0;  // H1 for Lagrange, curl for Nedelec
};

using JacobianFn = std::function<Eigen::Matrix3d(const Eigen::Vector3d &)>;

// Errors of a discrete field against (value, derivative) callables. The derivative is
// the Jacobian for vector Lagrange fields, the gradient in row 0 for scalars and the
// curl in column 0 for Nedelec fields (2D: the z entry). An empty derivative skips the seminorm.
ErrorNorms error_norms(const FESpace &space, const Eigen::VectorXd &coeffs, const VectorFn &value,
                       const JacobianFn &derivative = {});

enum class Field
{
  Velocity,
  Pressure,
  Magnetic
};
ErrorNorms error_norms(const FESpace &space, const Eigen::VectorXd &coeffs, const ExactSolution &exact,
                       Field field, double t);

struct ConvergenceRow
{
  int M = 0;
  double h = 0.0;
  double tau = 0.0;
  double err_u_l2 = 0.0, err_p_l2 = 0.0, err_B_l2 = 0.0;
  double err_u_h1 = 0.0, err_B_curl = 0.0;
  // log2(e_prev / e) against the previous row; NaN on the first row.
  double order_u = 0.0, order_p = 0.0, order_B = 0.0;
};

// Fills the order columns between consecutive rows: refinement ratio of M, or of tau at equal M.
void compute_orders(std::vector<ConvergenceRow> &rows);
double observed_order(double e_coarse, double e_fine, double ratio = 2.0);

inline constexpr const char *kErrorsHeader = "M,h,tau,err_u_l2,err_p_l2,err_B_l2,order_u,order_p,order_B";
void write_errors_csv(std::ostream &os, const std::vector<ConvergenceRow> &rows);

struct VtkField
{
  std::string name;
  const FESpace *space;
  const Eigen::VectorXd *coeffs;
};

// Legacy ASCII VTK. Lagrange fields become point data (vertex values), Nedelec
// fields cell averages. Vectors are padded to three components.
void write_vtk(std::ostream &os, const Mesh &mesh, const std::vector<VtkField> &fields,
               const std::string &title = "mhdfem");
void export_vtk(const std::string &path, const Mesh &mesh, const std::vector<VtkField> &fields);

// "<case>_t<time>.vtk" with the time printed in shortest form.
std::string snapshot_name(const std::string &case_name, double t);

}  // namespace mhdfem

#endif  // MHDFEM_DIAGNOSTICS_HPP

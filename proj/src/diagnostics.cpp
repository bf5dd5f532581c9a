// SPDX-License-Identifier: Apache-2.0

#include "mhdfem/diagnostics.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <ostream>
#include <sstream>

#include "mhdfem/quadrature.hpp"

namespace mhdfem
{

namespace
{

Eigen::Vector3d physical_point(const CellGeometry &g, const Eigen::Ref<const Eigen::VectorXd> &ref)
{
  Eigen::Vector3d x = Eigen::Vector3d::Zero();
  const auto d = g.J.rows();
  x.head(d) = g.x.col(0) + g.J * ref;
  return x;
}

}  // namespace

ErrorNorms error_norms(const FESpace &space, const Eigen::VectorXd &coeffs, const VectorFn &value,
                       const JacobianFn &derivative)
{
  const Mesh &mesh = space.mesh();
  const int d = mesh.dim;
  const QuadRule &rule = gauss_rule(simplex_type(d), kErrorDegree);
  const int vd = space.value_dim();
  double l2 = 0.0, semi = 0.0;
  for (int c = 0; c < mesh.num_cells(); ++c)
  {
    const CellGeometry g = cell_geometry(mesh, c);
    const LocalBasis basis = space.tabulate(c, g, rule.points);
    const Eigen::VectorXd loc = gather(space, coeffs, c);
    const double vol = std::abs(g.det);
    for (Eigen::Index q = 0; q < rule.points.cols(); ++q)
    {
      const Eigen::Vector3d x = physical_point(g, rule.points.col(q));
      const double w = rule.weights(q) * vol;
      const Eigen::VectorXd uh = basis.value[q] * loc;
      const Eigen::Vector3d ex = value(x);
      l2 += w * (uh - ex.head(vd)).squaredNorm();
      if (!derivative)
      {
        continue;
      }
      const Eigen::VectorXd duh = basis.deriv[q] * loc;
      const Eigen::Matrix3d D = derivative(x);
      Eigen::VectorXd dex(duh.size());
      switch (space.family())
      {
        case Family::LagrangeScalar:
          dex = D.row(0).head(d).transpose();
          break;
        case Family::LagrangeVector:
          for (int i = 0; i < d; ++i)
          {
            for (int k = 0; k < d; ++k)
            {
              dex(i * d + k) = D(i, k);
            }
          }
          break;
        case Family::Nedelec:
          if (d == 2)
          {
            dex(0) = D(2, 0);
          }
          else
          {
            dex = D.col(0);
          }
          break;
      }
      semi += w * (duh - dex).squaredNorm();
    }
  }
  return {std::sqrt(l2), std::sqrt(semi)};
}

ErrorNorms error_norms(const FESpace &space, const Eigen::VectorXd &coeffs, const ExactSolution &exact,
                       Field field, double t)
{
  switch (field)
  {
    case Field::Velocity:
      return error_norms(
          space, coeffs, [&](const Eigen::Vector3d &x) { return exact.u(x, t); },
          [&](const Eigen::Vector3d &x) { return exact.grad_u(x, t); });
    case Field::Pressure:
      return error_norms(
          space, coeffs, [&](const Eigen::Vector3d &x) { return Eigen::Vector3d(exact.p(x, t), 0.0, 0.0); },
          [&](const Eigen::Vector3d &x) {
            Eigen::Matrix3d D = Eigen::Matrix3d::Zero();
            D.row(0) = exact.grad_p(x, t).transpose();
            return D;
          });
    case Field::Magnetic:
      return error_norms(
          space, coeffs, [&](const Eigen::Vector3d &x) { return exact.B(x, t); },
          [&](const Eigen::Vector3d &x) {
            Eigen::Matrix3d D = Eigen::Matrix3d::Zero();
            D.col(0) = exact.curl_B(x, t);
            return D;
          });
  }
  return {};
}

double observed_order(double e_coarse, double e_fine, double ratio)
{
  return std::log(e_coarse / e_fine) / std::log(ratio);
}

void compute_orders(std::vector<ConvergenceRow> &rows)
{
  const double nan = std::numeric_limits<double>::quiet_NaN();
  for (std::size_t i = 0; i < rows.size(); ++i)
  {
    ConvergenceRow &r = rows[i];
    if (i == 0)
    {
      r.order_u = r.order_p = r.order_B = nan;
      continue;
    }
    const ConvergenceRow &c = rows[i - 1];
    const double ratio = r.M != c.M ? static_cast<double>(r.M) / c.M : c.tau / r.tau;
    r.order_u = observed_order(c.err_u_l2, r.err_u_l2, ratio);
    r.order_p = observed_order(c.err_p_l2, r.err_p_l2, ratio);
    r.order_B = observed_order(c.err_B_l2, r.err_B_l2, ratio);
  }
}

void write_errors_csv(std::ostream &os, const std::vector<ConvergenceRow> &rows)
{
  const auto flags = os.flags();
  const auto prec = os.precision(17);
  os << kErrorsHeader << '\n';
  for (const ConvergenceRow &r : rows)
  {
    os << r.M << ',' << r.h << ',' << r.tau << ',' << r.err_u_l2 << ',' << r.err_p_l2 << ',' << r.err_B_l2 << ','
       << r.order_u << ',' << r.order_p << ',' << r.order_B << '\n';
  }
  os.precision(prec);
  os.flags(flags);
}

void write_vtk(std::ostream &os, const Mesh &mesh, const std::vector<VtkField> &fields, const std::string &title)
{
  write_vtk_mesh_header(os, mesh, title);
  const auto prec = os.precision(17);
  const int nv = mesh.num_vertices();
  bool point_header = false, cell_header = false;
  for (const VtkField &f : fields)
  {
    if (!f.space->is_lagrange())
    {
      continue;
    }
    if (&f.space->mesh() != &mesh && f.space->mesh().num_vertices() != nv)
    {
      throw Error("write_vtk: field '" + f.name + "' lives on another mesh");
    }
    if (!point_header)
    {
      os << "POINT_DATA " << nv << '\n';
      point_header = true;
    }
    const Eigen::VectorXd &x = *f.coeffs;
    const Eigen::Index ns = f.space->num_scalar_dofs();
    if (f.space->family() == Family::LagrangeScalar)
    {
      os << "SCALARS " << f.name << " double 1\nLOOKUP_TABLE default\n";
      for (int v = 0; v < nv; ++v)
      {
        os << x(v) << '\n';
      }
    }
    else
    {
      os << "VECTORS " << f.name << " double\n";
      for (int v = 0; v < nv; ++v)
      {
        for (int c = 0; c < 3; ++c)
        {
          os << (c ? " " : "") << (c < mesh.dim ? x(c * ns + v) : 0.0);
        }
        os << '\n';
      }
    }
  }
  for (const VtkField &f : fields)
  {
    if (f.space->is_lagrange())
    {
      continue;
    }
    if (!cell_header)
    {
      os << "CELL_DATA " << mesh.num_cells() << '\n';
      cell_header = true;
    }
    // Cell averages: the degree-2 rule is exact for the polynomial degrees in use.
    const QuadRule &rule = gauss_rule(simplex_type(mesh.dim), 2);
    const double ref_volume = rule.weights.sum();
    os << "VECTORS " << f.name << " double\n";
    for (int c = 0; c < mesh.num_cells(); ++c)
    {
      const LocalBasis b = f.space->tabulate(c, rule.points);
      const Eigen::VectorXd loc = gather(*f.space, *f.coeffs, c);
      Eigen::VectorXd avg = Eigen::VectorXd::Zero(mesh.dim);
      for (Eigen::Index q = 0; q < rule.points.cols(); ++q)
      {
        avg += rule.weights(q) * (b.value[q] * loc);
      }
      avg /= ref_volume;
      for (int k = 0; k < 3; ++k)
      {
        os << (k ? " " : "") << (k < mesh.dim ? avg(k) : 0.0);
      }
      os << '\n';
    }
  }
  os.precision(prec);
}

void export_vtk(const std::string &path, const Mesh &mesh, const std::vector<VtkField> &fields)
{
  std::ofstream out(path);
  if (!out)
  {
    throw Error("cannot write '" + path + "'");
  }
  write_vtk(out, mesh, fields);
  if (!out)
  {
    throw Error("write failed for '" + path + "'");
  }
}

std::string snapshot_name(const std::string &case_name, double t)
{
  std::ostringstream os;
  os << case_name << "_t" << t << ".vtk";
  return os.str();
}

}  // namespace mhdfem

// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <cmath>
#include <random>

#include <Eigen/LU>

#include "mhdfem/fespace.hpp"
#include "mhdfem/quadrature.hpp"

using namespace mhdfem;

namespace
{

std::shared_ptr<const Mesh> square(int M)
{
  return std::make_shared<const Mesh>(build_unit_square_mesh(M));
}

std::shared_ptr<const Mesh> cube(int M)
{
  return std::make_shared<const Mesh>(build_unit_cube_mesh(M));
}

const std::vector<Eigen::Vector3d> &samples2d()
{
  static const std::vector<Eigen::Vector3d> pts = {
      {0.13, 0.77, 0}, {0.5, 0.5, 0}, {0.91, 0.04, 0}, {0.333, 0.21, 0}, {0.0, 1.0, 0}};
  return pts;
}

const std::vector<Eigen::Vector3d> &samples3d()
{
  static const std::vector<Eigen::Vector3d> pts = {
      {0.13, 0.77, 0.4}, {0.5, 0.5, 0.5}, {0.91, 0.04, 0.66}, {0.333, 0.21, 0.9}};
  return pts;
}

// L2 norm of (field - exact) and of (curl field - curl exact) over the mesh.
std::pair<double, double> nedelec_errors(const FESpace &Q, const Eigen::VectorXd &c,
                                         const VectorFn &f, const VectorFn &curlf)
{
  const Mesh &m = Q.mesh();
  const QuadRule &rule = gauss_rule(simplex_type(m.dim), 6);
  double e0 = 0.0, e1 = 0.0;
  for (int k = 0; k < m.num_cells(); ++k)
  {
    const CellGeometry g = cell_geometry(m, k);
    const LocalBasis b = Q.tabulate(k, g, rule.points);
    const Eigen::VectorXd loc = gather(Q, c, k);
    for (Eigen::Index q = 0; q < rule.size(); ++q)
    {
      const Eigen::Vector3d x = g.map(rule.points.col(q));
      const Eigen::VectorXd v = b.value[q] * loc;
      const Eigen::VectorXd cu = b.deriv[q] * loc;
      const double w = rule.weights(q) * g.det;
      e0 += w * (v - f(x).head(m.dim)).squaredNorm();
      const Eigen::Vector3d ce = curlf(x);
      e1 += w * (m.dim == 2 ? std::pow(cu(0) - ce(2), 2) : (cu - ce).squaredNorm());
    }
  }
  return {std::sqrt(e0), std::sqrt(e1)};
}

double lagrange_l2_error(const FESpace &V, const Eigen::VectorXd &c, const ScalarFn &f)
{
  const Mesh &m = V.mesh();
  const QuadRule &rule = gauss_rule(simplex_type(m.dim), 6);
  double e = 0.0;
  for (int k = 0; k < m.num_cells(); ++k)
  {
    const CellGeometry g = cell_geometry(m, k);
    const LocalBasis b = V.tabulate(k, g, rule.points);
    const Eigen::VectorXd loc = gather(V, c, k);
    for (Eigen::Index q = 0; q < rule.size(); ++q)
    {
      const double v = (b.value[q] * loc)(0);
      e += rule.weights(q) * g.det * std::pow(v - f(g.map(rule.points.col(q))), 2);
    }
  }
  return std::sqrt(e);
}

}  // namespace

TEST_CASE("dof counts")
{
  const auto m32 = cube(32);
  CHECK(count_dofs(*m32, Family::LagrangeVector, 2) == 823875);
  CHECK(count_dofs(*m32, Family::LagrangeScalar, 1) == 35937);
  CHECK(count_dofs(*m32, Family::Nedelec, 1) == 238688);
  CHECK(count_dofs(*m32, Family::Nedelec, 2) == 1276096);
  CHECK(count_dofs(*square(1), Family::Nedelec, 1) == 5);

  const auto m4 = cube(4);
  CHECK(count_dofs(*m4, Family::LagrangeVector, 2) == 3 * (125 + m4->num_edges()));
  for (auto [fam, ord] : {std::pair{Family::LagrangeVector, 2}, std::pair{Family::LagrangeScalar, 1},
                          std::pair{Family::LagrangeScalar, 2}, std::pair{Family::Nedelec, 1}})
  {
    CHECK(FESpace(m4, fam, ord).num_dofs() == count_dofs(*m4, fam, ord));
  }
  const auto s4 = square(4);
  CHECK(FESpace(s4, Family::Nedelec, 2).num_dofs() == count_dofs(*s4, Family::Nedelec, 2));
}

TEST_CASE("unsupported elements")
{
  CHECK_THROWS_AS(FESpace(cube(1), Family::Nedelec, 2), Error);
  CHECK_THROWS_AS(FESpace(square(1), Family::Nedelec, 3), Error);
  CHECK_THROWS_AS(FESpace(square(1), Family::LagrangeScalar, 3), Error);
}

TEST_CASE("lagrange reproduction")
{
  for (auto mesh : {square(3), cube(2)})
  {
    const FESpace V2(mesh, Family::LagrangeScalar, 2);
    const ScalarFn quad = [](const Eigen::Vector3d &x) {
      return 1.0 + x(0) - 2.0 * x(1) + x(0) * x(1) + 3.0 * x(1) * x(1) - x(2) * x(0);
    };
    const Eigen::VectorXd c = interpolate(V2, quad);
    const auto &pts = mesh->dim == 2 ? samples2d() : samples3d();
    for (const auto &x : pts)
    {
      CHECK(evaluate(V2, c, x)(0) == doctest::Approx(quad(x)).epsilon(1e-12));
    }
    const Eigen::Vector3d x = pts[2];
    const Eigen::Vector3d grad(1.0 + x(1) - x(2), -2.0 + x(0) + 6.0 * x(1), -x(0));
    CHECK((gradient_evaluate(V2, c, x) - (mesh->dim == 2 ? Eigen::Vector3d(grad(0), grad(1), 0) : grad)).norm() <
          1e-12);

    const FESpace U(mesh, Family::LagrangeVector, 2);
    const VectorFn vec = [](const Eigen::Vector3d &x) {
      return Eigen::Vector3d(x(0) * x(1), 1 - x(0) * x(0), x(2));
    };
    const Eigen::VectorXd cu = interpolate(U, vec);
    for (const auto &x : pts)
    {
      CHECK((evaluate(U, cu, x) - vec(x)).head(mesh->dim).norm() < 1e-12);
    }
  }
}

TEST_CASE("nedelec reproduction")
{
  const VectorFn constant = [](const Eigen::Vector3d &) { return Eigen::Vector3d(0.3, -1.2, 0.7); };
  const VectorFn rot = [](const Eigen::Vector3d &x) { return Eigen::Vector3d(-x(1), x(0), 0); };
  const VectorFn shear = [](const Eigen::Vector3d &x) { return Eigen::Vector3d(x(1), 0, 0); };
  for (int order : {1, 2})
  {
    const FESpace Q(square(3), Family::Nedelec, order);
    const Eigen::VectorXd cc = interpolate(Q, constant);
    const Eigen::VectorXd cr = interpolate(Q, rot);
    const Eigen::VectorXd cs = interpolate(Q, shear);
    for (const auto &x : samples2d())
    {
      CHECK((evaluate(Q, cc, x) - Eigen::Vector3d(0.3, -1.2, 0)).norm() < 1e-12);
      CHECK((evaluate(Q, cr, x) - rot(x)).norm() < 1e-12);
      CHECK(curl_evaluate(Q, cr, x)(2) == doctest::Approx(2.0));
      CHECK(curl_evaluate(Q, cs, x)(2) == doctest::Approx(-1.0));
    }
  }
  // Full P1 vector fields lie in the order-2 space.
  const FESpace Q2(square(2), Family::Nedelec, 2);
  const VectorFn lin = [](const Eigen::Vector3d &x) {
    return Eigen::Vector3d(1 + 2 * x(0) - x(1), 3 * x(0) + 0.5 * x(1), 0);
  };
  const Eigen::VectorXd cl = interpolate(Q2, lin);
  for (const auto &x : samples2d())
  {
    CHECK((evaluate(Q2, cl, x) - lin(x)).norm() < 1e-12);
  }

  const FESpace Q3(cube(2), Family::Nedelec, 1);
  const VectorFn rot3 = [](const Eigen::Vector3d &x) {
    return Eigen::Vector3d(1 - x(1) + 2 * x(2), 0.5 + x(0) - x(2), x(1) - 2 * x(0));
  };
  const Eigen::VectorXd c3 = interpolate(Q3, rot3);
  for (const auto &x : samples3d())
  {
    CHECK((evaluate(Q3, c3, x) - rot3(x)).norm() < 1e-12);
    CHECK((curl_evaluate(Q3, c3, x) - Eigen::Vector3d(2, 4, 2)).norm() < 1e-12);
  }
}

TEST_CASE("tangential continuity across interior facets")
{
  std::mt19937 gen(7);
  std::uniform_real_distribution<double> dist(-1, 1);
  for (auto [mesh, order] : {std::pair{square(3), 1}, std::pair{square(3), 2}, std::pair{cube(2), 1}})
  {
    const FESpace Q(mesh, Family::Nedelec, order);
    Eigen::VectorXd c(Q.num_dofs());
    for (Eigen::Index i = 0; i < c.size(); ++i)
    {
      c(i) = dist(gen);
    }
    const Mesh &m = *mesh;
    double worst = 0.0;
    for (int e = 0; e < m.num_edges(); ++e)
    {
      if (m.edge_sides[e] != 0)
      {
        continue;
      }
      const Eigen::Vector3d a = m.vertex(m.edges(0, e)), b = m.vertex(m.edges(1, e));
      const Eigen::Vector3d t = b - a;
      // Compare every pair of cells sharing this edge.
      std::vector<int> cells;
      for (int k = 0; k < m.num_cells(); ++k)
      {
        for (int l = 0; l < m.edges_per_cell(); ++l)
        {
          if (m.cell_edges(l, k) == e)
          {
            cells.push_back(k);
          }
        }
      }
      for (double s : {0.2, 0.5, 0.85})
      {
        const Eigen::Vector3d x = a + s * t;
        std::vector<double> vals;
        for (int k : cells)
        {
          const CellGeometry g = cell_geometry(m, k);
          const Eigen::VectorXd ref = g.J.lu().solve(x.head(m.dim) - g.x.col(0));
          const LocalBasis bas = Q.tabulate(k, g, ref);
          const Eigen::VectorXd v = bas.value[0] * gather(Q, c, k);
          vals.push_back(v.dot(t.head(m.dim)));
        }
        for (double v : vals)
        {
          worst = std::max(worst, std::abs(v - vals[0]));
        }
      }
    }
    CHECK(worst < 1e-12);
  }
}

TEST_CASE("gradient inclusion map")
{
  for (auto [mesh, order] : {std::pair{square(1), 1}, std::pair{square(3), 2}, std::pair{cube(2), 1},
                             std::pair{square(3), 1}})
  {
    const FESpace V(mesh, Family::LagrangeScalar, order);
    const FESpace Q(mesh, Family::Nedelec, order);
    const SparseMatrix G = gradient_inclusion_map(V, Q);
    CHECK((G * Eigen::VectorXd::Ones(V.num_dofs())).norm() < 1e-12);
    Eigen::VectorXd s = Eigen::VectorXd::LinSpaced(V.num_dofs(), -1, 2).array().sin();
    const Eigen::VectorXd gs = G * s;
    const auto &pts = mesh->dim == 2 ? samples2d() : samples3d();
    for (const auto &x : pts)
    {
      CHECK((evaluate(Q, gs, x) - gradient_evaluate(V, s, x)).norm() < 1e-11);
    }
    if (order == 1)
    {
      for (int k = 0; k < G.outerSize(); ++k)
      {
        for (SparseMatrix::InnerIterator it(G, k); it; ++it)
        {
          CHECK(std::abs(it.value()) == 1.0);
        }
      }
    }
  }
  // s = x: each edge DOF equals the x-extent of the edge.
  const auto m1 = square(1);
  const FESpace V(m1, Family::LagrangeScalar, 1), Q(m1, Family::Nedelec, 1);
  const Eigen::VectorXd s = interpolate(V, ScalarFn([](const Eigen::Vector3d &x) { return x(0); }));
  const Eigen::VectorXd gs = gradient_inclusion_map(V, Q) * s;
  for (int e = 0; e < m1->num_edges(); ++e)
  {
    CHECK(gs(e) == doctest::Approx(m1->vertices(0, m1->edges(1, e)) - m1->vertices(0, m1->edges(0, e))));
  }
  CHECK_THROWS_AS(gradient_inclusion_map(FESpace(m1, Family::LagrangeScalar, 2), Q), Error);
}

TEST_CASE("boundary dofs")
{
  const auto m = square(2);
  const FESpace U(m, Family::LagrangeVector, 2);
  CHECK(U.boundary_dofs(kAllSides).size() == 2 * 16);
  const FESpace Q(m, Family::Nedelec, 1);
  CHECK(Q.boundary_dofs(kAllSides).size() == 8);
  CHECK(Q.boundary_dofs(side_bit(1)).size() == 2);
  const FESpace Q2(m, Family::Nedelec, 2);
  CHECK(Q2.boundary_dofs(kAllSides).size() == 16);
}

TEST_CASE("interpolation convergence")
{
  const ScalarFn s = [](const Eigen::Vector3d &x) { return std::sin(2 * x(0)) * std::exp(x(1)); };
  const VectorFn f = [](const Eigen::Vector3d &x) {
    return Eigen::Vector3d(std::sin(3 * x(1)), std::cos(2 * x(0) + x(1)), 0);
  };
  const VectorFn curlf = [](const Eigen::Vector3d &x) {
    return Eigen::Vector3d(0, 0, -2 * std::sin(2 * x(0) + x(1)) - 3 * std::cos(3 * x(1)));
  };
  for (int order : {1, 2})
  {
    std::vector<double> el, e0, ec;
    for (int M : {4, 8, 16})
    {
      const auto mesh = square(M);
      const FESpace V(mesh, Family::LagrangeScalar, order);
      el.push_back(lagrange_l2_error(V, interpolate(V, s), s));
      const FESpace Q(mesh, Family::Nedelec, order);
      const auto [a, b] = nedelec_errors(Q, interpolate(Q, f), f, curlf);
      e0.push_back(a);
      ec.push_back(b);
    }
    for (int i = 0; i < 2; ++i)
    {
      CHECK(std::log2(el[i] / el[i + 1]) == doctest::Approx(order + 1).epsilon(0.1 / (order + 1)));
      CHECK(std::log2(e0[i] / e0[i + 1]) > order - 0.1);
      CHECK(std::log2(ec[i] / ec[i + 1]) > order - 0.1);
    }
  }
}

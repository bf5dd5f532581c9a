// SPDX-License-Identifier: Apache-2.0

#include "mhdfem/fespace.hpp"

#include <algorithm>

#include <Eigen/Geometry>
#include <Eigen/LU>

#include "mhdfem/quadrature.hpp"

namespace mhdfem
{

namespace
{

// Degree of the moment quadrature used by Nedelec interpolation.
constexpr int kMomentDegree = 4;

// Evaluates a vector field given barycentric and physical coordinates.
using BaryField = std::function<SmallVector(const SmallVector &bary, const Eigen::Vector3d &x)>;

double cross2(const Eigen::Ref<const SmallVector> &a, const Eigen::Ref<const SmallVector> &b)
{
  return a(0) * b(1) - a(1) * b(0);
}

// Curl of the product a x b for two gradients, as a column (1 entry in 2D, 3 in 3D).
Eigen::VectorXd cross(const Eigen::Ref<const SmallVector> &a, const Eigen::Ref<const SmallVector> &b)
{
  if (a.size() == 2)
  {
    Eigen::VectorXd out(1);
    out(0) = cross2(a, b);
    return out;
  }
  return Eigen::Vector3d(a.head<3>()).cross(Eigen::Vector3d(b.head<3>()));
}

SmallVector barycentric(const Eigen::Ref<const Eigen::VectorXd> &ref)
{
  SmallVector L(ref.size() + 1);
  L(0) = 1.0 - ref.sum();
  L.tail(ref.size()) = ref;
  return L;
}

// Values and gradients of the scalar Lagrange basis at barycentric point L.
void lagrange_basis(const Mesh &mesh, int order, int cell, const SmallVector &L,
                    const SmallMatrix &g, Eigen::Ref<Eigen::RowVectorXd, 0, Eigen::InnerStride<>> val,
                    Eigen::Ref<Eigen::MatrixXd> grad)
{
  const int nv = mesh.dim + 1;
  if (order == 1)
  {
    val = L.transpose();
    grad = g;
    return;
  }
  (void)cell;
  for (int k = 0; k < nv; ++k)
  {
    val(k) = L(k) * (2.0 * L(k) - 1.0);
    grad.col(k) = (4.0 * L(k) - 1.0) * g.col(k);
  }
  for (int k = 0; k < mesh.edges_per_cell(); ++k)
  {
    const auto [i, j] = mesh.local_edge(k);
    val(nv + k) = 4.0 * L(i) * L(j);
    grad.col(nv + k) = 4.0 * (L(i) * g.col(j) + L(j) * g.col(i));
  }
}

// Order-2 (2D) Nedelec spanning set: lambda_a W_ij for the pairs below.
struct SpanTerm
{
  int a, i, j;
};
constexpr std::array<SpanTerm, 8> kNed2Span = {{{0, 0, 1},
                                                {1, 0, 1},
                                                {0, 0, 2},
                                                {2, 0, 2},
                                                {1, 1, 2},
                                                {2, 1, 2},
                                                {2, 0, 1},
                                                {0, 1, 2}}};

void ned2_span(const SmallVector &L, const SmallMatrix &g, Eigen::Ref<Eigen::MatrixXd> val,
               Eigen::Ref<Eigen::MatrixXd> curl)
{
  for (int s = 0; s < 8; ++s)
  {
    const auto [a, i, j] = kNed2Span[s];
    const SmallVector W = L(i) * g.col(j) - L(j) * g.col(i);
    val.col(s) = L(a) * W;
    curl(0, s) = cross2(g.col(a), W) + 2.0 * L(a) * cross2(g.col(i), g.col(j));
  }
}

// Applies the Nedelec DOF functionals of one cell (global orientation) to a field.
Eigen::VectorXd nedelec_functionals(const Mesh &mesh, int order, int cell,
                                    const CellGeometry &geom, const BaryField &field)
{
  const int d = mesh.dim;
  const int ne = mesh.edges_per_cell();
  const QuadRule &line = gauss_rule(CellType::Edge, kMomentDegree);
  Eigen::VectorXd out(order == 1 ? ne : 2 * ne + 2);
  for (int k = 0; k < ne; ++k)
  {
    auto [i, j] = mesh.local_edge(k);
    if (mesh.cells(i, cell) > mesh.cells(j, cell))
    {
      std::swap(i, j);  // i is now the globally lower vertex
    }
    const SmallVector t = geom.x.col(j) - geom.x.col(i);
    double m0 = 0.0, m1 = 0.0;
    for (Eigen::Index q = 0; q < line.size(); ++q)
    {
      const double s = line.points(0, q);
      SmallVector L = SmallVector::Zero(d + 1);
      L(i) = 1.0 - s;
      L(j) = s;
      const Eigen::Vector3d x = geom.map(L.tail(d));
      const double ft = field(L, x).dot(t);
      m0 += line.weights(q) * ft * (1.0 - s);
      m1 += line.weights(q) * ft * s;
    }
    if (order == 1)
    {
      out(k) = m0 + m1;
    }
    else
    {
      out(2 * k) = m0;
      out(2 * k + 1) = m1;
    }
  }
  if (order == 2)
  {
    const QuadRule &rule = gauss_rule(CellType::Triangle, kMomentDegree);
    const SmallVector d1 = geom.x.col(1) - geom.x.col(0);
    const SmallVector d2 = geom.x.col(2) - geom.x.col(0);
    double m0 = 0.0, m1 = 0.0;
    for (Eigen::Index q = 0; q < rule.size(); ++q)
    {
      const SmallVector L = barycentric(rule.points.col(q));
      const SmallVector f = field(L, geom.map(rule.points.col(q)));
      m0 += 2.0 * rule.weights(q) * f.dot(d1);
      m1 += 2.0 * rule.weights(q) * f.dot(d2);
    }
    out(2 * ne) = m0;
    out(2 * ne + 1) = m1;
  }
  return out;
}

}  // namespace

const char *family_name(Family f)
{
  switch (f)
  {
    case Family::LagrangeScalar:
      return "lagrange-scalar";
    case Family::LagrangeVector:
      return "lagrange-vector";
    case Family::Nedelec:
      return "nedelec-first-kind";
  }
  return "?";
}

FESpace::FESpace(std::shared_ptr<const Mesh> mesh, Family family, int order)
    : mesh_(std::move(mesh)), family_(family), order_(order)
{
  const int d = mesh_->dim;
  const bool supported = (family == Family::LagrangeScalar && (order == 1 || order == 2)) ||
                         (family == Family::LagrangeVector && order == 2) ||
                         (family == Family::Nedelec && (order == 1 || (order == 2 && d == 2)));
  if (!supported)
  {
    throw Error(std::string("unsupported element: ") + family_name(family) + " order " +
                std::to_string(order) + " in " + std::to_string(d) + "D");
  }
  if (family == Family::Nedelec)
  {
    build_nedelec();
  }
  else
  {
    build_lagrange();
  }
}

void FESpace::build_lagrange()
{
  const Mesh &m = *mesh_;
  const int nv = m.num_vertices();
  const int nvl = m.dim + 1;
  const int nsl = order_ == 1 ? nvl : nvl + m.edges_per_cell();
  const Eigen::Index ns = order_ == 1 ? nv : nv + m.num_edges();

  nodes_.resize(m.dim, ns);
  nodes_.leftCols(nv) = m.vertices;
  if (order_ == 2)
  {
    for (int e = 0; e < m.num_edges(); ++e)
    {
      nodes_.col(nv + e) = 0.5 * (m.vertices.col(m.edges(0, e)) + m.vertices.col(m.edges(1, e)));
    }
  }

  Eigen::MatrixXi scalar(nsl, m.num_cells());
  scalar.topRows(nvl) = m.cells;
  if (order_ == 2)
  {
    scalar.bottomRows(m.edges_per_cell()) = m.cell_edges.array() + nv;
  }

  if (family_ == Family::LagrangeScalar)
  {
    cell_dofs_ = scalar;
    ndofs_ = ns;
  }
  else
  {
    cell_dofs_.resize(m.dim * nsl, m.num_cells());
    for (int c = 0; c < m.dim; ++c)
    {
      cell_dofs_.middleRows(c * nsl, nsl) = scalar.array() + static_cast<int>(c * ns);
    }
    ndofs_ = m.dim * ns;
  }
  cell_signs_ = Eigen::MatrixXi::Ones(cell_dofs_.rows(), cell_dofs_.cols());
}

void FESpace::build_nedelec()
{
  const Mesh &m = *mesh_;
  if (order_ == 1)
  {
    cell_dofs_ = m.cell_edges;
    cell_signs_ = m.cell_edge_signs;
    ndofs_ = m.num_edges();
    return;
  }
  const int ne = m.num_edges();
  cell_dofs_.resize(8, m.num_cells());
  for (int c = 0; c < m.num_cells(); ++c)
  {
    for (int k = 0; k < 3; ++k)
    {
      cell_dofs_(2 * k, c) = 2 * m.cell_edges(k, c);
      cell_dofs_(2 * k + 1, c) = 2 * m.cell_edges(k, c) + 1;
    }
    cell_dofs_(6, c) = 2 * ne + 2 * c;
    cell_dofs_(7, c) = 2 * ne + 2 * c + 1;
  }
  cell_signs_ = Eigen::MatrixXi::Ones(8, m.num_cells());
  ndofs_ = 2 * ne + 2 * m.num_cells();

  // Dual basis: the functionals applied to the spanning set give D, coefficients are D^{-1}.
  dual_coeffs_.resize(m.num_cells());
  for (int c = 0; c < m.num_cells(); ++c)
  {
    const CellGeometry geom = cell_geometry(m, c);
    Eigen::Matrix<double, 8, 8> D;
    for (int s = 0; s < 8; ++s)
    {
      const auto [a, i, j] = kNed2Span[s];
      const SmallMatrix &g = geom.grad_lambda;
      BaryField span = [&, a = a, i = i, j = j](const SmallVector &L, const Eigen::Vector3d &) {
        return SmallVector(L(a) * (L(i) * g.col(j) - L(j) * g.col(i)));
      };
      D.col(s) = nedelec_functionals(m, 2, c, geom, span);
    }
    dual_coeffs_[c] = D.inverse();
  }
}

std::vector<int> FESpace::boundary_dofs(SideMask sides) const
{
  const Mesh &m = *mesh_;
  std::vector<int> out;
  if (family_ == Family::Nedelec)
  {
    for (int e = 0; e < m.num_edges(); ++e)
    {
      if (m.edge_sides[e] & sides)
      {
        if (order_ == 1)
        {
          out.push_back(e);
        }
        else
        {
          out.push_back(2 * e);
          out.push_back(2 * e + 1);
        }
      }
    }
    return out;
  }
  std::vector<int> scalar;
  for (int v = 0; v < m.num_vertices(); ++v)
  {
    if (m.vertex_sides[v] & sides)
    {
      scalar.push_back(v);
    }
  }
  if (order_ == 2)
  {
    for (int e = 0; e < m.num_edges(); ++e)
    {
      if (m.edge_sides[e] & sides)
      {
        scalar.push_back(m.num_vertices() + e);
      }
    }
  }
  const int ncomp = family_ == Family::LagrangeVector ? m.dim : 1;
  const auto ns = static_cast<int>(nodes_.cols());
  for (int c = 0; c < ncomp; ++c)
  {
    for (int s : scalar)
    {
      out.push_back(c * ns + s);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

LocalBasis FESpace::tabulate(int cell, const Eigen::Ref<const Eigen::MatrixXd> &ref_points) const
{
  return tabulate(cell, cell_geometry(*mesh_, cell), ref_points);
}

LocalBasis FESpace::tabulate(int cell, const CellGeometry &geom,
                             const Eigen::Ref<const Eigen::MatrixXd> &ref_points) const
{
  const Mesh &m = *mesh_;
  const int d = m.dim;
  const auto np = ref_points.cols();
  const int nloc = num_local_dofs();
  const SmallMatrix &g = geom.grad_lambda;
  LocalBasis out;
  out.value.resize(np);
  out.deriv.resize(np);
  for (Eigen::Index q = 0; q < np; ++q)
  {
    const SmallVector L = barycentric(ref_points.col(q));
    switch (family_)
    {
      case Family::LagrangeScalar:
      {
        out.value[q].resize(1, nloc);
        out.deriv[q].resize(d, nloc);
        lagrange_basis(m, order_, cell, L, g, out.value[q].row(0), out.deriv[q]);
        break;
      }
      case Family::LagrangeVector:
      {
        const int nsl = nloc / d;
        Eigen::RowVectorXd val(nsl);
        Eigen::MatrixXd grad(d, nsl);
        lagrange_basis(m, order_, cell, L, g, val, grad);
        out.value[q] = Eigen::MatrixXd::Zero(d, nloc);
        out.deriv[q] = Eigen::MatrixXd::Zero(d * d, nloc);
        for (int c = 0; c < d; ++c)
        {
          out.value[q].block(c, c * nsl, 1, nsl) = val;
          out.deriv[q].block(c * d, c * nsl, d, nsl) = grad;
        }
        break;
      }
      case Family::Nedelec:
      {
        const int curl_dim = d == 2 ? 1 : 3;
        out.value[q].resize(d, nloc);
        out.deriv[q].resize(curl_dim, nloc);
        if (order_ == 1)
        {
          for (int k = 0; k < nloc; ++k)
          {
            const auto [i, j] = m.local_edge(k);
            const double s = cell_signs_(k, cell);
            out.value[q].col(k) = s * (L(i) * g.col(j) - L(j) * g.col(i));
            out.deriv[q].col(k) = 2.0 * s * cross(g.col(i), g.col(j));
          }
        }
        else
        {
          Eigen::MatrixXd val(2, 8), curl(1, 8);
          ned2_span(L, g, val, curl);
          out.value[q] = val * dual_coeffs_[cell];
          out.deriv[q] = curl * dual_coeffs_[cell];
        }
        break;
      }
    }
  }
  return out;
}

Eigen::VectorXd FESpace::local_functionals(int cell, const VectorFn &field) const
{
  if (family_ != Family::Nedelec)
  {
    throw Error("local_functionals: Nedelec spaces only");
  }
  const CellGeometry geom = cell_geometry(*mesh_, cell);
  const int d = mesh_->dim;
  return nedelec_functionals(*mesh_, order_, cell, geom,
                             [&](const SmallVector &, const Eigen::Vector3d &x) {
                               return SmallVector(field(x).head(d));
                             });
}

LagrangeReference lagrange_reference(int dim, int order,
                                     const Eigen::Ref<const Eigen::MatrixXd> &ref_points)
{
  const int nv = dim + 1;
  const int ne = dim == 2 ? 3 : 6;
  const int nloc = order == 1 ? nv : nv + ne;
  LagrangeReference out;
  out.values.resize(nloc, ref_points.cols());
  out.dlambda.assign(ref_points.cols(), Eigen::MatrixXd::Zero(nv, nloc));
  for (Eigen::Index q = 0; q < ref_points.cols(); ++q)
  {
    const SmallVector L = barycentric(ref_points.col(q));
    Eigen::MatrixXd &d = out.dlambda[q];
    for (int k = 0; k < nv; ++k)
    {
      if (order == 1)
      {
        out.values(k, q) = L(k);
        d(k, k) = 1.0;
      }
      else
      {
        out.values(k, q) = L(k) * (2.0 * L(k) - 1.0);
        d(k, k) = 4.0 * L(k) - 1.0;
      }
    }
    if (order == 2)
    {
      for (int k = 0; k < ne; ++k)
      {
        const auto [i, j] = dim == 2 ? kTriangleEdges[k] : kTetEdges[k];
        out.values(nv + k, q) = 4.0 * L(i) * L(j);
        d(i, nv + k) = 4.0 * L(j);
        d(j, nv + k) = 4.0 * L(i);
      }
    }
  }
  return out;
}

Eigen::Index count_dofs(const Mesh &mesh, Family family, int order)
{
  const Eigen::Index nv = mesh.num_vertices(), ne = mesh.num_edges();
  switch (family)
  {
    case Family::LagrangeScalar:
      return order == 1 ? nv : nv + ne;
    case Family::LagrangeVector:
      return mesh.dim * (order == 1 ? nv : nv + ne);
    case Family::Nedelec:
      if (order == 1)
      {
        return ne;
      }
      return mesh.dim == 2 ? 2 * ne + 2 * mesh.num_cells() : 2 * ne + 2 * mesh.num_faces();
  }
  return 0;
}

Eigen::VectorXd interpolate(const FESpace &space, const VectorFn &field)
{
  const Mesh &m = space.mesh();
  Eigen::VectorXd out = Eigen::VectorXd::Zero(space.num_dofs());
  switch (space.family())
  {
    case Family::LagrangeScalar:
    {
      for (Eigen::Index s = 0; s < space.num_scalar_dofs(); ++s)
      {
        Eigen::Vector3d x = Eigen::Vector3d::Zero();
        x.head(m.dim) = space.nodes().col(s);
        out(s) = field(x)(0);
      }
      break;
    }
    case Family::LagrangeVector:
    {
      const Eigen::Index ns = space.num_scalar_dofs();
      for (Eigen::Index s = 0; s < ns; ++s)
      {
        Eigen::Vector3d x = Eigen::Vector3d::Zero();
        x.head(m.dim) = space.nodes().col(s);
        const Eigen::Vector3d v = field(x);
        for (int c = 0; c < m.dim; ++c)
        {
          out(c * ns + s) = v(c);
        }
      }
      break;
    }
    case Family::Nedelec:
    {
      for (int c = 0; c < m.num_cells(); ++c)
      {
        const Eigen::VectorXd loc = space.local_functionals(c, field);
        for (int k = 0; k < space.num_local_dofs(); ++k)
        {
          out(space.cell_dofs()(k, c)) = loc(k);
        }
      }
      break;
    }
  }
  return out;
}

Eigen::VectorXd interpolate(const FESpace &space, const ScalarFn &field)
{
  if (space.family() != Family::LagrangeScalar)
  {
    throw Error("interpolate: scalar field requires a scalar space");
  }
  return interpolate(space, VectorFn([&](const Eigen::Vector3d &x) {
                       return Eigen::Vector3d(field(x), 0.0, 0.0);
                     }));
}

Eigen::VectorXd gather(const FESpace &space, const Eigen::VectorXd &coeffs, int cell)
{
  const int nloc = space.num_local_dofs();
  Eigen::VectorXd out(nloc);
  for (int k = 0; k < nloc; ++k)
  {
    out(k) = coeffs(space.cell_dofs()(k, cell));
  }
  return out;
}

namespace
{

struct PointBasis
{
  LocalBasis basis;
  Eigen::VectorXd local;
};

PointBasis basis_at(const FESpace &space, const Eigen::VectorXd &coeffs, const Eigen::Vector3d &x)
{
  if (coeffs.size() != space.num_dofs())
  {
    throw Error("evaluate: coefficient vector does not match the space");
  }
  const PointLocation loc = locate_point(space.mesh(), x);
  PointBasis pb;
  pb.basis = space.tabulate(loc.cell, Eigen::MatrixXd(loc.ref));
  pb.local = gather(space, coeffs, loc.cell);
  return pb;
}

}  // namespace

Eigen::Vector3d evaluate(const FESpace &space, const Eigen::VectorXd &coeffs,
                         const Eigen::Vector3d &x)
{
  const PointBasis pb = basis_at(space, coeffs, x);
  Eigen::Vector3d out = Eigen::Vector3d::Zero();
  out.head(space.value_dim()) = pb.basis.value[0] * pb.local;
  return out;
}

Eigen::Vector3d curl_evaluate(const FESpace &space, const Eigen::VectorXd &coeffs,
                              const Eigen::Vector3d &x)
{
  if (space.family() != Family::Nedelec)
  {
    throw Error("curl_evaluate: Nedelec spaces only");
  }
  const PointBasis pb = basis_at(space, coeffs, x);
  const Eigen::VectorXd c = pb.basis.deriv[0] * pb.local;
  Eigen::Vector3d out = Eigen::Vector3d::Zero();
  if (c.size() == 1)
  {
    out(2) = c(0);
  }
  else
  {
    out = c;
  }
  return out;
}

Eigen::Vector3d gradient_evaluate(const FESpace &space, const Eigen::VectorXd &coeffs,
                                  const Eigen::Vector3d &x)
{
  if (space.family() != Family::LagrangeScalar)
  {
    throw Error("gradient_evaluate: scalar Lagrange spaces only");
  }
  const PointBasis pb = basis_at(space, coeffs, x);
  Eigen::Vector3d out = Eigen::Vector3d::Zero();
  out.head(space.dim()) = pb.basis.deriv[0] * pb.local;
  return out;
}

SparseMatrix gradient_inclusion_map(const FESpace &V, const FESpace &Q)
{
  if (V.family() != Family::LagrangeScalar || Q.family() != Family::Nedelec)
  {
    throw Error("gradient_inclusion_map: expects a scalar Lagrange and a Nedelec space");
  }
  if (V.order() != Q.order())
  {
    throw Error("gradient_inclusion_map: order mismatch");
  }
  if (&V.mesh() != &Q.mesh())
  {
    throw Error("gradient_inclusion_map: spaces live on different meshes");
  }
  const Mesh &m = V.mesh();
  SparseMatrix G(Q.num_dofs(), V.num_dofs());
  Triplets trip;
  if (Q.order() == 1)
  {
    for (int e = 0; e < m.num_edges(); ++e)
    {
      trip.emplace_back(e, m.edges(0, e), -1.0);
      trip.emplace_back(e, m.edges(1, e), 1.0);
    }
    G.setFromTriplets(trip.begin(), trip.end());
    return G;
  }
  const int nvl = V.num_local_dofs();
  for (int c = 0; c < m.num_cells(); ++c)
  {
    const CellGeometry geom = cell_geometry(m, c);
    for (int a = 0; a < nvl; ++a)
    {
      BaryField grad = [&](const SmallVector &L, const Eigen::Vector3d &) {
        Eigen::RowVectorXd val(nvl);
        Eigen::MatrixXd gr(m.dim, nvl);
        lagrange_basis(m, V.order(), c, L, geom.grad_lambda, val, gr);
        return SmallVector(gr.col(a));
      };
      const Eigen::VectorXd loc = nedelec_functionals(m, Q.order(), c, geom, grad);
      for (int k = 0; k < loc.size(); ++k)
      {
        if (loc(k) != 0.0)
        {
          trip.emplace_back(Q.cell_dofs()(k, c), V.cell_dofs()(a, c), loc(k));
        }
      }
    }
  }
  G.setFromTriplets(trip.begin(), trip.end(), [](double, double b) { return b; });
  G.prune(1e-14, 1.0);
  return G;
}

}  // namespace mhdfem

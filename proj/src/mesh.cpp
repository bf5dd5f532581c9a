// SPDX-License-Identifier: Apache-2.0

#include "mhdfem/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <unordered_map>

#include <Eigen/LU>

namespace mhdfem
{

namespace
{

SideMask sides_of_point(const Eigen::Ref<const Eigen::VectorXd> &x)
{
  SideMask mask = 0;
  for (int d = 0; d < x.size(); ++d)
  {
    if (x(d) == 0.0)
    {
      mask |= side_bit(2 * d + 1);
    }
    if (x(d) == 1.0)
    {
      mask |= side_bit(2 * d + 2);
    }
  }
  return mask;
}

// Fills edges, faces, incidence, side masks and h from vertices and cells.
void build_connectivity(Mesh &mesh)
{
  const int nc = mesh.num_cells();
  const std::int64_t nv = mesh.num_vertices();
  const int ne_loc = mesh.edges_per_cell();

  mesh.vertex_sides.resize(nv);
  for (int v = 0; v < nv; ++v)
  {
    mesh.vertex_sides[v] = sides_of_point(mesh.vertices.col(v));
  }

  std::unordered_map<std::int64_t, int> edge_id;
  edge_id.reserve(static_cast<std::size_t>(nc) * (mesh.dim == 2 ? 2 : 2));
  std::vector<std::array<int, 2>> edge_list;
  mesh.cell_edges.resize(ne_loc, nc);
  mesh.cell_edge_signs.resize(ne_loc, nc);
  for (int c = 0; c < nc; ++c)
  {
    for (int k = 0; k < ne_loc; ++k)
    {
      const auto [i, j] = mesh.local_edge(k);
      const int a = mesh.cells(i, c), b = mesh.cells(j, c);
      const int lo = std::min(a, b), hi = std::max(a, b);
      const std::int64_t key = lo * nv + hi;
      auto [it, inserted] = edge_id.try_emplace(key, static_cast<int>(edge_list.size()));
      if (inserted)
      {
        edge_list.push_back({lo, hi});
      }
      mesh.cell_edges(k, c) = it->second;
      mesh.cell_edge_signs(k, c) = (a < b) ? 1 : -1;
    }
  }
  mesh.edges.resize(2, static_cast<Eigen::Index>(edge_list.size()));
  mesh.edge_sides.resize(edge_list.size());
  for (std::size_t e = 0; e < edge_list.size(); ++e)
  {
    mesh.edges(0, e) = edge_list[e][0];
    mesh.edges(1, e) = edge_list[e][1];
    mesh.edge_sides[e] = mesh.vertex_sides[edge_list[e][0]] & mesh.vertex_sides[edge_list[e][1]];
  }

  if (mesh.dim == 3)
  {
    std::unordered_map<std::int64_t, int> face_id;
    std::vector<std::array<int, 3>> face_list;
    mesh.cell_faces.resize(4, nc);
    for (int c = 0; c < nc; ++c)
    {
      for (int f = 0; f < 4; ++f)
      {
        std::array<int, 3> tri;
        int n = 0;
        for (int v = 0; v < 4; ++v)
        {
          if (v != f)
          {
            tri[n++] = mesh.cells(v, c);
          }
        }
        std::sort(tri.begin(), tri.end());
        const std::int64_t key = (tri[0] * nv + tri[1]) * nv + tri[2];
        auto [it, inserted] = face_id.try_emplace(key, static_cast<int>(face_list.size()));
        if (inserted)
        {
          face_list.push_back(tri);
        }
        mesh.cell_faces(f, c) = it->second;
      }
    }
    mesh.faces.resize(3, static_cast<Eigen::Index>(face_list.size()));
    mesh.face_sides.resize(face_list.size());
    for (std::size_t f = 0; f < face_list.size(); ++f)
    {
      for (int k = 0; k < 3; ++k)
      {
        mesh.faces(k, f) = face_list[f][k];
      }
      mesh.face_sides[f] = mesh.vertex_sides[face_list[f][0]] &
                           mesh.vertex_sides[face_list[f][1]] &
                           mesh.vertex_sides[face_list[f][2]];
    }
  }

  mesh.facet_cells.assign(mesh.num_facets(), {-1, -1});
  for (int c = 0; c < nc; ++c)
  {
    const int nf = mesh.dim + 1;
    for (int k = 0; k < nf; ++k)
    {
      // In 2D the facet opposite local vertex k is local edge 2-k.
      const int facet = mesh.dim == 2 ? mesh.cell_edges(2 - k, c) : mesh.cell_faces(k, c);
      auto &adj = mesh.facet_cells[facet];
      if (adj[0] < 0)
      {
        adj[0] = c;
      }
      else
      {
        if (adj[1] >= 0)
        {
          throw Error("non-manifold facet in mesh");
        }
        adj[1] = c;
      }
    }
  }

  double h = 0.0;
  for (int e = 0; e < mesh.num_edges(); ++e)
  {
    h = std::max(h, (mesh.vertices.col(mesh.edges(0, e)) - mesh.vertices.col(mesh.edges(1, e))).norm());
  }
  mesh.h = h;
}

}  // namespace

Mesh build_unit_square_mesh(int M)
{
  if (M < 1)
  {
    throw Error("build_unit_square_mesh: M must be positive");
  }
  Mesh mesh;
  mesh.dim = 2;
  mesh.grid = M;
  const int n = M + 1;
  mesh.vertices.resize(2, n * n);
  for (int j = 0; j < n; ++j)
  {
    for (int i = 0; i < n; ++i)
    {
      mesh.vertices(0, j * n + i) = static_cast<double>(i) / M;
      mesh.vertices(1, j * n + i) = static_cast<double>(j) / M;
    }
  }
  mesh.cells.resize(3, 2 * M * M);
  for (int j = 0; j < M; ++j)
  {
    for (int i = 0; i < M; ++i)
    {
      const int v00 = j * n + i, v10 = v00 + 1, v01 = v00 + n, v11 = v01 + 1;
      const int b = j * M + i;
      // Lower-left to upper-right diagonal.
      mesh.cells.col(2 * b) << v00, v10, v11;
      mesh.cells.col(2 * b + 1) << v00, v11, v01;
    }
  }
  build_connectivity(mesh);
  return mesh;
}

Mesh build_unit_cube_mesh(int M)
{
  if (M < 1)
  {
    throw Error("build_unit_cube_mesh: M must be positive");
  }
  Mesh mesh;
  mesh.dim = 3;
  mesh.grid = M;
  const int n = M + 1;
  auto index = [n](int i, int j, int k) { return (k * n + j) * n + i; };
  mesh.vertices.resize(3, n * n * n);
  for (int k = 0; k < n; ++k)
  {
    for (int j = 0; j < n; ++j)
    {
      for (int i = 0; i < n; ++i)
      {
        mesh.vertices.col(index(i, j, k)) << static_cast<double>(i) / M,
            static_cast<double>(j) / M, static_cast<double>(k) / M;
      }
    }
  }

  // Kuhn split: every tet follows a monotone path from the cube's min corner to
  // its max corner, so face diagonals agree between neighbouring cubes.
  static constexpr std::array<std::array<int, 3>, 6> kPerms = {
      {{0, 1, 2}, {0, 2, 1}, {1, 0, 2}, {1, 2, 0}, {2, 0, 1}, {2, 1, 0}}};
  static constexpr std::array<int, 6> kParity = {1, -1, -1, 1, 1, -1};

  mesh.cells.resize(4, 6 * M * M * M);
  for (int k = 0; k < M; ++k)
  {
    for (int j = 0; j < M; ++j)
    {
      for (int i = 0; i < M; ++i)
      {
        const int b = (k * M + j) * M + i;
        for (int t = 0; t < 6; ++t)
        {
          std::array<int, 3> pos = {i, j, k};
          std::array<int, 4> v;
          v[0] = index(pos[0], pos[1], pos[2]);
          ++pos[kPerms[t][0]];
          v[1] = index(pos[0], pos[1], pos[2]);
          ++pos[kPerms[t][1]];
          v[2] = index(pos[0], pos[1], pos[2]);
          v[3] = index(i + 1, j + 1, k + 1);
          if (kParity[t] < 0)
          {
            std::swap(v[1], v[2]);
          }
          mesh.cells.col(6 * b + t) << v[0], v[1], v[2], v[3];
        }
      }
    }
  }
  build_connectivity(mesh);
  return mesh;
}

double CellGeometry::volume() const
{
  return det / (J.rows() == 2 ? 2.0 : 6.0);
}

Eigen::Vector3d CellGeometry::map(const Eigen::Ref<const SmallVector> &ref) const
{
  Eigen::Vector3d out = Eigen::Vector3d::Zero();
  out.head(J.rows()) = x.col(0) + J * ref;
  return out;
}

CellGeometry cell_geometry(const Mesh &mesh, int cell)
{
  if (cell < 0 || cell >= mesh.num_cells())
  {
    throw Error("cell_geometry: cell index out of range");
  }
  const int d = mesh.dim;
  CellGeometry g;
  g.x.resize(d, d + 1);
  for (int k = 0; k <= d; ++k)
  {
    g.x.col(k) = mesh.vertices.col(mesh.cells(k, cell));
  }
  g.J.resize(d, d);
  for (int k = 0; k < d; ++k)
  {
    g.J.col(k) = g.x.col(k + 1) - g.x.col(0);
  }
  g.det = g.J.determinant();
  g.inv_t = g.J.inverse().transpose();
  g.grad_lambda.resize(d, d + 1);
  g.grad_lambda.rightCols(d) = g.inv_t;
  g.grad_lambda.col(0) = -g.inv_t.rowwise().sum();
  return g;
}

PointLocation locate_point(const Mesh &mesh, const Eigen::Vector3d &x)
{
  constexpr double kTol = 1e-12;
  for (int d = 0; d < mesh.dim; ++d)
  {
    if (x(d) < -kTol || x(d) > 1.0 + kTol)
    {
      throw Error("locate_point: point outside the domain");
    }
  }
  auto try_cell = [&](int c, PointLocation &out) {
    const CellGeometry g = cell_geometry(mesh, c);
    SmallVector ref = g.J.partialPivLu().solve(x.head(mesh.dim) - g.x.col(0));
    if (ref.minCoeff() >= -kTol && ref.sum() <= 1.0 + kTol)
    {
      out.cell = c;
      out.ref = ref;
      return true;
    }
    return false;
  };

  PointLocation loc;
  if (mesh.grid > 0)
  {
    const int M = mesh.grid;
    int block = 0, stride = 1;
    for (int d = 0; d < mesh.dim; ++d)
    {
      const int i = std::clamp(static_cast<int>(std::floor(x(d) * M)), 0, M - 1);
      block += i * stride;
      stride *= M;
    }
    const int per = mesh.dim == 2 ? 2 : 6;
    for (int t = 0; t < per; ++t)
    {
      if (try_cell(per * block + t, loc))
      {
        return loc;
      }
    }
  }
  for (int c = 0; c < mesh.num_cells(); ++c)
  {
    if (try_cell(c, loc))
    {
      return loc;
    }
  }
  throw Error("locate_point: no cell contains the point");
}

void write_vtk_mesh_header(std::ostream &os, const Mesh &mesh, const std::string &title)
{
  os << "# vtk DataFile Version 3.0\n" << title << "\nASCII\nDATASET UNSTRUCTURED_GRID\n";
  os << "POINTS " << mesh.num_vertices() << " double\n";
  os.precision(17);
  for (int v = 0; v < mesh.num_vertices(); ++v)
  {
    const Eigen::Vector3d x = mesh.vertex(v);
    os << x(0) << ' ' << x(1) << ' ' << x(2) << '\n';
  }
  const int nv_cell = mesh.dim + 1;
  os << "CELLS " << mesh.num_cells() << ' ' << mesh.num_cells() * (nv_cell + 1) << '\n';
  for (int c = 0; c < mesh.num_cells(); ++c)
  {
    os << nv_cell;
    for (int k = 0; k < nv_cell; ++k)
    {
      os << ' ' << mesh.cells(k, c);
    }
    os << '\n';
  }
  os << "CELL_TYPES " << mesh.num_cells() << '\n';
  const int type = mesh.dim == 2 ? 5 : 10;
  for (int c = 0; c < mesh.num_cells(); ++c)
  {
    os << type << '\n';
  }
}

}  // namespace mhdfem

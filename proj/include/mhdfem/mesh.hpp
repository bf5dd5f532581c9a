// SPDX-License-Identifier: Apache-2.0

#ifndef MHDFEM_MESH_HPP
#define MHDFEM_MESH_HPP

#include <array>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Core>

namespace mhdfem
{

class Error : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

// Small dense types. Everything lives in at most three dimensions.
using SmallMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, 0, 3, 4>;
using SmallVector = Eigen::Matrix<double, Eigen::Dynamic, 1, 0, 4, 1>;

// Bitmask of the unit-box sides an entity lies on. Side s (1-based) is bit s-1:
// 1: x=0, 2: x=1, 3: y=0, 4: y=1, 5: z=0, 6: z=1.
using SideMask = std::uint8_t;
inline constexpr SideMask kAllSides = 0x3f;
constexpr SideMask side_bit(int side) { return static_cast<SideMask>(1u << (side - 1)); }

// Local edge (i, j) tables, i < j in local vertex numbering.
inline constexpr std::array<std::array<int, 2>, 3> kTriangleEdges = {{{0, 1}, {0, 2}, {1, 2}}};
inline constexpr std::array<std::array<int, 2>, 6> kTetEdges = {
    {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}}};

//
// Simplicial mesh of the unit square or cube with oriented edge (and face)
// connectivity. Global edges run from the lower to the higher vertex index.
// Face i of a tetrahedron is the one opposite local vertex i.
//
struct Mesh
{
  int dim = 0;
  int grid = 0;               // subdivisions per direction, 0 if unstructured
  Eigen::MatrixXd vertices;   // dim x nv
  Eigen::MatrixXi cells;      // (dim+1) x nc, positively oriented
  Eigen::Matrix2Xi edges;     // (low, high) x ne
  Eigen::Matrix3Xi faces;     // sorted vertex triples, 3D only
  Eigen::MatrixXi cell_edges; // local edge -> global edge
  Eigen::MatrixXi cell_edge_signs; // +1 if local direction matches global
  Eigen::MatrixXi cell_faces; // 3D only
  std::vector<SideMask> vertex_sides, edge_sides, face_sides;
  // Adjacent cells of every facet (edges in 2D, faces in 3D); second is -1 on the boundary.
  std::vector<std::array<int, 2>> facet_cells;
  double h = 0.0;

  int num_vertices() const { return static_cast<int>(vertices.cols()); }
  int num_cells() const { return static_cast<int>(cells.cols()); }
  int num_edges() const { return static_cast<int>(edges.cols()); }
  int num_faces() const { return static_cast<int>(faces.cols()); }
  int num_facets() const { return dim == 2 ? num_edges() : num_faces(); }
  int edges_per_cell() const { return dim == 2 ? 3 : 6; }
  SideMask facet_sides(int f) const { return dim == 2 ? edge_sides[f] : face_sides[f]; }
  const std::array<int, 2> &local_edge(int k) const
  {
    return dim == 2 ? kTriangleEdges[k] : kTetEdges[k];
  }
  Eigen::Vector3d vertex(int v) const
  {
    Eigen::Vector3d x = Eigen::Vector3d::Zero();
    x.head(dim) = vertices.col(v);
    return x;
  }
};

Mesh build_unit_square_mesh(int M);
Mesh build_unit_cube_mesh(int M);

struct CellGeometry
{
  SmallMatrix x;      // dim x (dim+1) vertex coordinates
  SmallMatrix J;      // dim x dim, columns x_k - x_0
  SmallMatrix inv_t;  // J^{-T}
  SmallMatrix grad_lambda; // dim x (dim+1) barycentric gradients
  double det = 0.0;

  double volume() const;
  Eigen::Vector3d map(const Eigen::Ref<const SmallVector> &ref) const;
};

CellGeometry cell_geometry(const Mesh &mesh, int cell);

struct PointLocation
{
  int cell = -1;
  SmallVector ref; // reference coordinates inside the cell
};

// Finds a cell containing x. Throws if x lies outside the unit box.
PointLocation locate_point(const Mesh &mesh, const Eigen::Vector3d &x);

void write_vtk_mesh_header(std::ostream &os, const Mesh &mesh, const std::string &title);

}  // namespace mhdfem

#endif  // MHDFEM_MESH_HPP

// SPDX-License-Identifier: Apache-2.0

#ifndef MHDFEM_FESPACE_HPP
#define MHDFEM_FESPACE_HPP

#include <functional>
#include <memory>
#include <vector>

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include "mhdfem/mesh.hpp"

namespace mhdfem
{

using SparseMatrix = Eigen::SparseMatrix<double, Eigen::RowMajor>;
using Triplets = std::vector<Eigen::Triplet<double>>;

using ScalarFn = std::function<double(const Eigen::Vector3d &)>;
using VectorFn = std::function<Eigen::Vector3d(const Eigen::Vector3d &)>;

enum class Family
{
  LagrangeScalar,
  LagrangeVector,
  Nedelec
};

const char *family_name(Family f);

// Basis functions of one cell tabulated at a set of reference points.
// Signs and (for Nedelec) covariant mapping are already applied.
struct LocalBasis
{
  // value[q]: value_dim x nloc.
  std::vector<Eigen::MatrixXd> value;
  // deriv[q]: Lagrange scalar: dim x nloc gradients. Lagrange vector: (dim*dim) x nloc,
  // row i*dim+k holds d(phi_i)/dx_k. Nedelec: curl, 1 x nloc in 2D, 3 x nloc in 3D.
  std::vector<Eigen::MatrixXd> deriv;
};

//
// Finite element space on a simplicial mesh with a conforming global DOF map.
//
// Numbering conventions:
//  - Lagrange scalar: vertex v -> v, then (order 2) edge e -> nv + e.
//  - Lagrange vector: component c of scalar DOF s -> c * n_scalar + s.
//  - Nedelec order 1: one DOF per edge, the tangential moment along the global
//    (low -> high) edge direction; basis is the signed Whitney function.
//  - Nedelec order 2 (2D): edge e -> 2e, 2e+1 (moments weighted by the
//    barycentric coordinate of the low and the high vertex), then two interior
//    moments per cell.
//
class FESpace
{
public:
  FESpace(std::shared_ptr<const Mesh> mesh, Family family, int order);

  Family family() const { return family_; }
  int order() const { return order_; }
  const Mesh &mesh() const { return *mesh_; }
  std::shared_ptr<const Mesh> mesh_ptr() const { return mesh_; }
  int dim() const { return mesh_->dim; }

  Eigen::Index num_dofs() const { return ndofs_; }
  int num_local_dofs() const { return static_cast<int>(cell_dofs_.rows()); }
  int value_dim() const { return family_ == Family::LagrangeScalar ? 1 : mesh_->dim; }
  bool is_lagrange() const { return family_ != Family::Nedelec; }

  // nloc x ncells global DOF indices and signs (+-1, only non-trivial for Nedelec order 1).
  const Eigen::MatrixXi &cell_dofs() const { return cell_dofs_; }
  const Eigen::MatrixXi &cell_signs() const { return cell_signs_; }

  // Lagrange only: physical coordinates of scalar nodes, dim x n_scalar.
  const Eigen::MatrixXd &nodes() const { return nodes_; }
  Eigen::Index num_scalar_dofs() const { return nodes_.cols(); }

  // DOFs lying on any of the selected boundary sides.
  std::vector<int> boundary_dofs(SideMask sides) const;

  LocalBasis tabulate(int cell, const Eigen::Ref<const Eigen::MatrixXd> &ref_points) const;
  LocalBasis tabulate(int cell, const CellGeometry &geom,
                      const Eigen::Ref<const Eigen::MatrixXd> &ref_points) const;

  // Nedelec only: local DOF functionals applied to a field on one cell.
  Eigen::VectorXd local_functionals(int cell, const VectorFn &field) const;

private:
  void build_lagrange();
  void build_nedelec();

  std::shared_ptr<const Mesh> mesh_;
  Family family_;
  int order_;
  Eigen::Index ndofs_ = 0;
  Eigen::MatrixXi cell_dofs_;
  Eigen::MatrixXi cell_signs_;
  Eigen::MatrixXd nodes_;
  // Nedelec order 2: per-cell coefficients of the dual basis in the spanning set.
  std::vector<Eigen::Matrix<double, 8, 8>> dual_coeffs_;
};

// Scalar Lagrange basis on the reference simplex: values (nloc x npoints) and,
// per point, derivatives with respect to the barycentric coordinates
// ((dim+1) x nloc). Physical gradients are grad_lambda * dlambda[q].
struct LagrangeReference
{
  Eigen::MatrixXd values;
  std::vector<Eigen::MatrixXd> dlambda;
};
LagrangeReference lagrange_reference(int dim, int order,
                                     const Eigen::Ref<const Eigen::MatrixXd> &ref_points);

// Closed-form DOF count; also covers count-only combinations (3D Nedelec order 2).
Eigen::Index count_dofs(const Mesh &mesh, Family family, int order);

// Nodal interpolation (Lagrange) or moment interpolation (Nedelec).
Eigen::VectorXd interpolate(const FESpace &space, const VectorFn &field);
Eigen::VectorXd interpolate(const FESpace &space, const ScalarFn &field);

// Point evaluation. Scalars are returned in component 0; the 2D curl in component 2.
Eigen::Vector3d evaluate(const FESpace &space, const Eigen::VectorXd &coeffs,
                         const Eigen::Vector3d &x);
Eigen::Vector3d curl_evaluate(const FESpace &space, const Eigen::VectorXd &coeffs,
                              const Eigen::Vector3d &x);
Eigen::Vector3d gradient_evaluate(const FESpace &space, const Eigen::VectorXd &coeffs,
                                  const Eigen::Vector3d &x);

// Matrix G mapping scalar Lagrange coefficients s to the Nedelec coefficients of
// grad s. Requires equal orders and mesh.
SparseMatrix gradient_inclusion_map(const FESpace &V, const FESpace &Q);

// Gathers the global coefficients of one cell (tabulated bases already carry the signs).
Eigen::VectorXd gather(const FESpace &space, const Eigen::VectorXd &coeffs, int cell);

}  // namespace mhdfem

#endif  // MHDFEM_FESPACE_HPP

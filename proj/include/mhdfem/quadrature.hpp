// SPDX-License-Identifier: Apache-2.0

#ifndef MHDFEM_QUADRATURE_HPP
#define MHDFEM_QUADRATURE_HPP

#include <Eigen/Core>

namespace mhdfem
{

enum class CellType
{
  Edge,        // [0, 1]
  Triangle,    // (0,0), (1,0), (0,1)
  Tetrahedron  // (0,0,0), e1, e2, e3
};

struct QuadRule
{
  Eigen::MatrixXd points;  // reference coordinates, dim x n
  Eigen::VectorXd weights; // sum to the reference measure
  int exact_degree = 0;

  Eigen::Index size() const { return weights.size(); }
};

inline constexpr int kMaxQuadratureDegree = 8;

// Default degrees for bilinear/trilinear forms and load vectors.
inline constexpr int kAssemblyDegree2D = 5;
inline constexpr int kAssemblyDegree3D = 4;
inline constexpr int kLoadDegree = 6;

// Symmetric rule on the reference cell that integrates polynomials of total
// degree <= degree exactly. Rules are built once and cached.
const QuadRule &gauss_rule(CellType type, int degree);

// Gauss-Legendre rule with n points on [0, 1].
QuadRule gauss_legendre(int n);

inline CellType simplex_type(int dim)
{
  return dim == 1 ? CellType::Edge : (dim == 2 ? CellType::Triangle : CellType::Tetrahedron);
}

}  // namespace mhdfem

#endif  // MHDFEM_QUADRATURE_HPP

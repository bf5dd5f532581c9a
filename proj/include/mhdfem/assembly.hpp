// SPDX-License-Identifier: Apache-2.0

#ifndef MHDFEM_ASSEMBLY_HPP
#define MHDFEM_ASSEMBLY_HPP

#include <iosfwd>
#include <memory>
#include <vector>

#include "mhdfem/fespace.hpp"

namespace mhdfem
{

using TimeVectorFn = std::function<Eigen::Vector3d(const Eigen::Vector3d &, double)>;
using TimeScalarFn = std::function<double(const Eigen::Vector3d &, double)>;

// Weights of the four physical terms: viscous 1/Re, Lorentz Sc, magnetic
// diffusion Sc/Rm and induction Sc in the standard scaling.
struct Coefficients
{
  double viscous = 1.0;
  double lorentz = 1.0;
  double diffusion = 1.0;
  double induction = 1.0;

  static Coefficients from_numbers(double Re, double Rm, double Sc);
  // Weight of the magnetic energy that makes the coupling terms cancel.
  double magnetic_weight() const { return lorentz / induction; }
};

//
// Sparse matrix whose pattern is the union of the cell blocks rows x cols,
// with the value slot of every local entry precomputed so the matrix can be
// reassembled in place.
//
class CellPattern
{
public:
  CellPattern(const FESpace &rows, const FESpace &cols);

  SparseMatrix &matrix() { return mat_; }
  const SparseMatrix &matrix() const { return mat_; }
  void zero();
  // Adds a (nloc_rows x nloc_cols) local block of one cell.
  void add(int cell, const Eigen::Ref<const Eigen::MatrixXd> &local);
  // Adds (local - local^T) / 2. Entries (i,j) and (j,i) get exact negatives.
  void add_skew(int cell, const Eigen::Ref<const Eigen::MatrixXd> &local);

private:
  SparseMatrix mat_;
  std::vector<int> slots_;
  int nr_ = 0, nc_ = 0;
};

// Block assembly. Lagrange vector spaces couple componentwise; Nedelec
// blocks use the covariant basis with curls.
SparseMatrix assemble_mass(const FESpace &space);
SparseMatrix assemble_stiffness(const FESpace &space);
// N1(w) = ((w.grad phi_j, phi_i) - (w.grad phi_i, phi_j)) / 2.
SparseMatrix assemble_convection(const FESpace &velocity, const Eigen::VectorXd &w);
// B_ij = -(q_j, div phi_i).
SparseMatrix assemble_divergence(const FESpace &velocity, const FESpace &pressure);
// N2_ij = (curl C_j, phi_i x Bprev); in 2D phi x B = phi_1 B_2 - phi_2 B_1.
SparseMatrix assemble_coupling(const FESpace &velocity, const FESpace &magnetic,
                               const Eigen::VectorXd &Bprev);

void assemble_mass(const FESpace &space, CellPattern &out);
void assemble_stiffness(const FESpace &space, CellPattern &out);
void assemble_convection(const FESpace &velocity, const Eigen::VectorXd &w, CellPattern &out);
void assemble_divergence(const FESpace &velocity, const FESpace &pressure, CellPattern &out);
void assemble_coupling(const FESpace &velocity, const FESpace &magnetic,
                       const Eigen::VectorXd &Bprev, CellPattern &out);

// (f(., t), phi_i) with the load quadrature degree. Works for vector Lagrange and Nedelec.
Eigen::VectorXd assemble_load(const FESpace &space, const TimeVectorFn &f, double t);
// (q_j, 1) for a scalar space.
Eigen::VectorXd assemble_pressure_mean(const FESpace &pressure);

// "row col value" per line, zero-based.
void write_coordinate(std::ostream &os, const SparseMatrix &A);

enum class PressureMode
{
  MeanZero,
  PinNode,
  None  // no constraint; leaves the pressure singular, only for inspecting the core block
};

enum class Scheme
{
  BackwardEuler,
  Bdf2
};

// Offsets of the unknown segments in the coupled vector [u | p | B | lambda].
struct DofLayout
{
  Eigen::Index nu = 0, np = 0, nb = 0;
  bool multiplier = false;

  Eigen::Index p0() const { return nu; }
  Eigen::Index b0() const { return nu + np; }
  Eigen::Index lambda() const { return nu + np + nb; }
  Eigen::Index size() const { return nu + np + nb + (multiplier ? 1 : 0); }
};

struct SystemOptions
{
  Coefficients coeffs;
  double tau = 0.01;
  bool dirichlet_u = true;  // constrain every boundary velocity DOF
  SideMask b_sides = 0;     // sides with essential tangential B
  PressureMode pressure = PressureMode::MeanZero;
  Eigen::Vector3d pin_point = Eigen::Vector3d::Zero();
};

// Data of one step. Vectors are referenced, not copied.
struct StepInput
{
  Scheme scheme = Scheme::BackwardEuler;
  const Eigen::VectorXd *u1 = nullptr, *B1 = nullptr;  // level n-1
  const Eigen::VectorXd *u2 = nullptr, *B2 = nullptr;  // level n-2 (BDF2)
  const Eigen::VectorXd *F = nullptr, *G = nullptr;    // load vectors, null for zero
  // Full-length vectors whose constrained entries give the essential data.
  const Eigen::VectorXd *u_bc = nullptr, *B_bc = nullptr;
  double p_pin = 0.0;
};

//
// Discrete spaces, constant blocks and the coupled step matrix with BCs applied.
// Velocity: vector P2, pressure: P1, magnetic: Nedelec of the given order,
// potential V: scalar Lagrange of the same order.
//
class MhdOperator
{
public:
  MhdOperator(std::shared_ptr<const Mesh> mesh, int order_b, SystemOptions options);
  MhdOperator(const MhdOperator &) = delete;
  MhdOperator &operator=(const MhdOperator &) = delete;

  const Mesh &mesh() const { return *mesh_; }
  const SystemOptions &options() const { return opts_; }
  const FESpace &velocity() const { return U_; }
  const FESpace &pressure() const { return P_; }
  const FESpace &magnetic() const { return Q_; }
  const FESpace &potential() const { return V_; }
  const SparseMatrix &gradient_map() const { return G_; }
  const DofLayout &layout() const { return layout_; }

  const SparseMatrix &M1() const { return M1_.matrix(); }
  const SparseMatrix &K1() const { return K1_.matrix(); }
  const SparseMatrix &N1() const { return N1_.matrix(); }
  const SparseMatrix &Bdiv() const { return Bd_.matrix(); }
  const SparseMatrix &N2() const { return N2_.matrix(); }
  const SparseMatrix &M2() const { return M2_.matrix(); }
  const SparseMatrix &K2() const { return K2_.matrix(); }
  const Eigen::VectorXd &pressure_mean() const { return mean_; }

  const std::vector<int> &constrained_u() const { return cu_; }
  const std::vector<int> &constrained_b() const { return cb_; }
  int pin_dof() const { return pin_; }

  // Reassembles N1, N2 and the coupled system for one step.
  void build(const StepInput &in);
  const SparseMatrix &matrix() const { return A_; }
  const Eigen::VectorXd &rhs() const { return b_; }

  // Splits a coupled solution vector.
  void split(const Eigen::VectorXd &x, Eigen::VectorXd &u, Eigen::VectorXd &p,
             Eigen::VectorXd &B) const;

private:
  struct Placement
  {
    const SparseMatrix *block;
    std::vector<int> slots;
  };
  Placement place(const SparseMatrix &block, Eigen::Index r0, Eigen::Index c0, bool transpose) const;
  void accumulate(const Placement &pl, double coef);

  std::shared_ptr<const Mesh> mesh_;
  SystemOptions opts_;
  FESpace U_, P_, Q_, V_;
  SparseMatrix G_;
  CellPattern M1_, K1_, N1_, Bd_, N2_, M2_, K2_;
  Eigen::VectorXd mean_;
  DofLayout layout_;
  std::vector<int> cu_, cb_;
  int pin_ = -1;
  std::vector<char> row_fixed_;

  SparseMatrix A_;
  Eigen::VectorXd b_;
  Placement pM1_, pK1_, pN1_, pBd_, pBdT_, pN2_, pN2T_, pM2_, pK2_;
  std::vector<int> diag_slots_;
  std::vector<int> mean_slots_row_, mean_slots_col_;
};

}  // namespace mhdfem

#endif  // MHDFEM_ASSEMBLY_HPP

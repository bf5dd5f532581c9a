// SPDX-License-Identifier: Apache-2.0

#include "mhdfem/assembly.hpp"

#include <algorithm>
#include <limits>
#include <ostream>

#include "mhdfem/quadrature.hpp"

namespace mhdfem
{

namespace
{

const QuadRule &assembly_rule(int dim)
{
  return gauss_rule(simplex_type(dim), dim == 2 ? kAssemblyDegree2D : kAssemblyDegree3D);
}

int find_slot(const SparseMatrix &A, Eigen::Index row, Eigen::Index col)
{
  const int *begin = A.innerIndexPtr() + A.outerIndexPtr()[row];
  const int *end = A.innerIndexPtr() + A.outerIndexPtr()[row + 1];
  const int *it = std::lower_bound(begin, end, static_cast<int>(col));
  if (it == end || *it != col)
  {
    throw Error("sparsity pattern is missing an entry");
  }
  return static_cast<int>(it - A.innerIndexPtr());
}

int scalar_local_size(const FESpace &space)
{
  return space.family() == Family::LagrangeVector ? space.num_local_dofs() / space.dim()
                                                  : space.num_local_dofs();
}

void require_lagrange(const FESpace &space, const char *what)
{
  if (!space.is_lagrange())
  {
    throw Error(std::string(what) + ": Lagrange space expected");
  }
}

void require_nedelec(const FESpace &space, const char *what)
{
  if (space.family() != Family::Nedelec)
  {
    throw Error(std::string(what) + ": Nedelec space expected");
  }
}

// Places a scalar block on the diagonal of every vector component.
void expand_components(const FESpace &space, const Eigen::MatrixXd &scalar, Eigen::MatrixXd &local)
{
  const int ncomp = space.family() == Family::LagrangeVector ? space.dim() : 1;
  const auto n = scalar.rows();
  local.setZero(ncomp * n, ncomp * n);
  for (int c = 0; c < ncomp; ++c)
  {
    local.block(c * n, c * n, n, n) = scalar;
  }
}

}  // namespace

Coefficients Coefficients::from_numbers(double Re, double Rm, double Sc)
{
  if (!(Re > 0.0) || !(Rm > 0.0) || !(Sc > 0.0))
  {
    throw Error("Re, Rm and Sc must be positive");
  }
  return {1.0 / Re, Sc, Sc / Rm, Sc};
}

CellPattern::CellPattern(const FESpace &rows, const FESpace &cols)
    : nr_(rows.num_local_dofs()), nc_(cols.num_local_dofs())
{
  if (&rows.mesh() != &cols.mesh())
  {
    throw Error("CellPattern: spaces live on different meshes");
  }
  const int nc = rows.mesh().num_cells();
  const Eigen::MatrixXi &rd = rows.cell_dofs();
  const Eigen::MatrixXi &cd = cols.cell_dofs();
  Triplets trip;
  trip.reserve(static_cast<std::size_t>(nc) * nr_ * nc_);
  for (int c = 0; c < nc; ++c)
  {
    for (int i = 0; i < nr_; ++i)
    {
      for (int j = 0; j < nc_; ++j)
      {
        trip.emplace_back(rd(i, c), cd(j, c), 0.0);
      }
    }
  }
  mat_.resize(rows.num_dofs(), cols.num_dofs());
  mat_.setFromTriplets(trip.begin(), trip.end());
  mat_.makeCompressed();
  slots_.resize(trip.size());
  for (std::size_t k = 0; k < trip.size(); ++k)
  {
    slots_[k] = find_slot(mat_, trip[k].row(), trip[k].col());
  }
}

void CellPattern::zero()
{
  std::fill(mat_.valuePtr(), mat_.valuePtr() + mat_.nonZeros(), 0.0);
}

void CellPattern::add(int cell, const Eigen::Ref<const Eigen::MatrixXd> &local)
{
  const int *s = slots_.data() + static_cast<std::size_t>(cell) * nr_ * nc_;
  double *v = mat_.valuePtr();
  for (int i = 0; i < nr_; ++i)
  {
    for (int j = 0; j < nc_; ++j)
    {
      v[*s++] += local(i, j);
    }
  }
}

void CellPattern::add_skew(int cell, const Eigen::Ref<const Eigen::MatrixXd> &local)
{
  const int *s = slots_.data() + static_cast<std::size_t>(cell) * nr_ * nc_;
  double *v = mat_.valuePtr();
  for (int i = 0; i < nr_; ++i)
  {
    for (int j = 0; j < nc_; ++j)
    {
      v[*s++] += 0.5 * local(i, j) - 0.5 * local(j, i);
    }
  }
}

void assemble_mass(const FESpace &space, CellPattern &out)
{
  const Mesh &m = space.mesh();
  const QuadRule &rule = assembly_rule(m.dim);
  out.zero();
  Eigen::MatrixXd local;
  if (space.is_lagrange())
  {
    const LagrangeReference ref = lagrange_reference(m.dim, space.order(), rule.points);
    Eigen::MatrixXd ref_mass = Eigen::MatrixXd::Zero(ref.values.rows(), ref.values.rows());
    for (Eigen::Index q = 0; q < rule.size(); ++q)
    {
      ref_mass += rule.weights(q) * ref.values.col(q) * ref.values.col(q).transpose();
    }
    for (int c = 0; c < m.num_cells(); ++c)
    {
      expand_components(space, cell_geometry(m, c).det * ref_mass, local);
      out.add(c, local);
    }
    return;
  }
  for (int c = 0; c < m.num_cells(); ++c)
  {
    const CellGeometry g = cell_geometry(m, c);
    const LocalBasis b = space.tabulate(c, g, rule.points);
    local.setZero(space.num_local_dofs(), space.num_local_dofs());
    for (Eigen::Index q = 0; q < rule.size(); ++q)
    {
      local.noalias() += (rule.weights(q) * g.det) * b.value[q].transpose() * b.value[q];
    }
    out.add(c, local);
  }
}

void assemble_stiffness(const FESpace &space, CellPattern &out)
{
  const Mesh &m = space.mesh();
  const QuadRule &rule = assembly_rule(m.dim);
  out.zero();
  Eigen::MatrixXd local;
  if (space.is_lagrange())
  {
    const LagrangeReference ref = lagrange_reference(m.dim, space.order(), rule.points);
    const auto n = ref.values.rows();
    for (int c = 0; c < m.num_cells(); ++c)
    {
      const CellGeometry g = cell_geometry(m, c);
      Eigen::MatrixXd scalar = Eigen::MatrixXd::Zero(n, n);
      for (Eigen::Index q = 0; q < rule.size(); ++q)
      {
        const Eigen::MatrixXd grads = g.grad_lambda * ref.dlambda[q];
        scalar.noalias() += (rule.weights(q) * g.det) * grads.transpose() * grads;
      }
      expand_components(space, scalar, local);
      out.add(c, local);
    }
    return;
  }
  for (int c = 0; c < m.num_cells(); ++c)
  {
    const CellGeometry g = cell_geometry(m, c);
    const LocalBasis b = space.tabulate(c, g, rule.points);
    local.setZero(space.num_local_dofs(), space.num_local_dofs());
    for (Eigen::Index q = 0; q < rule.size(); ++q)
    {
      local.noalias() += (rule.weights(q) * g.det) * b.deriv[q].transpose() * b.deriv[q];
    }
    out.add(c, local);
  }
}

void assemble_convection(const FESpace &velocity, const Eigen::VectorXd &w, CellPattern &out)
{
  require_lagrange(velocity, "assemble_convection");
  if (velocity.family() != Family::LagrangeVector || w.size() != velocity.num_dofs())
  {
    throw Error("assemble_convection: w must live on the vector velocity space");
  }
  const Mesh &m = velocity.mesh();
  const int d = m.dim;
  const QuadRule &rule = assembly_rule(d);
  const LagrangeReference ref = lagrange_reference(d, velocity.order(), rule.points);
  const int nsl = scalar_local_size(velocity);
  out.zero();
  Eigen::MatrixXd scalar(nsl, nsl), local;
  for (int c = 0; c < m.num_cells(); ++c)
  {
    const CellGeometry g = cell_geometry(m, c);
    const Eigen::VectorXd wl = gather(velocity, w, c);
    const Eigen::Map<const Eigen::MatrixXd> wc(wl.data(), nsl, d);
    scalar.setZero();
    for (Eigen::Index q = 0; q < rule.size(); ++q)
    {
      const Eigen::VectorXd wq = wc.transpose() * ref.values.col(q);
      const Eigen::RowVectorXd adv = wq.transpose() * (g.grad_lambda * ref.dlambda[q]);
      scalar.noalias() += (rule.weights(q) * g.det) * ref.values.col(q) * adv;
    }
    expand_components(velocity, scalar, local);
    out.add_skew(c, local);
  }
}

void assemble_divergence(const FESpace &velocity, const FESpace &pressure, CellPattern &out)
{
  if (velocity.family() != Family::LagrangeVector || pressure.family() != Family::LagrangeScalar)
  {
    throw Error("assemble_divergence: expects vector velocity and scalar pressure spaces");
  }
  const Mesh &m = velocity.mesh();
  const int d = m.dim;
  const QuadRule &rule = assembly_rule(d);
  const LagrangeReference ru = lagrange_reference(d, velocity.order(), rule.points);
  const LagrangeReference rp = lagrange_reference(d, pressure.order(), rule.points);
  const int nsl = scalar_local_size(velocity);
  out.zero();
  Eigen::MatrixXd local(velocity.num_local_dofs(), pressure.num_local_dofs());
  for (int c = 0; c < m.num_cells(); ++c)
  {
    const CellGeometry g = cell_geometry(m, c);
    local.setZero();
    for (Eigen::Index q = 0; q < rule.size(); ++q)
    {
      const Eigen::MatrixXd grads = g.grad_lambda * ru.dlambda[q];
      const double wq = rule.weights(q) * g.det;
      for (int k = 0; k < d; ++k)
      {
        local.middleRows(k * nsl, nsl).noalias() -= wq * grads.row(k).transpose() * rp.values.col(q).transpose();
      }
    }
    out.add(c, local);
  }
}

void assemble_coupling(const FESpace &velocity, const FESpace &magnetic,
                       const Eigen::VectorXd &Bprev, CellPattern &out)
{
  require_nedelec(magnetic, "assemble_coupling");
  if (velocity.family() != Family::LagrangeVector || Bprev.size() != magnetic.num_dofs())
  {
    throw Error("assemble_coupling: expects vector velocity space and B on the edge space");
  }
  const Mesh &m = velocity.mesh();
  const int d = m.dim;
  const QuadRule &rule = assembly_rule(d);
  const LagrangeReference ru = lagrange_reference(d, velocity.order(), rule.points);
  const int nsl = scalar_local_size(velocity);
  const int nql = magnetic.num_local_dofs();
  out.zero();
  Eigen::MatrixXd local(velocity.num_local_dofs(), nql);
  for (int c = 0; c < m.num_cells(); ++c)
  {
    const CellGeometry g = cell_geometry(m, c);
    const LocalBasis b = magnetic.tabulate(c, g, rule.points);
    const Eigen::VectorXd bl = gather(magnetic, Bprev, c);
    local.setZero();
    for (Eigen::Index q = 0; q < rule.size(); ++q)
    {
      const Eigen::VectorXd Bq = b.value[q] * bl;
      const double wq = rule.weights(q) * g.det;
      const auto psi = ru.values.col(q);
      const Eigen::MatrixXd &curl = b.deriv[q];
      if (d == 2)
      {
        local.topRows(nsl).noalias() += (wq * Bq(1)) * psi * curl.row(0);
        local.bottomRows(nsl).noalias() -= (wq * Bq(0)) * psi * curl.row(0);
      }
      else
      {
        for (int k = 0; k < 3; ++k)
        {
          const int k1 = (k + 1) % 3, k2 = (k + 2) % 3;
          const Eigen::RowVectorXd cross = Bq(k1) * curl.row(k2) - Bq(k2) * curl.row(k1);
          local.middleRows(k * nsl, nsl).noalias() += wq * psi * cross;
        }
      }
    }
    out.add(c, local);
  }
}

SparseMatrix assemble_mass(const FESpace &space)
{
  CellPattern p(space, space);
  assemble_mass(space, p);
  return p.matrix();
}

SparseMatrix assemble_stiffness(const FESpace &space)
{
  CellPattern p(space, space);
  assemble_stiffness(space, p);
  return p.matrix();
}

SparseMatrix assemble_convection(const FESpace &velocity, const Eigen::VectorXd &w)
{
  CellPattern p(velocity, velocity);
  assemble_convection(velocity, w, p);
  return p.matrix();
}

SparseMatrix assemble_divergence(const FESpace &velocity, const FESpace &pressure)
{
  CellPattern p(velocity, pressure);
  assemble_divergence(velocity, pressure, p);
  return p.matrix();
}

SparseMatrix assemble_coupling(const FESpace &velocity, const FESpace &magnetic,
                               const Eigen::VectorXd &Bprev)
{
  CellPattern p(velocity, magnetic);
  assemble_coupling(velocity, magnetic, Bprev, p);
  return p.matrix();
}

Eigen::VectorXd assemble_load(const FESpace &space, const TimeVectorFn &f, double t)
{
  const Mesh &m = space.mesh();
  const int d = m.dim;
  const QuadRule &rule = gauss_rule(simplex_type(d), kLoadDegree);
  Eigen::VectorXd out = Eigen::VectorXd::Zero(space.num_dofs());
  const int nloc = space.num_local_dofs();
  Eigen::VectorXd local(nloc);
  if (space.is_lagrange())
  {
    const LagrangeReference ref = lagrange_reference(d, space.order(), rule.points);
    const int nsl = scalar_local_size(space);
    const int ncomp = nloc / nsl;
    for (int c = 0; c < m.num_cells(); ++c)
    {
      const CellGeometry g = cell_geometry(m, c);
      local.setZero();
      for (Eigen::Index q = 0; q < rule.size(); ++q)
      {
        const Eigen::Vector3d fq = f(g.map(rule.points.col(q)), t);
        const double wq = rule.weights(q) * g.det;
        for (int k = 0; k < ncomp; ++k)
        {
          local.segment(k * nsl, nsl) += (wq * fq(k)) * ref.values.col(q);
        }
      }
      for (int i = 0; i < nloc; ++i)
      {
        out(space.cell_dofs()(i, c)) += local(i);
      }
    }
    return out;
  }
  for (int c = 0; c < m.num_cells(); ++c)
  {
    const CellGeometry g = cell_geometry(m, c);
    const LocalBasis b = space.tabulate(c, g, rule.points);
    local.setZero();
    for (Eigen::Index q = 0; q < rule.size(); ++q)
    {
      const Eigen::Vector3d fq = f(g.map(rule.points.col(q)), t);
      local.noalias() += (rule.weights(q) * g.det) * b.value[q].transpose() * fq.head(d);
    }
    for (int i = 0; i < nloc; ++i)
    {
      out(space.cell_dofs()(i, c)) += local(i);
    }
  }
  return out;
}

Eigen::VectorXd assemble_pressure_mean(const FESpace &pressure)
{
  if (pressure.family() != Family::LagrangeScalar)
  {
    throw Error("assemble_pressure_mean: scalar space expected");
  }
  return assemble_load(pressure, [](const Eigen::Vector3d &, double) { return Eigen::Vector3d(1, 0, 0); },
                       0.0);
}

void write_coordinate(std::ostream &os, const SparseMatrix &A)
{
  os.precision(17);
  for (int r = 0; r < A.outerSize(); ++r)
  {
    for (SparseMatrix::InnerIterator it(A, r); it; ++it)
    {
      os << it.row() << ' ' << it.col() << ' ' << it.value() << '\n';
    }
  }
}

MhdOperator::MhdOperator(std::shared_ptr<const Mesh> mesh, int order_b, SystemOptions options)
    : mesh_(std::move(mesh)),
      opts_(options),
      U_(mesh_, Family::LagrangeVector, 2),
      P_(mesh_, Family::LagrangeScalar, 1),
      Q_(mesh_, Family::Nedelec, order_b),
      V_(mesh_, Family::LagrangeScalar, order_b),
      G_(gradient_inclusion_map(V_, Q_)),
      M1_(U_, U_),
      K1_(M1_),
      N1_(M1_),
      Bd_(U_, P_),
      N2_(U_, Q_),
      M2_(Q_, Q_),
      K2_(M2_)
{
  const Coefficients &k = opts_.coeffs;
  if (!(opts_.tau > 0.0))
  {
    throw Error("time step must be positive");
  }
  if (!(k.viscous > 0.0) || !(k.lorentz > 0.0) || !(k.diffusion > 0.0) || !(k.induction > 0.0))
  {
    throw Error("coefficients must be positive");
  }
  assemble_mass(U_, M1_);
  assemble_stiffness(U_, K1_);
  assemble_divergence(U_, P_, Bd_);
  assemble_mass(Q_, M2_);
  assemble_stiffness(Q_, K2_);
  mean_ = assemble_pressure_mean(P_);

  layout_.nu = U_.num_dofs();
  layout_.np = P_.num_dofs();
  layout_.nb = Q_.num_dofs();
  layout_.multiplier = opts_.pressure == PressureMode::MeanZero;

  if (opts_.dirichlet_u)
  {
    cu_ = U_.boundary_dofs(kAllSides);
  }
  if (opts_.b_sides != 0)
  {
    cb_ = Q_.boundary_dofs(opts_.b_sides);
  }
  if (opts_.pressure == PressureMode::PinNode)
  {
    double best = std::numeric_limits<double>::max();
    for (Eigen::Index v = 0; v < P_.num_scalar_dofs(); ++v)
    {
      const double dist = (P_.nodes().col(v) - opts_.pin_point.head(mesh_->dim)).norm();
      if (dist < best)
      {
        best = dist;
        pin_ = static_cast<int>(v);
      }
    }
    if (best > 1e-12)
    {
      throw Error("pin point is not a pressure node");
    }
  }

  const Eigen::Index n = layout_.size();
  row_fixed_.assign(n, 0);
  for (int i : cu_)
  {
    row_fixed_[i] = 1;
  }
  for (int i : cb_)
  {
    row_fixed_[layout_.b0() + i] = 1;
  }
  if (pin_ >= 0)
  {
    row_fixed_[layout_.p0() + pin_] = 1;
  }

  // Union pattern of all placed blocks.
  Triplets trip;
  auto add_pattern = [&](const SparseMatrix &blk, Eigen::Index r0, Eigen::Index c0, bool tr) {
    for (int r = 0; r < blk.outerSize(); ++r)
    {
      for (SparseMatrix::InnerIterator it(blk, r); it; ++it)
      {
        const Eigen::Index gi = tr ? r0 + it.col() : r0 + it.row();
        const Eigen::Index gj = tr ? c0 + it.row() : c0 + it.col();
        if (!row_fixed_[gi])
        {
          trip.emplace_back(gi, gj, 0.0);
        }
      }
    }
  };
  add_pattern(M1(), 0, 0, false);
  add_pattern(Bdiv(), 0, layout_.p0(), false);
  add_pattern(Bdiv(), layout_.p0(), 0, true);
  add_pattern(N2(), 0, layout_.b0(), false);
  add_pattern(N2(), layout_.b0(), 0, true);
  add_pattern(M2(), layout_.b0(), layout_.b0(), false);
  for (Eigen::Index i = 0; i < n; ++i)
  {
    if (row_fixed_[i])
    {
      trip.emplace_back(i, i, 0.0);
    }
  }
  if (layout_.multiplier)
  {
    for (Eigen::Index j = 0; j < layout_.np; ++j)
    {
      trip.emplace_back(layout_.p0() + j, layout_.lambda(), 0.0);
      trip.emplace_back(layout_.lambda(), layout_.p0() + j, 0.0);
    }
  }
  A_.resize(n, n);
  A_.setFromTriplets(trip.begin(), trip.end());
  A_.makeCompressed();

  pM1_ = place(M1(), 0, 0, false);
  pK1_ = place(K1(), 0, 0, false);
  pN1_ = place(N1(), 0, 0, false);
  pBd_ = place(Bdiv(), 0, layout_.p0(), false);
  pBdT_ = place(Bdiv(), layout_.p0(), 0, true);
  pN2_ = place(N2(), 0, layout_.b0(), false);
  pN2T_ = place(N2(), layout_.b0(), 0, true);
  pM2_ = place(M2(), layout_.b0(), layout_.b0(), false);
  pK2_ = place(K2(), layout_.b0(), layout_.b0(), false);
  for (Eigen::Index i = 0; i < n; ++i)
  {
    if (row_fixed_[i])
    {
      diag_slots_.push_back(find_slot(A_, i, i));
    }
  }
  if (layout_.multiplier)
  {
    for (Eigen::Index j = 0; j < layout_.np; ++j)
    {
      mean_slots_row_.push_back(find_slot(A_, layout_.p0() + j, layout_.lambda()));
      mean_slots_col_.push_back(find_slot(A_, layout_.lambda(), layout_.p0() + j));
    }
  }
  b_.setZero(n);
}

MhdOperator::Placement MhdOperator::place(const SparseMatrix &block, Eigen::Index r0,
                                          Eigen::Index c0, bool transpose) const
{
  Placement pl{&block, {}};
  pl.slots.reserve(block.nonZeros());
  for (int r = 0; r < block.outerSize(); ++r)
  {
    for (SparseMatrix::InnerIterator it(block, r); it; ++it)
    {
      const Eigen::Index gi = transpose ? r0 + it.col() : r0 + it.row();
      const Eigen::Index gj = transpose ? c0 + it.row() : c0 + it.col();
      pl.slots.push_back(row_fixed_[gi] ? -1 : find_slot(A_, gi, gj));
    }
  }
  return pl;
}

void MhdOperator::accumulate(const Placement &pl, double coef)
{
  const double *src = pl.block->valuePtr();
  double *dst = A_.valuePtr();
  const std::size_t n = pl.slots.size();
  for (std::size_t k = 0; k < n; ++k)
  {
    if (pl.slots[k] >= 0)
    {
      dst[pl.slots[k]] += coef * src[k];
    }
  }
}

void MhdOperator::build(const StepInput &in)
{
  if (in.u1 == nullptr || in.B1 == nullptr)
  {
    throw Error("build: previous state required");
  }
  const bool bdf2 = in.scheme == Scheme::Bdf2;
  if (bdf2 && (in.u2 == nullptr || in.B2 == nullptr))
  {
    throw Error("build: BDF2 needs two previous states");
  }
  const Coefficients &k = opts_.coeffs;
  const double tau = opts_.tau;
  const Eigen::VectorXd &u1 = *in.u1;
  const Eigen::VectorXd &B1 = *in.B1;

  Eigen::VectorXd uhat, Bhat;
  if (bdf2)
  {
    uhat = 2.0 * u1 - *in.u2;
    Bhat = 2.0 * B1 - *in.B2;
  }
  assemble_convection(U_, bdf2 ? uhat : u1, N1_);
  assemble_coupling(U_, Q_, bdf2 ? Bhat : B1, N2_);

  // Time-derivative, implicit-part and coupling weights of the two schemes.
  const double mass = bdf2 ? 1.5 / tau : 1.0 / tau;
  const double impl = bdf2 ? 1.0 : 0.5;

  std::fill(A_.valuePtr(), A_.valuePtr() + A_.nonZeros(), 0.0);
  accumulate(pM1_, mass);
  accumulate(pK1_, impl * k.viscous);
  accumulate(pN1_, impl);
  accumulate(pBd_, 1.0);
  accumulate(pBdT_, -1.0);
  accumulate(pN2_, impl * k.lorentz);
  accumulate(pN2T_, -impl * k.induction);
  accumulate(pM2_, mass);
  accumulate(pK2_, impl * k.diffusion);
  for (int s : diag_slots_)
  {
    A_.valuePtr()[s] = 1.0;
  }
  for (std::size_t j = 0; j < mean_slots_row_.size(); ++j)
  {
    A_.valuePtr()[mean_slots_row_[j]] = mean_(static_cast<Eigen::Index>(j));
    A_.valuePtr()[mean_slots_col_[j]] = mean_(static_cast<Eigen::Index>(j));
  }

  auto bu = b_.segment(0, layout_.nu);
  auto bp = b_.segment(layout_.p0(), layout_.np);
  auto bb = b_.segment(layout_.b0(), layout_.nb);
  if (bdf2)
  {
    bu.noalias() = M1() * ((2.0 * u1 - 0.5 * *in.u2) / tau);
    bp.setZero();
    bb.noalias() = M2() * ((2.0 * B1 - 0.5 * *in.B2) / tau);
  }
  else
  {
    bu.noalias() = M1() * (u1 / tau);
    bu.noalias() -= (0.5 * k.viscous) * (K1() * u1);
    bu.noalias() -= 0.5 * (N1() * u1);
    bu.noalias() -= (0.5 * k.lorentz) * (N2() * B1);
    bp.noalias() = Bdiv().transpose() * u1;
    bb.noalias() = M2() * (B1 / tau);
    bb.noalias() -= (0.5 * k.diffusion) * (K2() * B1);
    bb.noalias() += (0.5 * k.induction) * (N2().transpose() * u1);
  }
  if (in.F != nullptr)
  {
    bu += *in.F;
  }
  if (in.G != nullptr)
  {
    bb += *in.G;
  }
  if (layout_.multiplier)
  {
    b_(layout_.lambda()) = 0.0;
  }
  for (int i : cu_)
  {
    b_(i) = in.u_bc != nullptr ? (*in.u_bc)(i) : 0.0;
  }
  for (int i : cb_)
  {
    b_(layout_.b0() + i) = in.B_bc != nullptr ? (*in.B_bc)(i) : 0.0;
  }
  if (pin_ >= 0)
  {
    b_(layout_.p0() + pin_) = in.p_pin;
  }
}

void MhdOperator::split(const Eigen::VectorXd &x, Eigen::VectorXd &u, Eigen::VectorXd &p,
                        Eigen::VectorXd &B) const
{
  u = x.segment(0, layout_.nu);
  p = x.segment(layout_.p0(), layout_.np);
  B = x.segment(layout_.b0(), layout_.nb);
}

}  // namespace mhdfem

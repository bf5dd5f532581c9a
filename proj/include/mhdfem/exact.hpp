// SPDX-License-Identifier: Apache-2.0

#ifndef MHDFEM_EXACT_HPP
#define MHDFEM_EXACT_HPP

#include <memory>
#include <string>

#include <Eigen/Core>

#include "mhdfem/assembly.hpp"

namespace mhdfem
{

//
// Closed-form solution of the MHD system with the derivatives needed to
// manufacture sources. 2D solutions leave every z entry at zero, so the 3D
// vector identities apply unchanged (curl of a 2D field sits in z).
// Gradients are Jacobians: J(i, k) = d f_i / d x_k.
//
class ExactSolution
{
public:
  virtual ~ExactSolution() = default;
  virtual int dim() const = 0;
  virtual std::string name() const = 0;

  virtual Eigen::Vector3d u(const Eigen::Vector3d &x, double t) const = 0;
  virtual Eigen::Matrix3d grad_u(const Eigen::Vector3d &x, double t) const = 0;
  virtual Eigen::Vector3d lap_u(const Eigen::Vector3d &x, double t) const = 0;
  virtual Eigen::Vector3d dt_u(const Eigen::Vector3d &x, double t) const = 0;
  virtual double p(const Eigen::Vector3d &x, double t) const = 0;
  virtual Eigen::Vector3d grad_p(const Eigen::Vector3d &x, double t) const = 0;
  virtual Eigen::Vector3d B(const Eigen::Vector3d &x, double t) const = 0;
  virtual Eigen::Matrix3d grad_B(const Eigen::Vector3d &x, double t) const = 0;
  virtual Eigen::Vector3d curlcurl_B(const Eigen::Vector3d &x, double t) const = 0;
  virtual Eigen::Vector3d dt_B(const Eigen::Vector3d &x, double t) const = 0;

  Eigen::Vector3d curl_B(const Eigen::Vector3d &x, double t) const;
};

Eigen::Vector3d curl_from_jacobian(const Eigen::Matrix3d &J);

// f = u_t - nu lap u + (u.grad)u + grad p - kL curl B x B.
Eigen::Vector3d momentum_source(const ExactSolution &s, const Coefficients &k,
                                const Eigen::Vector3d &x, double t);
// g = B_t + eta curl curl B - kI curl(u x B).
Eigen::Vector3d magnetic_source(const ExactSolution &s, const Coefficients &k,
                                const Eigen::Vector3d &x, double t);

// Steady channel flow on the unit square:
// u = (u1(y), 0), B = (B1(y), 1), p = -x - B1^2/2 with Re = Rm = Sc = 1.
class HartmannSolution : public ExactSolution
{
public:
  int dim() const override { return 2; }
  std::string name() const override { return "hartmann"; }
  static double u1(double y);
  static double B1(double y);
  Eigen::Vector3d u(const Eigen::Vector3d &x, double t) const override;
  Eigen::Matrix3d grad_u(const Eigen::Vector3d &x, double t) const override;
  Eigen::Vector3d lap_u(const Eigen::Vector3d &x, double t) const override;
  Eigen::Vector3d dt_u(const Eigen::Vector3d &x, double t) const override;
  double p(const Eigen::Vector3d &x, double t) const override;
  Eigen::Vector3d grad_p(const Eigen::Vector3d &x, double t) const override;
  Eigen::Vector3d B(const Eigen::Vector3d &x, double t) const override;
  Eigen::Matrix3d grad_B(const Eigen::Vector3d &x, double t) const override;
  Eigen::Vector3d curlcurl_B(const Eigen::Vector3d &x, double t) const override;
  Eigen::Vector3d dt_B(const Eigen::Vector3d &x, double t) const override;
};

// u = e^t (sin pi x cos pi y, -cos pi x sin pi y), p = e^t cos pi x cos pi y,
// B = e^t (sin pi y, sin pi x).
class TrigSolution2D : public ExactSolution
{
public:
  int dim() const override { return 2; }
  std::string name() const override { return "trig"; }
  Eigen::Vector3d u(const Eigen::Vector3d &x, double t) const override;
  Eigen::Matrix3d grad_u(const Eigen::Vector3d &x, double t) const override;
  Eigen::Vector3d lap_u(const Eigen::Vector3d &x, double t) const override;
  Eigen::Vector3d dt_u(const Eigen::Vector3d &x, double t) const override;
  double p(const Eigen::Vector3d &x, double t) const override;
  Eigen::Vector3d grad_p(const Eigen::Vector3d &x, double t) const override;
  Eigen::Vector3d B(const Eigen::Vector3d &x, double t) const override;
  Eigen::Matrix3d grad_B(const Eigen::Vector3d &x, double t) const override;
  Eigen::Vector3d curlcurl_B(const Eigen::Vector3d &x, double t) const override;
  Eigen::Vector3d dt_B(const Eigen::Vector3d &x, double t) const override;
};

// Fields inside the discrete spaces: u = a(t)(x^2 - 2xy, y^2 - 2xy),
// p = a(t)(x - 1/2), B = a(t)(1 - y, x), with a = e^t or a = 1 (steady).
class PolySolution2D : public ExactSolution
{
public:
  explicit PolySolution2D(bool steady = false) : steady_(steady) {}
  int dim() const override { return 2; }
  std::string name() const override { return steady_ ? "poly-steady" : "poly"; }
  Eigen::Vector3d u(const Eigen::Vector3d &x, double t) const override;
  Eigen::Matrix3d grad_u(const Eigen::Vector3d &x, double t) const override;
  Eigen::Vector3d lap_u(const Eigen::Vector3d &x, double t) const override;
  Eigen::Vector3d dt_u(const Eigen::Vector3d &x, double t) const override;
  double p(const Eigen::Vector3d &x, double t) const override;
  Eigen::Vector3d grad_p(const Eigen::Vector3d &x, double t) const override;
  Eigen::Vector3d B(const Eigen::Vector3d &x, double t) const override;
  Eigen::Matrix3d grad_B(const Eigen::Vector3d &x, double t) const override;
  Eigen::Vector3d curlcurl_B(const Eigen::Vector3d &x, double t) const override;
  Eigen::Vector3d dt_B(const Eigen::Vector3d &x, double t) const override;

private:
  double a(double t) const;
  double da(double t) const;
  bool steady_;
};

// u = e^t (cos y, cos z, cos x), p = e^t (x - 1/2) cos y sin z,
// B = e^t (sin y, sin z, cos x) on the unit cube.
class CubeSolution3D : public ExactSolution
{
public:
  int dim() const override { return 3; }
  std::string name() const override { return "cube"; }
  Eigen::Vector3d u(const Eigen::Vector3d &x, double t) const override;
  Eigen::Matrix3d grad_u(const Eigen::Vector3d &x, double t) const override;
  Eigen::Vector3d lap_u(const Eigen::Vector3d &x, double t) const override;
  Eigen::Vector3d dt_u(const Eigen::Vector3d &x, double t) const override;
  double p(const Eigen::Vector3d &x, double t) const override;
  Eigen::Vector3d grad_p(const Eigen::Vector3d &x, double t) const override;
  Eigen::Vector3d B(const Eigen::Vector3d &x, double t) const override;
  Eigen::Matrix3d grad_B(const Eigen::Vector3d &x, double t) const override;
  Eigen::Vector3d curlcurl_B(const Eigen::Vector3d &x, double t) const override;
  Eigen::Vector3d dt_B(const Eigen::Vector3d &x, double t) const override;
};

// Regularized lid profile: (1 + (z-1)/alpha)^2 for z >= 1 - alpha, else 0.
double lid_profile(double z, double alpha);

}  // namespace mhdfem

#endif  // MHDFEM_EXACT_HPP

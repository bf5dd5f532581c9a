// SPDX-License-Identifier: Apache-2.0

#include "mhdfem/exact.hpp"

#include <cmath>
#include <numbers>

#include <Eigen/Geometry>

namespace mhdfem
{

namespace
{

constexpr double kPi = std::numbers::pi;

}  // namespace

Eigen::Vector3d curl_from_jacobian(const Eigen::Matrix3d &J)
{
  return {J(2, 1) - J(1, 2), J(0, 2) - J(2, 0), J(1, 0) - J(0, 1)};
}

Eigen::Vector3d ExactSolution::curl_B(const Eigen::Vector3d &x, double t) const
{
  return curl_from_jacobian(grad_B(x, t));
}

Eigen::Vector3d momentum_source(const ExactSolution &s, const Coefficients &k,
                                const Eigen::Vector3d &x, double t)
{
  const Eigen::Vector3d u = s.u(x, t);
  const Eigen::Vector3d B = s.B(x, t);
  return s.dt_u(x, t) - k.viscous * s.lap_u(x, t) + s.grad_u(x, t) * u + s.grad_p(x, t) -
         k.lorentz * s.curl_B(x, t).cross(B);
}

Eigen::Vector3d magnetic_source(const ExactSolution &s, const Coefficients &k,
                                const Eigen::Vector3d &x, double t)
{
  const Eigen::Vector3d u = s.u(x, t);
  const Eigen::Vector3d B = s.B(x, t);
  const Eigen::Matrix3d Ju = s.grad_u(x, t);
  const Eigen::Matrix3d JB = s.grad_B(x, t);
  const Eigen::Vector3d curl_uxB = u * JB.trace() - B * Ju.trace() + Ju * B - JB * u;
  return s.dt_B(x, t) + k.diffusion * s.curlcurl_B(x, t) - k.induction * curl_uxB;
}

// Hartmann

double HartmannSolution::u1(double y)
{
  return (std::cosh(0.5) - std::cosh(y)) / (2.0 * std::sinh(0.5));
}

double HartmannSolution::B1(double y)
{
  return (std::sinh(y) - 2.0 * std::sinh(0.5) * y) / (2.0 * std::sinh(0.5));
}

Eigen::Vector3d HartmannSolution::u(const Eigen::Vector3d &x, double) const
{
  return {u1(x(1)), 0.0, 0.0};
}

Eigen::Matrix3d HartmannSolution::grad_u(const Eigen::Vector3d &x, double) const
{
  Eigen::Matrix3d J = Eigen::Matrix3d::Zero();
  J(0, 1) = -std::sinh(x(1)) / (2.0 * std::sinh(0.5));
  return J;
}

Eigen::Vector3d HartmannSolution::lap_u(const Eigen::Vector3d &x, double) const
{
  return {-std::cosh(x(1)) / (2.0 * std::sinh(0.5)), 0.0, 0.0};
}

Eigen::Vector3d HartmannSolution::dt_u(const Eigen::Vector3d &, double) const
{
  return Eigen::Vector3d::Zero();
}

double HartmannSolution::p(const Eigen::Vector3d &x, double) const
{
  const double b = B1(x(1));
  return -x(0) - 0.5 * b * b;
}

Eigen::Vector3d HartmannSolution::grad_p(const Eigen::Vector3d &x, double) const
{
  const double db = (std::cosh(x(1)) - 2.0 * std::sinh(0.5)) / (2.0 * std::sinh(0.5));
  return {-1.0, -B1(x(1)) * db, 0.0};
}

Eigen::Vector3d HartmannSolution::B(const Eigen::Vector3d &x, double) const
{
  return {B1(x(1)), 1.0, 0.0};
}

Eigen::Matrix3d HartmannSolution::grad_B(const Eigen::Vector3d &x, double) const
{
  Eigen::Matrix3d J = Eigen::Matrix3d::Zero();
  J(0, 1) = (std::cosh(x(1)) - 2.0 * std::sinh(0.5)) / (2.0 * std::sinh(0.5));
  return J;
}

Eigen::Vector3d HartmannSolution::curlcurl_B(const Eigen::Vector3d &x, double) const
{
  // curl B = -B1'(y), curl of that scalar is (d/dy, -d/dx) = (-B1'', 0).
  return {-std::sinh(x(1)) / (2.0 * std::sinh(0.5)), 0.0, 0.0};
}

Eigen::Vector3d HartmannSolution::dt_B(const Eigen::Vector3d &, double) const
{
  return Eigen::Vector3d::Zero();
}

// Trig 2D

Eigen::Vector3d TrigSolution2D::u(const Eigen::Vector3d &x, double t) const
{
  const double e = std::exp(t);
  return {e * std::sin(kPi * x(0)) * std::cos(kPi * x(1)), -e * std::cos(kPi * x(0)) * std::sin(kPi * x(1)),
          0.0};
}

Eigen::Matrix3d TrigSolution2D::grad_u(const Eigen::Vector3d &x, double t) const
{
  const double e = std::exp(t) * kPi;
  const double sx = std::sin(kPi * x(0)), cx = std::cos(kPi * x(0));
  const double sy = std::sin(kPi * x(1)), cy = std::cos(kPi * x(1));
  Eigen::Matrix3d J = Eigen::Matrix3d::Zero();
  J(0, 0) = e * cx * cy;
  J(0, 1) = -e * sx * sy;
  J(1, 0) = e * sx * sy;
  J(1, 1) = -e * cx * cy;
  return J;
}

Eigen::Vector3d TrigSolution2D::lap_u(const Eigen::Vector3d &x, double t) const
{
  return -2.0 * kPi * kPi * u(x, t);
}

Eigen::Vector3d TrigSolution2D::dt_u(const Eigen::Vector3d &x, double t) const
{
  return u(x, t);
}

double TrigSolution2D::p(const Eigen::Vector3d &x, double t) const
{
  return std::exp(t) * std::cos(kPi * x(0)) * std::cos(kPi * x(1));
}

Eigen::Vector3d TrigSolution2D::grad_p(const Eigen::Vector3d &x, double t) const
{
  const double e = std::exp(t) * kPi;
  return {-e * std::sin(kPi * x(0)) * std::cos(kPi * x(1)), -e * std::cos(kPi * x(0)) * std::sin(kPi * x(1)),
          0.0};
}

Eigen::Vector3d TrigSolution2D::B(const Eigen::Vector3d &x, double t) const
{
  const double e = std::exp(t);
  return {e * std::sin(kPi * x(1)), e * std::sin(kPi * x(0)), 0.0};
}

Eigen::Matrix3d TrigSolution2D::grad_B(const Eigen::Vector3d &x, double t) const
{
  const double e = std::exp(t) * kPi;
  Eigen::Matrix3d J = Eigen::Matrix3d::Zero();
  J(0, 1) = e * std::cos(kPi * x(1));
  J(1, 0) = e * std::cos(kPi * x(0));
  return J;
}

Eigen::Vector3d TrigSolution2D::curlcurl_B(const Eigen::Vector3d &x, double t) const
{
  return kPi * kPi * B(x, t);
}

Eigen::Vector3d TrigSolution2D::dt_B(const Eigen::Vector3d &x, double t) const
{
  return B(x, t);
}

// Polynomial 2D

double PolySolution2D::a(double t) const
{
  return steady_ ? 1.0 : std::exp(t);
}

double PolySolution2D::da(double t) const
{
  return steady_ ? 0.0 : std::exp(t);
}

Eigen::Vector3d PolySolution2D::u(const Eigen::Vector3d &x, double t) const
{
  return a(t) * Eigen::Vector3d(x(0) * x(0) - 2 * x(0) * x(1), x(1) * x(1) - 2 * x(0) * x(1), 0.0);
}

Eigen::Matrix3d PolySolution2D::grad_u(const Eigen::Vector3d &x, double t) const
{
  Eigen::Matrix3d J = Eigen::Matrix3d::Zero();
  J(0, 0) = 2 * x(0) - 2 * x(1);
  J(0, 1) = -2 * x(0);
  J(1, 0) = -2 * x(1);
  J(1, 1) = 2 * x(1) - 2 * x(0);
  return a(t) * J;
}

Eigen::Vector3d PolySolution2D::lap_u(const Eigen::Vector3d &, double t) const
{
  return {2 * a(t), 2 * a(t), 0.0};
}

Eigen::Vector3d PolySolution2D::dt_u(const Eigen::Vector3d &x, double t) const
{
  return da(t) * Eigen::Vector3d(x(0) * x(0) - 2 * x(0) * x(1), x(1) * x(1) - 2 * x(0) * x(1), 0.0);
}

double PolySolution2D::p(const Eigen::Vector3d &x, double t) const
{
  return a(t) * (x(0) - 0.5);
}

Eigen::Vector3d PolySolution2D::grad_p(const Eigen::Vector3d &, double t) const
{
  return {a(t), 0.0, 0.0};
}

Eigen::Vector3d PolySolution2D::B(const Eigen::Vector3d &x, double t) const
{
  return a(t) * Eigen::Vector3d(1 - x(1), x(0), 0.0);
}

Eigen::Matrix3d PolySolution2D::grad_B(const Eigen::Vector3d &, double t) const
{
  Eigen::Matrix3d J = Eigen::Matrix3d::Zero();
  J(0, 1) = -a(t);
  J(1, 0) = a(t);
  return J;
}

Eigen::Vector3d PolySolution2D::curlcurl_B(const Eigen::Vector3d &, double) const
{
  return Eigen::Vector3d::Zero();
}

Eigen::Vector3d PolySolution2D::dt_B(const Eigen::Vector3d &x, double t) const
{
  return da(t) * Eigen::Vector3d(1 - x(1), x(0), 0.0);
}

// Cube 3D

Eigen::Vector3d CubeSolution3D::u(const Eigen::Vector3d &x, double t) const
{
  return std::exp(t) * Eigen::Vector3d(std::cos(x(1)), std::cos(x(2)), std::cos(x(0)));
}

Eigen::Matrix3d CubeSolution3D::grad_u(const Eigen::Vector3d &x, double t) const
{
  Eigen::Matrix3d J = Eigen::Matrix3d::Zero();
  J(0, 1) = -std::sin(x(1));
  J(1, 2) = -std::sin(x(2));
  J(2, 0) = -std::sin(x(0));
  return std::exp(t) * J;
}

Eigen::Vector3d CubeSolution3D::lap_u(const Eigen::Vector3d &x, double t) const
{
  return -u(x, t);
}

Eigen::Vector3d CubeSolution3D::dt_u(const Eigen::Vector3d &x, double t) const
{
  return u(x, t);
}

double CubeSolution3D::p(const Eigen::Vector3d &x, double t) const
{
  return std::exp(t) * (x(0) - 0.5) * std::cos(x(1)) * std::sin(x(2));
}

Eigen::Vector3d CubeSolution3D::grad_p(const Eigen::Vector3d &x, double t) const
{
  const double cy = std::cos(x(1)), sy = std::sin(x(1)), cz = std::cos(x(2)), sz = std::sin(x(2));
  return std::exp(t) * Eigen::Vector3d(cy * sz, -(x(0) - 0.5) * sy * sz, (x(0) - 0.5) * cy * cz);
}

Eigen::Vector3d CubeSolution3D::B(const Eigen::Vector3d &x, double t) const
{
  return std::exp(t) * Eigen::Vector3d(std::sin(x(1)), std::sin(x(2)), std::cos(x(0)));
}

Eigen::Matrix3d CubeSolution3D::grad_B(const Eigen::Vector3d &x, double t) const
{
  Eigen::Matrix3d J = Eigen::Matrix3d::Zero();
  J(0, 1) = std::cos(x(1));
  J(1, 2) = std::cos(x(2));
  J(2, 0) = -std::sin(x(0));
  return std::exp(t) * J;
}

Eigen::Vector3d CubeSolution3D::curlcurl_B(const Eigen::Vector3d &x, double t) const
{
  return B(x, t);
}

Eigen::Vector3d CubeSolution3D::dt_B(const Eigen::Vector3d &x, double t) const
{
  return B(x, t);
}

double lid_profile(double z, double alpha)
{
  if (z < 1.0 - alpha)
  {
    return 0.0;
  }
  const double s = 1.0 + (z - 1.0) / alpha;
  return s * s;
}

}  // namespace mhdfem

// SPDX-License-Identifier: Apache-2.0

#include "mhdfem/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <mutex>
#include <vector>

#include <Eigen/Eigenvalues>

#include "mhdfem/mesh.hpp"

namespace mhdfem
{

namespace
{

// Accumulates points given as orbits of barycentric tuples.
class RuleBuilder
{
public:
  explicit RuleBuilder(int dim) : dim_(dim) {}

  // Adds every distinct permutation of the barycentric tuple `bary` with weight w.
  RuleBuilder &orbit(std::vector<double> bary, double w)
  {
    if (static_cast<int>(bary.size()) == dim_)
    {
      double s = 0.0;
      for (double b : bary)
      {
        s += b;
      }
      bary.push_back(1.0 - s);
    }
    std::sort(bary.begin(), bary.end());
    // Merge coordinates equal up to rounding so each orbit point appears once.
    for (std::size_t i = 1; i < bary.size(); ++i)
    {
      if (std::abs(bary[i] - bary[i - 1]) < 1e-13)
      {
        bary[i] = bary[i - 1];
      }
    }
    do
    {
      std::vector<double> p(bary.begin() + 1, bary.end());
      pts_.push_back(p);
      w_.push_back(w);
    } while (std::next_permutation(bary.begin(), bary.end()));
    return *this;
  }

  // Cyclic rotations only (used by the degree-7 triangle rule).
  RuleBuilder &rotations(double a, double b, double c, double w)
  {
    const std::array<std::array<double, 3>, 3> rot = {{{c, a, b}, {b, c, a}, {a, b, c}}};
    for (const auto &r : rot)
    {
      pts_.push_back({r[1], r[2]});
      w_.push_back(w);
    }
    return *this;
  }

  QuadRule build(int degree) const
  {
    QuadRule q;
    q.points.resize(dim_, static_cast<Eigen::Index>(pts_.size()));
    q.weights.resize(static_cast<Eigen::Index>(w_.size()));
    for (std::size_t i = 0; i < pts_.size(); ++i)
    {
      for (int d = 0; d < dim_; ++d)
      {
        q.points(d, i) = pts_[i][d];
      }
      q.weights(i) = w_[i];
    }
    q.exact_degree = degree;
    return q;
  }

private:
  int dim_;
  std::vector<std::vector<double>> pts_;
  std::vector<double> w_;
};

// Triangle rules (Strang-Fix / Dunavant families), weights sum to 1/2.
QuadRule triangle_rule(int degree)
{
  RuleBuilder r(2);
  switch (degree)
  {
    case 0:
    case 1:
      return r.orbit({1. / 3, 1. / 3}, 0.5).build(1);
    case 2:
      return r.orbit({1. / 6, 1. / 6}, 1. / 6).build(2);
    case 3:  // the 4-point degree-3 rule has a negative weight; use degree 4
    case 4:
      return r.orbit({0.091576213509770743460, 0.091576213509770743460}, 0.054975871827660933819)
          .orbit({0.44594849091596488632, 0.44594849091596488632}, 0.11169079483900573285)
          .build(4);
    case 5:
      return r.orbit({1. / 3, 1. / 3}, 0.1125)
          .orbit({0.10128650732345633880, 0.10128650732345633880}, 0.062969590272413576298)
          .orbit({0.47014206410511508977, 0.47014206410511508977}, 0.066197076394253090369)
          .build(5);
    case 6:
      return r.orbit({0.063089014491502228340, 0.063089014491502228340}, 0.025422453185103408460)
          .orbit({0.24928674517091042129, 0.24928674517091042129}, 0.058393137863189683013)
          .orbit({0.053145049844816947353, 0.31035245103378440542}, 0.041425537809186787597)
          .build(6);
    case 7:
      return r
          .rotations(0.062382265094402118174, 0.067517867073916085443,
                     1.0 - 0.062382265094402118174 - 0.067517867073916085443,
                     0.026517028157436251429)
          .rotations(0.055225456656926611737, 0.32150249385198182267,
                     1.0 - 0.055225456656926611737 - 0.32150249385198182267,
                     0.043881408714446055037)
          .rotations(0.034324302945097146470, 0.66094919618673565761, 0.30472650086816719592,
                     0.028775042784981585738)
          .rotations(0.51584233435359177926, 0.27771616697639178257, 0.20644149867001643817,
                     0.067493187009802774463)
          .build(7);
    case 8:
      return r.orbit({1. / 3, 1. / 3}, 0.0721578038388935841255455552445323)
          .orbit({0.170569307751760206622293501491464, 0.170569307751760206622293501491464},
                 0.0516086852673591251408957751460645)
          .orbit({0.0505472283170309754584235505965989, 0.0505472283170309754584235505965989},
                 0.0162292488115990401554629641708902)
          .orbit({0.459292588292723156028815514494169, 0.459292588292723156028815514494169},
                 0.0475458171336423123969480521942921)
          .orbit({0.008394777409957605337213834539296, 0.263112829634638113421785786284643},
                 0.0136151570872174971324223450369544)
          .build(8);
    default:
      throw Error("gauss_rule: triangle degree > 8 unsupported");
  }
}

// Tetrahedron rules (Keast family), weights sum to 1/6.
QuadRule tet_rule(int degree)
{
  RuleBuilder r(3);
  auto four = [](double a) { return std::vector<double>{a, a, a}; };
  auto four_b = [](double a) {
    const double b = (1.0 - a) / 3.0;
    return std::vector<double>{a, b, b};
  };
  auto six = [](double a) {
    const double b = 0.5 - a;
    return std::vector<double>{a, a, b};
  };
  auto twelve = [](double a, double b) { return std::vector<double>{a, a, b}; };
  switch (degree)
  {
    case 0:
    case 1:
      return r.orbit({0.25, 0.25, 0.25}, 1. / 6).build(1);
    case 2:
      return r.orbit(four_b(0.58541019662496845446), 1. / 24).build(2);
    case 3:  // lower-order Keast rules carry negative weights; use degree 5
    case 4:
    case 5:
      return r.orbit(six(0.045503704125649649492), 7.0910034628469110730E-03)
          .orbit(four(0.092735250310891226402), 0.012248840519393658257)
          .orbit(four_b(0.067342242210098170608), 0.018781320953002641800)
          .build(5);
    case 6:
      return r.orbit(four(0.21460287125915202929), 6.6537917096945820166E-03)
          .orbit(four(0.040673958534611353116), 1.6795351758867738247E-03)
          .orbit(four_b(0.032986329573173468968), 9.2261969239424536825E-03)
          .orbit(twelve(0.063661001875017525299, 0.26967233145831580803), 8.0357142857142857143E-03)
          .build(6);
    case 7:
      return r.orbit(six(0.0), 9.7001763668430335097E-04)
          .orbit({0.25, 0.25, 0.25}, 0.018264223466108820291)
          .orbit(four(0.078213192330318064374), 0.010599941524413686916)
          .orbit(four(0.12184321666390517465), -0.062517740114331851691)
          .orbit(four_b(2.3825066607381275412E-03), 4.8914252630734993858E-03)
          .orbit(twelve(0.1, 0.2), 0.027557319223985890653)
          .build(7);
    case 8:
      return r.orbit(four(5.7819505051979972532E-03), 1.6983410909288737984E-04)
          .orbit(four(0.082103588310546723091), 1.9670333131339009876E-03)
          .orbit(twelve(0.036607749553197423679, 0.19048604193463345570), 2.1405191411620925965E-03)
          .orbit(six(0.050532740018894224426), 4.5796838244672818007E-03)
          .orbit(twelve(0.22906653611681113960, 0.035639582788534043717), 5.7044858086819185068E-03)
          .orbit(four(0.20682993161067320408), 0.014250305822866901248)
          .orbit({0.25, 0.25, 0.25}, -0.020500188658639915841)
          .build(8);
    default:
      throw Error("gauss_rule: tetrahedron degree > 8 unsupported");
  }
}

}  // namespace

QuadRule gauss_legendre(int n)
{
  if (n < 1)
  {
    throw Error("gauss_legendre: need at least one point");
  }
  // Golub-Welsch: nodes are eigenvalues of the Jacobi matrix.
  Eigen::MatrixXd jac = Eigen::MatrixXd::Zero(n, n);
  for (int k = 1; k < n; ++k)
  {
    const double beta = k / std::sqrt(4.0 * k * k - 1.0);
    jac(k, k - 1) = jac(k - 1, k) = beta;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(jac);
  QuadRule q;
  q.points.resize(1, n);
  q.weights.resize(n);
  for (int i = 0; i < n; ++i)
  {
    q.points(0, i) = 0.5 * (eig.eigenvalues()(i) + 1.0);
    q.weights(i) = eig.eigenvectors()(0, i) * eig.eigenvectors()(0, i);
  }
  q.exact_degree = 2 * n - 1;
  return q;
}

const QuadRule &gauss_rule(CellType type, int degree)
{
  if (degree > kMaxQuadratureDegree)
  {
    throw Error("gauss_rule: degree " + std::to_string(degree) + " unsupported (max 8)");
  }
  degree = std::max(degree, 1);
  static std::mutex lock;
  static std::map<std::pair<int, int>, QuadRule> cache;
  std::lock_guard<std::mutex> guard(lock);
  const auto key = std::make_pair(static_cast<int>(type), degree);
  auto it = cache.find(key);
  if (it == cache.end())
  {
    QuadRule rule;
    switch (type)
    {
      case CellType::Edge:
        rule = gauss_legendre((degree + 2) / 2);
        break;
      case CellType::Triangle:
        rule = triangle_rule(degree);
        break;
      case CellType::Tetrahedron:
        rule = tet_rule(degree);
        break;
    }
    it = cache.emplace(key, std::move(rule)).first;
  }
  return it->second;
}

}  // namespace mhdfem

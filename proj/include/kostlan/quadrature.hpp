#pragma once

#include <cmath>
#include <stdexcept>
#include <utility>
#include <vector>

#include "kostlan/common.hpp"

namespace kostlan {

// Nodes and weights of the k-point Gauss-Legendre rule on [-1, 1],
// exact for polynomials of degree <= 2k - 1.
inline std::pair<std::vector<double>, std::vector<double>> gauss_legendre(int k) {
  std::vector<double> x(k), w(k);
  if (k == 1) {
    x[0] = 0.0;
    w[0] = 2.0;
    return {x, w};
  }
  for (int i = 0; i < k; ++i) {
    double t = std::cos(kPi * (i + 0.75) / (k + 0.5));
    double dp = 1.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = t;
      for (int j = 2; j <= k; ++j) {
        const double pj = ((2.0 * j - 1.0) * t * p1 - (j - 1.0) * p0) / j;
        p0 = p1;
        p1 = pj;
      }
      dp = k * (t * p1 - p0) / (t * t - 1.0);
      const double dt = p1 / dp;
      t -= dt;
      if (std::abs(dt) < 1e-15) break;
    }
    x[k - 1 - i] = t;
    w[k - 1 - i] = 2.0 / ((1.0 - t * t) * dp * dp);
  }
  return {x, w};
}

struct QuadratureRule {
  int n = 1;
  int exact_degree = 0;
  std::vector<SpherePoint> nodes;
  std::vector<double> weights;

  double integrate(const std::vector<double>& values) const {
    double s = 0.0;
    for (std::size_t i = 0; i < weights.size(); ++i) s += weights[i] * values[i];
    return s;
  }
};

// Rule integrating restricted polynomials of degree <= D exactly.
// n = 1: equispaced angles; n = 2: Gauss-Legendre in the colatitude crossed
// with equispaced longitudes.
inline QuadratureRule quadrature(int n, int D) {
  if (D < 0) throw std::invalid_argument("quadrature: negative exact degree");
  QuadratureRule rule;
  rule.n = n;
  rule.exact_degree = D;
  if (n == 1) {
    const int m = D + 1;
    rule.nodes.reserve(m);
    for (int i = 0; i < m; ++i) rule.nodes.push_back(SpherePoint::from_angle(kTwoPi * i / m));
    rule.weights.assign(m, kTwoPi / m);
  } else if (n == 2) {
    const int k = D / 2 + 1;
    const int m = D + 1;
    auto [gx, gw] = gauss_legendre(k);
    rule.nodes.reserve(std::size_t(k) * m);
    rule.weights.reserve(std::size_t(k) * m);
    for (int i = 0; i < k; ++i) {
      const double colat = std::acos(gx[i]);
      for (int j = 0; j < m; ++j) {
        rule.nodes.push_back(SpherePoint::from_spherical(colat, kTwoPi * j / m));
        rule.weights.push_back(gw[i] * kTwoPi / m);
      }
    }
  } else {
    throw std::invalid_argument("quadrature: only n in {1,2} supported");
  }
  return rule;
}

}  // namespace kostlan

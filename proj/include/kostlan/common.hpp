#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace kostlan {

inline constexpr double kPi = 3.141592653589793238462643383279502884;
inline constexpr double kTwoPi = 2.0 * kPi;
inline constexpr double kFourPi = 4.0 * kPi;

// Input rejected because the zero set (or the query point) is degenerate
// within tolerance.
class degenerate_input_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Curve extraction did not stabilize under mesh refinement.
class resolution_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// The basepoint y_inf is too close to a curve; caller should perturb and retry.
class basepoint_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline double log_factorial(int k) { return std::lgamma(double(k) + 1.0); }

inline double log_binomial(int n, int k) {
  return log_factorial(n) - log_factorial(k) - log_factorial(n - k);
}

// Exact for results below 2^53; enough for index bookkeeping.
inline std::size_t binomial_size(int n, int k) {
  if (k < 0 || k > n) return 0;
  if (k > n - k) k = n - k;
  std::size_t r = 1;
  for (int i = 1; i <= k; ++i) r = r * std::size_t(n - k + i) / std::size_t(i);
  return r;
}

// Surface volume of S^n.
inline double sphere_volume(int n) {
  return 2.0 * std::pow(kPi, 0.5 * (n + 1)) / std::tgamma(0.5 * (n + 1));
}

// Unit vector in R^{n+1}, n <= 3.
struct SpherePoint {
  int n = 1;
  std::array<double, 4> x{};

  static SpherePoint from_angle(double phi) {
    SpherePoint p;
    p.n = 1;
    p.x = {std::cos(phi), std::sin(phi), 0.0, 0.0};
    return p;
  }

  static SpherePoint from_spherical(double colat, double lon) {
    SpherePoint p;
    p.n = 2;
    const double st = std::sin(colat);
    p.x = {st * std::cos(lon), st * std::sin(lon), std::cos(colat), 0.0};
    return p;
  }

  static SpherePoint from_coords(const std::vector<double>& c) {
    if (c.size() < 2 || c.size() > 4)
      throw std::invalid_argument("SpherePoint: need 2..4 coordinates");
    SpherePoint p;
    p.n = int(c.size()) - 1;
    double s = 0.0;
    for (std::size_t i = 0; i < c.size(); ++i) {
      p.x[i] = c[i];
      s += c[i] * c[i];
    }
    if (std::abs(std::sqrt(s) - 1.0) > 1e-14)
      throw std::invalid_argument("SpherePoint: not on the unit sphere");
    return p;
  }

  double phi() const { return std::atan2(x[1], x[0]); }       // n = 1
  double colat() const { return std::acos(std::clamp(x[2], -1.0, 1.0)); }  // n = 2
  double lon() const { return std::atan2(x[1], x[0]); }       // n = 2

  double dot(const SpherePoint& o) const {
    double s = 0.0;
    for (int i = 0; i <= n; ++i) s += x[i] * o.x[i];
    return s;
  }
};

}  // namespace kostlan

#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

#include "kostlan/common.hpp"
#include "kostlan/poly.hpp"

namespace kostlan {

// dim V_{n,l}.
inline int harmonic_dim(int n, int l) {
  if (l < 0) throw std::invalid_argument("harmonic_dim: negative degree");
  if (n == 1) return l == 0 ? 1 : 2;
  if (n == 2) return 2 * l + 1;
  throw std::invalid_argument("harmonic_dim: only n in {1,2} supported");
}

// Fully normalized associated Legendre values q_{l,m}(cos colat) for all
// 0 <= m <= l <= lmax, normalized so that {q_{l,0}} and {sqrt(2) q_{l,m}
// cos/sin(m lon)} are L^2-orthonormal on S^2 with the standard measure.
struct AlfTable {
  int lmax;
  std::vector<double> v;  // index l*(l+1)/2 + m

  AlfTable(int lmax_, double ct, double st) : lmax(lmax_), v(std::size_t(lmax_ + 1) * (lmax_ + 2) / 2) {
    q(0, 0) = std::sqrt(1.0 / kFourPi);
    for (int m = 1; m <= lmax; ++m)
      q(m, m) = st * std::sqrt((2.0 * m + 1.0) / (2.0 * m)) * q(m - 1, m - 1);
    for (int m = 0; m < lmax; ++m)
      q(m + 1, m) = ct * std::sqrt(2.0 * m + 3.0) * q(m, m);
    for (int m = 0; m <= lmax; ++m) {
      for (int l = m + 2; l <= lmax; ++l) {
        const double a = std::sqrt((4.0 * l * l - 1.0) / (double(l) * l - double(m) * m));
        const double b = std::sqrt((double(l - 1) * (l - 1) - double(m) * m) /
                                   (4.0 * double(l - 1) * (l - 1) - 1.0));
        q(l, m) = a * (ct * q(l - 1, m) - b * q(l - 2, m));
      }
    }
  }

  double& q(int l, int m) { return v[std::size_t(l) * (l + 1) / 2 + m]; }
  double q(int l, int m) const { return v[std::size_t(l) * (l + 1) / 2 + m]; }
};

// Basis ordering: n = 1 has j = 0 (cos) and j = 1 (sin); n = 2 has
// j = 0..2l with m = j - l, negative m mapped to sin(|m| lon) and positive
// to cos(m lon).
inline double basis_eval(int n, int l, int j, const SpherePoint& theta) {
  if (j < 0 || j >= harmonic_dim(n, l)) throw std::invalid_argument("basis_eval: j out of range");
  if (n == 1) {
    if (l == 0) return 1.0 / std::sqrt(kTwoPi);
    const double phi = theta.phi();
    return (j == 0 ? std::cos(l * phi) : std::sin(l * phi)) / std::sqrt(kPi);
  }
  const double ct = theta.x[2];
  const double st = std::sqrt(std::max(0.0, 1.0 - ct * ct));
  AlfTable alf(l, ct, st);
  const int m = j - l;
  if (m == 0) return alf.q(l, 0);
  const double lon = theta.lon();
  const double ang = std::abs(m) * lon;
  const double trig = m > 0 ? std::cos(ang) : std::sin(ang);
  return std::sqrt(2.0) * alf.q(l, std::abs(m)) * trig;
}

// Flat offset of the (l, j = 0) slot when all degrees 0..l-1 are laid out in
// order.
inline int basis_offset(int n, int l) {
  if (n == 1) return l == 0 ? 0 : 1 + 2 * (l - 1);
  return l * l;
}

// Evaluates every y_{l,j} with l <= lmax at one point, writing into `out`
// (resized to basis_offset(n, lmax + 1)). Shares one ALF/trig sweep across
// all degrees.
inline void basis_row(int n, int lmax, const SpherePoint& theta, std::vector<double>& out) {
  out.assign(basis_offset(n, lmax + 1), 0.0);
  if (n == 1) {
    const double phi = theta.phi();
    out[0] = 1.0 / std::sqrt(kTwoPi);
    const double c1 = std::cos(phi), s1 = std::sin(phi);
    double c = 1.0, s = 0.0;
    for (int l = 1; l <= lmax; ++l) {
      const double cn = c * c1 - s * s1;
      const double sn = s * c1 + c * s1;
      c = cn;
      s = sn;
      out[basis_offset(1, l)] = c / std::sqrt(kPi);
      out[basis_offset(1, l) + 1] = s / std::sqrt(kPi);
    }
    return;
  }
  if (n != 2) throw std::invalid_argument("basis_row: only n in {1,2} supported");
  const double ct = theta.x[2];
  const double st = std::sqrt(std::max(0.0, 1.0 - ct * ct));
  AlfTable alf(lmax, ct, st);
  const double lon = theta.lon();
  std::vector<double> cosm(lmax + 1), sinm(lmax + 1);
  for (int m = 0; m <= lmax; ++m) {
    cosm[m] = std::cos(m * lon);
    sinm[m] = std::sin(m * lon);
  }
  const double r2 = std::sqrt(2.0);
  for (int l = 0; l <= lmax; ++l) {
    const int base = basis_offset(2, l);
    out[base + l] = alf.q(l, 0);
    for (int m = 1; m <= l; ++m) {
      const double qv = r2 * alf.q(l, m);
      out[base + l - m] = qv * sinm[m];
      out[base + l + m] = qv * cosm[m];
    }
  }
}

// Reproducing kernel sum_j y_{l,j}(t1) y_{l,j}(t2); depends only on <t1,t2>.
inline double zonal(int n, int l, const SpherePoint& t1, const SpherePoint& t2) {
  double s = 0.0;
  for (int j = 0; j < harmonic_dim(n, l); ++j) s += basis_eval(n, l, j, t1) * basis_eval(n, l, j, t2);
  return s;
}

// Rescaling weight w_{n,d}(l): ratio between the L^2 norm of a degree-l
// harmonic and the Bombieri-Weil norm of its degree-d homogeneous
// representative.
inline double weight(int n, int d, int l) {
  if (l < 0 || l > d || (d - l) % 2 != 0)
    throw std::invalid_argument("weight: l must satisfy 0 <= l <= d with d - l even");
  const double half = 0.5 * (n + 1);
  const double he = 0.5 * (d + l);
  double lw2 = std::log(sphere_volume(n)) + std::lgamma(half) + std::lgamma(he + 1.0) -
               std::lgamma(half + he) - d * std::log(2.0) + log_binomial(d, (d - l) / 2);
  return std::exp(0.5 * lw2);
}

// Homogeneous harmonic polynomial of degree l whose restriction to the
// sphere equals basis_eval(n, l, j, .).
inline HomogeneousPoly solid_harmonic(int n, int l, int j) {
  if (j < 0 || j >= harmonic_dim(n, l)) throw std::invalid_argument("solid_harmonic: j out of range");
  if (n == 1) {
    HomogeneousPoly p(1, l);
    if (l == 0) {
      p.coeffs[0] = 1.0 / std::sqrt(kTwoPi);
      return p;
    }
    // cos/sin(l phi) are the real and imaginary parts of (x + iy)^l.
    const double scale = 1.0 / std::sqrt(kPi);
    for (int u = (j == 0 ? 0 : 1); u <= l; u += 2) {
      const int sgn = ((j == 0 ? u / 2 : (u - 1) / 2) % 2 == 0) ? 1 : -1;
      MultiIndex a = {l - u, u};
      p.at(a) = sgn * scale * std::exp(log_binomial(l, u));
    }
    return p;
  }
  if (n != 2) throw std::invalid_argument("solid_harmonic: only n in {1,2} supported");

  const int m = std::abs(j - l);
  const bool sine = (j - l) < 0;
  HomogeneousPoly p(2, l);
  std::vector<long double> acc(p.size(), 0.0L);
  const long double scale =
      (m == 0 ? 1.0L : std::sqrt((long double)2.0)) *
      std::exp(0.5L * (long double)(std::log(2.0 * l + 1.0) - std::log(kFourPi) +
                                    log_factorial(l - m) - log_factorial(l + m)));
  MultiIndex e(3);
  for (int k = 0; 2 * k <= l - m; ++k) {
    // r^l P_l^m(cos colat) e^{im lon} = (x+iy)^m sum_k b_k r^{2k} z^{l-m-2k}.
    const double logb = -l * std::log(2.0) + log_binomial(l, k) + log_binomial(2 * l - 2 * k, l) +
                        log_factorial(l - 2 * k) - log_factorial(l - m - 2 * k);
    const long double bk = (k % 2 == 0 ? 1.0L : -1.0L) * std::exp((long double)logb);
    for (int i = 0; i <= k; ++i) {
      for (int jj = 0; i + jj <= k; ++jj) {
        const int t = k - i - jj;
        const long double mult =
            std::exp((long double)(log_factorial(k) - log_factorial(i) - log_factorial(jj) -
                                   log_factorial(t)));
        for (int u = (sine ? 1 : 0); u <= m; u += 2) {
          const int sgn = ((sine ? (u - 1) / 2 : u / 2) % 2 == 0) ? 1 : -1;
          const long double cmu = std::exp((long double)log_binomial(m, u));
          e[0] = 2 * i + (m - u);
          e[1] = 2 * jj + u;
          e[2] = 2 * t + (l - m - 2 * k);
          acc[monomial_rank(e)] += bk * mult * (long double)sgn * cmu;
        }
      }
    }
  }
  for (std::size_t i = 0; i < p.size(); ++i) p.coeffs[i] = double(scale * acc[i]);
  return p;
}

// Precomputed solid harmonics for all l <= lmax (with the d-parity left to
// the caller); shared read-only across threads.
class SolidBasis {
 public:
  SolidBasis(int n, int lmax) : n_(n), lmax_(lmax) {
    offsets_.resize(lmax + 1, 0);
    for (int l = 0; l <= lmax; ++l) {
      offsets_[l] = int(polys_.size());
      for (int j = 0; j < harmonic_dim(n, l); ++j) polys_.push_back(solid_harmonic(n, l, j));
    }
  }

  const HomogeneousPoly& get(int l, int j) const { return polys_[offsets_[l] + j]; }
  int n() const { return n_; }
  int lmax() const { return lmax_; }

 private:
  int n_;
  int lmax_;
  std::vector<int> offsets_;
  std::vector<HomogeneousPoly> polys_;
};

}  // namespace kostlan

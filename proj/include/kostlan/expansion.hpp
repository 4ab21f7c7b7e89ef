#pragma once

#include <cmath>
#include <map>
#include <stdexcept>
#include <vector>

#include "kostlan/harmonics.hpp"
#include "kostlan/poly.hpp"
#include "kostlan/quadrature.hpp"

namespace kostlan {

// Coefficients of a restricted polynomial in the L^2-orthonormal eigenbasis
// {y_{l,j}}. `d` is the nominal homogeneous degree (it fixes the
// Bombieri-Weil normalization); `parity` records the parity of the original
// degree, which truncation preserves.
struct HarmonicExpansion {
  int n = 1;
  int d = 0;
  int parity = 0;
  std::map<int, std::vector<double>> comps;

  HarmonicExpansion() = default;
  HarmonicExpansion(int n_, int d_) : n(n_), d(d_), parity(d_ % 2) {}
  HarmonicExpansion(int n_, int d_, int parity_) : n(n_), d(d_), parity(parity_) {}

  void set_component(int l, std::vector<double> c) {
    if (l < 0 || l > d || l % 2 != parity)
      throw std::invalid_argument("set_component: inadmissible harmonic degree");
    if (int(c.size()) != harmonic_dim(n, l))
      throw std::invalid_argument("set_component: wrong coefficient count");
    comps[l] = std::move(c);
  }

  int max_degree() const { return comps.empty() ? 0 : comps.rbegin()->first; }

  double l2_norm_sq() const {
    double s = 0.0;
    for (const auto& [l, c] : comps)
      for (double x : c) s += x * x;
    return s;
  }
  double l2_norm() const { return std::sqrt(l2_norm_sq()); }

  // (sum_l l^{2q} ||p_l||^2)^{1/2} with 0^0 = 1, so q = 0 is the L^2 norm.
  double sobolev_norm(double q) const {
    double s = 0.0;
    for (const auto& [l, c] : comps) {
      double block = 0.0;
      for (double x : c) block += x * x;
      s += std::pow(double(l), 2.0 * q) * block;
    }
    return std::sqrt(s);
  }

  // Bombieri-Weil norm at the nominal degree d, via the rescaling weights.
  double bw_norm() const {
    double s = 0.0;
    for (const auto& [l, c] : comps) {
      const double w = weight(n, d, l);
      for (double x : c) s += (x / w) * (x / w);
    }
    return std::sqrt(s);
  }
};

// L^2 projection onto each eigenspace using a rule exact to degree >= 2d.
inline HarmonicExpansion decompose(const HomogeneousPoly& P) {
  if (P.n != 1 && P.n != 2) throw std::invalid_argument("decompose: only n in {1,2} supported");
  HarmonicExpansion e(P.n, P.d);
  auto rule = quadrature(P.n, 2 * P.d);
  std::vector<std::vector<double>> acc;
  for (int l = P.d % 2; l <= P.d; l += 2) acc.push_back(std::vector<double>(harmonic_dim(P.n, l), 0.0));
  std::vector<double> row;
  for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
    const double pv = rule.weights[q] * P.evaluate(rule.nodes[q]);
    if (pv == 0.0) continue;
    basis_row(P.n, P.d, rule.nodes[q], row);
    int idx = 0;
    for (int l = P.d % 2; l <= P.d; l += 2, ++idx) {
      const int base = basis_offset(P.n, l);
      auto& dst = acc[idx];
      for (std::size_t j = 0; j < dst.size(); ++j) dst[j] += pv * row[base + j];
    }
  }
  int idx = 0;
  for (int l = P.d % 2; l <= P.d; l += 2, ++idx) e.set_component(l, std::move(acc[idx]));
  return e;
}

inline double reconstruct(const HarmonicExpansion& e, const SpherePoint& theta) {
  if (e.comps.empty()) return 0.0;
  std::vector<double> row;
  basis_row(e.n, e.max_degree(), theta, row);
  double s = 0.0;
  for (const auto& [l, c] : e.comps) {
    const int base = basis_offset(e.n, l);
    for (std::size_t j = 0; j < c.size(); ++j) s += c[j] * row[base + j];
  }
  return s;
}

// p|_L: harmonic components of degree at most L; the result's nominal degree
// is L while the original parity is retained.
inline HarmonicExpansion truncate(const HarmonicExpansion& e, int L) {
  if (L < 0 || L > e.d) throw std::invalid_argument("truncate: need 0 <= L <= d");
  HarmonicExpansion out(e.n, L, e.parity);
  for (const auto& [l, c] : e.comps)
    if (l <= L) out.comps[l] = c;
  return out;
}

// Complement of the truncation: components of degree > L, at the original
// nominal degree.
inline HarmonicExpansion truncation_residual(const HarmonicExpansion& e, int L) {
  HarmonicExpansion out(e.n, e.d, e.parity);
  for (const auto& [l, c] : e.comps)
    if (l > L) out.comps[l] = c;
  return out;
}

// Homogeneous representative at the nominal degree: sum_l ||x||^{d-l} H_l.
// A SolidBasis cache (same n, lmax >= max component degree) avoids
// reconstructing the basis polynomials per call.
inline HomogeneousPoly to_homogeneous(const HarmonicExpansion& e, const SolidBasis* cache = nullptr) {
  HomogeneousPoly out(e.n, e.d);
  for (const auto& [l, c] : e.comps) {
    HomogeneousPoly block(e.n, l);
    for (int j = 0; j < int(c.size()); ++j) {
      if (c[j] == 0.0) continue;
      HomogeneousPoly term = cache ? cache->get(l, j) : solid_harmonic(e.n, l, j);
      term *= c[j];
      block += term;
    }
    out += times_norm_power(block, (e.d - l) / 2);
  }
  return out;
}

// Dense trigonometric view of a circle function p(phi) with derivatives;
// used by the n = 1 norm and root machinery.
struct TrigSeries {
  std::vector<double> a, b;  // coefficients of cos(l phi), sin(l phi)

  static TrigSeries from(const HarmonicExpansion& e) {
    if (e.n != 1) throw std::invalid_argument("TrigSeries: n must be 1");
    TrigSeries t;
    const int L = e.comps.empty() ? 0 : e.max_degree();
    t.a.assign(L + 1, 0.0);
    t.b.assign(L + 1, 0.0);
    for (const auto& [l, c] : e.comps) {
      if (l == 0) {
        t.a[0] = c[0] / std::sqrt(kTwoPi);
      } else {
        t.a[l] = c[0] / std::sqrt(kPi);
        t.b[l] = c[1] / std::sqrt(kPi);
      }
    }
    return t;
  }

  static TrigSeries from(const HomogeneousPoly& P) { return from(decompose(P)); }

  void eval(double phi, double* v, double* d1 = nullptr, double* d2 = nullptr) const {
    const int L = int(a.size()) - 1;
    const double c1 = std::cos(phi), s1 = std::sin(phi);
    double cl = 1.0, sl = 0.0;
    double V = a[0], D1 = 0.0, D2 = 0.0;
    for (int l = 1; l <= L; ++l) {
      const double cn = cl * c1 - sl * s1;
      const double sn = sl * c1 + cl * s1;
      cl = cn;
      sl = sn;
      V += a[l] * cl + b[l] * sl;
      D1 += l * (-a[l] * sl + b[l] * cl);
      D2 -= double(l) * l * (a[l] * cl + b[l] * sl);
    }
    if (v) *v = V;
    if (d1) *d1 = D1;
    if (d2) *d2 = D2;
  }

  double value(double phi) const {
    double v;
    eval(phi, &v);
    return v;
  }
};

}  // namespace kostlan

#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

#include "kostlan/common.hpp"
#include "kostlan/multi_index.hpp"

namespace kostlan {

namespace detail {

inline double pow_int(double x, int k) {
  double r = 1.0;
  for (int i = 0; i < k; ++i) r *= x;
  return r;
}

// Horner over the leading variable, recursing into the tail block.
inline double eval_block(const double*& c, int nvars, int deg, const double* x) {
  if (nvars == 1) return *c++ * pow_int(x[0], deg);
  double acc = 0.0;
  for (int a = deg; a >= 0; --a)
    acc = acc * x[0] + eval_block(c, nvars - 1, deg - a, x + 1);
  return acc;
}

}  // namespace detail

// Dense homogeneous polynomial of degree d in n+1 variables, coefficients in
// the lexicographic monomial order of multi_index.hpp.
struct HomogeneousPoly {
  int n = 1;
  int d = 1;
  std::vector<double> coeffs;

  HomogeneousPoly() : coeffs(monomial_count(2, 1), 0.0) {}
  HomogeneousPoly(int n_, int d_)
      : n(n_), d(d_), coeffs(monomial_count(n_ + 1, d_), 0.0) {
    if (n_ < 1 || d_ < 0) throw std::invalid_argument("HomogeneousPoly: bad (n, d)");
  }

  static HomogeneousPoly monomial(int n, int d, const MultiIndex& a, double gamma = 1.0) {
    HomogeneousPoly p(n, d);
    p.at(a) = gamma;
    return p;
  }

  std::size_t size() const { return coeffs.size(); }

  double& at(const MultiIndex& a) {
    if (int(a.size()) != n + 1 || total_degree(a) != d)
      throw std::invalid_argument("HomogeneousPoly::at: multi-index mismatch");
    return coeffs[monomial_rank(a)];
  }
  double at(const MultiIndex& a) const { return const_cast<HomogeneousPoly*>(this)->at(a); }

  double evaluate(const double* x, std::size_t dim) const {
    if (int(dim) != n + 1) throw std::invalid_argument("evaluate: dimension mismatch");
    const double* c = coeffs.data();
    return detail::eval_block(c, n + 1, d, x);
  }
  double evaluate(std::span<const double> x) const { return evaluate(x.data(), x.size()); }
  double evaluate(const std::vector<double>& x) const { return evaluate(x.data(), x.size()); }
  double evaluate(const SpherePoint& p) const { return evaluate(p.x.data(), std::size_t(n) + 1); }

  // d/dx_i, a homogeneous polynomial of degree d-1.
  HomogeneousPoly derivative(int i) const {
    if (i < 0 || i > n) throw std::invalid_argument("derivative: bad variable index");
    HomogeneousPoly q(n, d > 0 ? d - 1 : 0);
    if (d == 0) return q;
    for_each_monomial(n + 1, d, [&](const MultiIndex& a, std::size_t idx) {
      if (a[i] == 0 || coeffs[idx] == 0.0) return;
      MultiIndex b = a;
      b[i] -= 1;
      q.coeffs[monomial_rank(b)] += coeffs[idx] * a[i];
    });
    return q;
  }

  std::vector<double> gradient(const double* x, std::size_t dim) const {
    if (int(dim) != n + 1) throw std::invalid_argument("gradient: dimension mismatch");
    std::vector<double> g(n + 1, 0.0);
    // Direct accumulation; fine for one-shot queries. Hot paths precompute
    // derivative polynomials instead.
    for_each_monomial(n + 1, d, [&](const MultiIndex& a, std::size_t idx) {
      const double gamma = coeffs[idx];
      if (gamma == 0.0) return;
      for (int i = 0; i <= n; ++i) {
        if (a[i] == 0) continue;
        double term = gamma * a[i];
        for (int j = 0; j <= n; ++j)
          term *= detail::pow_int(x[j], j == i ? a[j] - 1 : a[j]);
        g[i] += term;
      }
    });
    return g;
  }

  // Tangential projection of the gradient at a point of S^n.
  std::vector<double> spherical_gradient(const SpherePoint& theta) const {
    std::vector<double> g = gradient(theta.x.data(), std::size_t(n) + 1);
    double radial = 0.0;
    for (int i = 0; i <= n; ++i) radial += g[i] * theta.x[i];
    for (int i = 0; i <= n; ++i) g[i] -= radial * theta.x[i];
    return g;
  }

  // (sum_a gamma_a^2 a!/d!)^{1/2}, log-factorial arithmetic throughout.
  double bw_norm() const {
    const double lfd = log_factorial(d);
    double s = 0.0;
    for_each_monomial(n + 1, d, [&](const MultiIndex& a, std::size_t idx) {
      const double gamma = coeffs[idx];
      if (gamma == 0.0) return;
      double lw = -lfd;
      for (int e : a) lw += log_factorial(e);
      s += gamma * gamma * std::exp(lw);
    });
    return std::sqrt(s);
  }

  HomogeneousPoly& operator+=(const HomogeneousPoly& o) {
    if (o.n != n || o.d != d) throw std::invalid_argument("operator+=: shape mismatch");
    for (std::size_t i = 0; i < coeffs.size(); ++i) coeffs[i] += o.coeffs[i];
    return *this;
  }
  HomogeneousPoly& operator-=(const HomogeneousPoly& o) {
    if (o.n != n || o.d != d) throw std::invalid_argument("operator-=: shape mismatch");
    for (std::size_t i = 0; i < coeffs.size(); ++i) coeffs[i] -= o.coeffs[i];
    return *this;
  }
  HomogeneousPoly& operator*=(double s) {
    for (double& c : coeffs) c *= s;
    return *this;
  }
  friend HomogeneousPoly operator+(HomogeneousPoly a, const HomogeneousPoly& b) { return a += b; }
  friend HomogeneousPoly operator-(HomogeneousPoly a, const HomogeneousPoly& b) { return a -= b; }
  friend HomogeneousPoly operator*(double s, HomogeneousPoly a) { return a *= s; }
};

inline double bw_inner(const HomogeneousPoly& a, const HomogeneousPoly& b) {
  if (a.n != b.n || a.d != b.d) throw std::invalid_argument("bw_inner: shape mismatch");
  const double lfd = log_factorial(a.d);
  double s = 0.0;
  for_each_monomial(a.n + 1, a.d, [&](const MultiIndex& m, std::size_t idx) {
    const double prod = a.coeffs[idx] * b.coeffs[idx];
    if (prod == 0.0) return;
    double lw = -lfd;
    for (int e : m) lw += log_factorial(e);
    s += prod * std::exp(lw);
  });
  return s;
}

inline HomogeneousPoly multiply(const HomogeneousPoly& a, const HomogeneousPoly& b) {
  if (a.n != b.n) throw std::invalid_argument("multiply: dimension mismatch");
  HomogeneousPoly r(a.n, a.d + b.d);
  std::vector<long double> acc(r.size(), 0.0L);
  const auto ea = all_monomials(a.n + 1, a.d);
  const auto eb = all_monomials(b.n + 1, b.d);
  MultiIndex sum(a.n + 1);
  for (std::size_t i = 0; i < ea.size(); ++i) {
    if (a.coeffs[i] == 0.0) continue;
    for (std::size_t j = 0; j < eb.size(); ++j) {
      if (b.coeffs[j] == 0.0) continue;
      for (int v = 0; v <= a.n; ++v) sum[v] = ea[i][v] + eb[j][v];
      acc[monomial_rank(sum)] += (long double)a.coeffs[i] * (long double)b.coeffs[j];
    }
  }
  for (std::size_t i = 0; i < r.size(); ++i) r.coeffs[i] = double(acc[i]);
  return r;
}

// ||x||^{2k} as a polynomial.
inline HomogeneousPoly norm_power(int n, int k) {
  HomogeneousPoly r(n, 2 * k);
  for_each_monomial(n + 1, k, [&](const MultiIndex& a, std::size_t) {
    double lc = log_factorial(k);
    MultiIndex b(n + 1);
    for (int i = 0; i <= n; ++i) {
      lc -= log_factorial(a[i]);
      b[i] = 2 * a[i];
    }
    r.coeffs[monomial_rank(b)] = std::round(std::exp(lc));
  });
  return r;
}

// P * ||x||^{2k}; embeds a degree-d polynomial at degree d + 2k.
inline HomogeneousPoly times_norm_power(const HomogeneousPoly& p, int k) {
  if (k == 0) return p;
  return multiply(p, norm_power(p.n, k));
}

// P(R x) for a linear change of variables R (rows index the substituted
// coordinates).
inline HomogeneousPoly compose_linear(const HomogeneousPoly& p,
                                      const std::vector<std::vector<double>>& R) {
  const int m = p.n + 1;
  if (int(R.size()) != m) throw std::invalid_argument("compose_linear: bad matrix");
  std::vector<HomogeneousPoly> rows;
  for (int i = 0; i < m; ++i) {
    HomogeneousPoly li(p.n, 1);
    for (int j = 0; j < m; ++j) {
      MultiIndex e(m, 0);
      e[j] = 1;
      li.at(e) = R[i][j];
    }
    rows.push_back(li);
  }
  HomogeneousPoly out(p.n, p.d);
  for_each_monomial(m, p.d, [&](const MultiIndex& a, std::size_t idx) {
    const double gamma = p.coeffs[idx];
    if (gamma == 0.0) return;
    HomogeneousPoly term(p.n, 0);
    term.coeffs[0] = gamma;
    for (int i = 0; i < m; ++i)
      for (int rep = 0; rep < a[i]; ++rep) term = multiply(term, rows[i]);
    out += term;
  });
  return out;
}

}  // namespace kostlan

#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>
#include <vector>

#include "kostlan/expansion.hpp"
#include "kostlan/poly.hpp"

namespace kostlan {

// Outcome of a grid-seeded extremum search on the sphere.
struct ExtremumReport {
  double value = 0.0;
  SpherePoint arg;
  int grid_resolution = 0;
  int refinement_iterations = 0;
  bool certified = true;
  bool singular = false;
};

namespace detail {

inline int default_grid(int d) { return std::max(8 * std::max(d, 1), 64); }

// Golden-section minimum of f on [a, b]; returns the value, writes the
// argument and accumulates iteration count.
template <class F>
double golden_min(F&& f, double a, double b, double* xmin, int* iters) {
  const double g = 0.5 * (std::sqrt(5.0) - 1.0);
  double c = b - g * (b - a), d = a + g * (b - a);
  double fc = f(c), fd = f(d);
  while (b - a > 1e-13) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - g * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + g * (b - a);
      fd = f(d);
    }
    ++*iters;
  }
  *xmin = 0.5 * (a + b);
  return f(*xmin);
}

// Global minimum of a smooth function on the circle: dense grid, then
// golden-section refinement of each local-minimum bracket. The refined value
// never exceeds the best grid value.
template <class F>
ExtremumReport minimize_circle(F&& f, int m) {
  std::vector<double> v(m);
  for (int i = 0; i < m; ++i) v[i] = f(kTwoPi * i / m);
  ExtremumReport r;
  r.grid_resolution = m;
  double best = std::numeric_limits<double>::infinity();
  double bestphi = 0.0;
  const double h = kTwoPi / m;
  for (int i = 0; i < m; ++i) {
    const double vp = v[(i + m - 1) % m], vn = v[(i + 1) % m];
    if (v[i] > vp || v[i] > vn) continue;
    const double phi0 = h * i;
    double x;
    const double fx = golden_min(f, phi0 - h, phi0 + h, &x, &r.refinement_iterations);
    if (fx < best) {
      best = fx;
      bestphi = x;
    }
    if (v[i] < best) {  // guard against rounding in the bracket endpoints
      best = v[i];
      bestphi = phi0;
    }
  }
  r.value = best;
  r.arg = SpherePoint::from_angle(std::fmod(bestphi + kTwoPi, kTwoPi));
  return r;
}

// Global minimum on S^2: latitude-longitude grid seeds every 4-neighborhood
// local minimum, each refined by projected gradient descent with Armijo
// backtracking. `value` maps a point to the objective; `value_grad`
// additionally writes the ambient gradient (projected tangentially here).
template <class V, class VG>
ExtremumReport minimize_sphere(V&& value, VG&& value_grad, int res) {
  const int m = res;
  const int k = res / 2 + 1;
  std::vector<std::vector<double>> grid(k, std::vector<double>(m));
  std::vector<std::vector<SpherePoint>> pts(k, std::vector<SpherePoint>(m));
  double fscale = 1.0;
  for (int i = 0; i < k; ++i) {
    const double colat = kPi * i / (k - 1);
    for (int j = 0; j < m; ++j) {
      pts[i][j] = SpherePoint::from_spherical(colat, kTwoPi * j / m);
      grid[i][j] = value(pts[i][j]);
      fscale = std::max(fscale, std::abs(grid[i][j]));
    }
  }
  struct Seed {
    double v;
    SpherePoint p;
  };
  std::vector<Seed> seeds;
  seeds.push_back({grid[0][0], pts[0][0]});
  seeds.push_back({grid[k - 1][0], pts[k - 1][0]});
  for (int i = 1; i + 1 < k; ++i) {
    for (int j = 0; j < m; ++j) {
      const double c = grid[i][j];
      if (c > grid[i - 1][j] || c > grid[i + 1][j]) continue;
      if (c > grid[i][(j + 1) % m] || c > grid[i][(j + m - 1) % m]) continue;
      seeds.push_back({c, pts[i][j]});
    }
  }
  std::sort(seeds.begin(), seeds.end(), [](const Seed& a, const Seed& b) { return a.v < b.v; });
  if (seeds.size() > 48) seeds.resize(48);

  ExtremumReport r;
  r.grid_resolution = res;
  r.value = seeds.front().v;
  r.arg = seeds.front().p;
  r.certified = false;
  const double gtol = 1e-10 * fscale;
  std::array<double, 4> g{};
  for (const Seed& s : seeds) {
    SpherePoint x = s.p;
    double f = s.v;
    bool converged = false;
    std::array<double, 3> xprev{}, gprev{};
    bool have_prev = false;
    for (int it = 0; it < 500; ++it) {
      ++r.refinement_iterations;
      value_grad(x, g.data());
      double radial = 0.0;
      for (int u = 0; u < 3; ++u) radial += g[u] * x.x[u];
      double gn2 = 0.0;
      for (int u = 0; u < 3; ++u) {
        g[u] -= radial * x.x[u];
        gn2 += g[u] * g[u];
      }
      if (std::sqrt(gn2) < gtol) {
        converged = true;
        break;
      }
      // Barzilai-Borwein step with a scale-invariant fallback (every factor
      // here scales consistently when the objective is multiplied by a
      // constant, so minima of p and lambda*p refine identically).
      double t = fscale / gn2;
      if (have_prev) {
        double ss = 0.0, sy = 0.0;
        for (int u = 0; u < 3; ++u) {
          const double sv = x.x[u] - xprev[u];
          const double yv = g[u] - gprev[u];
          ss += sv * sv;
          sy += sv * yv;
        }
        if (sy > 0.0 && ss > 0.0) t = ss / sy;
      }
      const double tmin = 1e-16 * fscale / gn2;
      bool moved = false;
      while (t > tmin) {
        std::vector<double> y(3);
        double nrm = 0.0;
        for (int u = 0; u < 3; ++u) {
          y[u] = x.x[u] - t * g[u];
          nrm += y[u] * y[u];
        }
        nrm = std::sqrt(nrm);
        for (int u = 0; u < 3; ++u) y[u] /= nrm;
        SpherePoint cand = SpherePoint::from_coords(y);
        const double fc = value(cand);
        if (fc <= f - 1e-4 * t * gn2) {
          for (int u = 0; u < 3; ++u) {
            xprev[u] = x.x[u];
            gprev[u] = g[u];
          }
          have_prev = true;
          x = cand;
          f = fc;
          moved = true;
          break;
        }
        t *= 0.5;
      }
      if (!moved) {
        converged = true;  // no descent direction resolvable at this scale
        break;
      }
    }
    if (f < r.value) {
      r.value = f;
      r.arg = x;
      r.certified = converged;
    } else if (f == r.value && converged) {
      r.certified = true;
    }
  }
  if (r.value == seeds.front().v) r.certified = true;  // grid value retained
  return r;
}

// --- objective closures -------------------------------------------------

struct PolyObjectives {
  const HomogeneousPoly* P;
  std::vector<HomogeneousPoly> grad;   // first derivatives
  std::vector<HomogeneousPoly> hess;   // upper triangle (i <= j), row major
  int d;

  explicit PolyObjectives(const HomogeneousPoly& p) : P(&p), d(p.d) {
    for (int i = 0; i <= p.n; ++i) grad.push_back(p.derivative(i));
    if (d >= 2)
      for (int i = 0; i <= p.n; ++i)
        for (int j = i; j <= p.n; ++j) hess.push_back(grad[i].derivative(j));
  }

  void eval(const SpherePoint& t, double* pv, double* gv) const {
    *pv = P->evaluate(t);
    for (std::size_t i = 0; i < grad.size(); ++i) gv[i] = grad[i].evaluate(t);
  }

  void hess_times(const SpherePoint& t, const double* v, double* out) const {
    const int m = P->n + 1;
    for (int i = 0; i < m; ++i) out[i] = 0.0;
    if (d < 2) return;
    int idx = 0;
    for (int i = 0; i < m; ++i)
      for (int j = i; j < m; ++j, ++idx) {
        const double h = hess[idx].evaluate(t);
        out[i] += h * v[j];
        if (j != i) out[j] += h * v[i];
      }
  }

  // |p|^2 on the sphere.
  double value_p2(const SpherePoint& t) const {
    const double p = P->evaluate(t);
    return p * p;
  }
  void grad_p2(const SpherePoint& t, double* out) const {
    double p, g[4];
    eval(t, &p, g);
    for (int i = 0; i <= P->n; ++i) out[i] = 2.0 * p * g[i];
  }

  // |grad_S p|^2 = |grad P|^2 - d^2 p^2 on the sphere (Euler identity).
  double value_sg2(const SpherePoint& t) const {
    double p, g[4];
    eval(t, &p, g);
    double s = 0.0;
    for (int i = 0; i <= P->n; ++i) s += g[i] * g[i];
    return std::max(0.0, s - double(d) * d * p * p);
  }
  void grad_sg2(const SpherePoint& t, double* out) const {
    double p, g[4], hg[4];
    eval(t, &p, g);
    hess_times(t, g, hg);
    for (int i = 0; i <= P->n; ++i) out[i] = 2.0 * hg[i] - 2.0 * double(d) * d * p * g[i];
  }

  // Raffalli objective |p|^2 + |grad_S p|^2 / d = |grad P|^2/d + (1-d) p^2.
  double value_delta(const SpherePoint& t) const {
    double p, g[4];
    eval(t, &p, g);
    double s = 0.0;
    for (int i = 0; i <= P->n; ++i) s += g[i] * g[i];
    return s / d + (1.0 - d) * p * p;
  }
  void grad_delta(const SpherePoint& t, double* out) const {
    double p, g[4], hg[4];
    eval(t, &p, g);
    hess_times(t, g, hg);
    for (int i = 0; i <= P->n; ++i) out[i] = 2.0 * hg[i] / d + 2.0 * (1.0 - d) * p * g[i];
  }
};

}  // namespace detail

// max |p| + max |grad_S p| over the sphere.
inline ExtremumReport c1_norm(const HomogeneousPoly& P, int grid = 0) {
  const int res = grid > 0 ? grid : detail::default_grid(P.d);
  if (P.d == 0) {
    ExtremumReport r;
    r.value = std::abs(P.coeffs[0]);
    r.arg = P.n == 1 ? SpherePoint::from_angle(0.0) : SpherePoint::from_spherical(0.0, 0.0);
    r.grid_resolution = res;
    return r;
  }
  if (P.n == 1) {
    auto t = TrigSeries::from(P);
    auto neg_p2 = [&](double phi) {
      const double v = t.value(phi);
      return -v * v;
    };
    auto neg_dp2 = [&](double phi) {
      double v, d1;
      t.eval(phi, &v, &d1);
      return -d1 * d1;
    };
    auto a = detail::minimize_circle(neg_p2, res);
    auto b = detail::minimize_circle(neg_dp2, res);
    ExtremumReport r;
    r.value = std::sqrt(std::max(0.0, -a.value)) + std::sqrt(std::max(0.0, -b.value));
    r.arg = a.arg;
    r.grid_resolution = res;
    r.refinement_iterations = a.refinement_iterations + b.refinement_iterations;
    r.certified = a.certified && b.certified;
    return r;
  }
  if (P.n != 2) throw std::invalid_argument("c1_norm: only n in {1,2} supported");
  detail::PolyObjectives obj(P);
  auto a = detail::minimize_sphere([&](const SpherePoint& t) { return -obj.value_p2(t); },
                                   [&](const SpherePoint& t, double* g) {
                                     obj.grad_p2(t, g);
                                     for (int i = 0; i < 3; ++i) g[i] = -g[i];
                                   },
                                   res);
  auto b = detail::minimize_sphere([&](const SpherePoint& t) { return -obj.value_sg2(t); },
                                   [&](const SpherePoint& t, double* g) {
                                     obj.grad_sg2(t, g);
                                     for (int i = 0; i < 3; ++i) g[i] = -g[i];
                                   },
                                   res);
  ExtremumReport r;
  r.value = std::sqrt(std::max(0.0, -a.value)) + std::sqrt(std::max(0.0, -b.value));
  r.arg = a.arg;
  r.grid_resolution = res;
  r.refinement_iterations = a.refinement_iterations + b.refinement_iterations;
  r.certified = a.certified && b.certified;
  return r;
}

// Distance to the discriminant: min over the sphere of
// (|p|^2 + |grad_S p|^2 / d)^{1/2}. Values below 1e-9 * ||p||_BW are reported
// as 0 with the singular flag set.
inline ExtremumReport delta(const HomogeneousPoly& P, int grid = 0) {
  if (P.d < 1) throw std::invalid_argument("delta: degree must be >= 1");
  if (P.n != 1 && P.n != 2) throw std::invalid_argument("delta: only n in {1,2} supported");
  const int res = grid > 0 ? grid : detail::default_grid(P.d);
  const double bw = P.bw_norm();
  ExtremumReport r;
  if (bw == 0.0) {
    r.value = 0.0;
    r.singular = true;
    r.grid_resolution = res;
    r.arg = P.n == 1 ? SpherePoint::from_angle(0.0) : SpherePoint::from_spherical(0.0, 0.0);
    return r;
  }
  if (P.n == 1) {
    auto t = TrigSeries::from(P);
    const int d = P.d;
    auto obj = [&](double phi) {
      double v, d1;
      t.eval(phi, &v, &d1);
      return v * v + d1 * d1 / d;
    };
    r = detail::minimize_circle(obj, res);
  } else {
    detail::PolyObjectives obj(P);
    r = detail::minimize_sphere([&](const SpherePoint& t) { return obj.value_delta(t); },
                                [&](const SpherePoint& t, double* g) { obj.grad_delta(t, g); },
                                res);
  }
  r.value = std::sqrt(std::max(0.0, r.value));
  if (r.value < 1e-9 * bw) {
    r.value = 0.0;
    r.singular = true;
  }
  return r;
}

// Expansion overloads: n = 1 works on the trigonometric series directly;
// n = 2 goes through the homogeneous representative at the nominal degree.
inline ExtremumReport c1_norm(const HarmonicExpansion& e, int grid = 0) {
  if (e.n == 1) {
    const int res = grid > 0 ? grid : detail::default_grid(e.d);
    auto t = TrigSeries::from(e);
    auto neg_p2 = [&](double phi) {
      const double v = t.value(phi);
      return -v * v;
    };
    auto neg_dp2 = [&](double phi) {
      double v, d1;
      t.eval(phi, &v, &d1);
      return -d1 * d1;
    };
    auto a = detail::minimize_circle(neg_p2, res);
    auto b = detail::minimize_circle(neg_dp2, res);
    ExtremumReport r;
    r.value = std::sqrt(std::max(0.0, -a.value)) + std::sqrt(std::max(0.0, -b.value));
    r.arg = a.arg;
    r.grid_resolution = res;
    r.refinement_iterations = a.refinement_iterations + b.refinement_iterations;
    r.certified = a.certified && b.certified;
    return r;
  }
  return c1_norm(to_homogeneous(e), grid);
}

inline ExtremumReport delta(const HarmonicExpansion& e, int grid = 0) {
  if (e.d < 1) throw std::invalid_argument("delta: degree must be >= 1");
  if (e.n == 1) {
    const int res = grid > 0 ? grid : detail::default_grid(e.d);
    const double bw = e.bw_norm();
    if (bw == 0.0) {
      ExtremumReport r;
      r.singular = true;
      r.grid_resolution = res;
      r.arg = SpherePoint::from_angle(0.0);
      return r;
    }
    auto t = TrigSeries::from(e);
    const int d = e.d;
    auto obj = [&](double phi) {
      double v, d1;
      t.eval(phi, &v, &d1);
      return v * v + d1 * d1 / d;
    };
    ExtremumReport r = detail::minimize_circle(obj, res);
    r.value = std::sqrt(std::max(0.0, r.value));
    if (r.value < 1e-9 * bw) {
      r.value = 0.0;
      r.singular = true;
    }
    return r;
  }
  return delta(to_homogeneous(e), grid);
}

}  // namespace kostlan

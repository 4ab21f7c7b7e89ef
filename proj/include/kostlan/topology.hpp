#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <unordered_map>
#include <vector>

#include "kostlan/expansion.hpp"
#include "kostlan/norms.hpp"
#include "kostlan/poly.hpp"

namespace kostlan {

// Discrete invariants of the zero set: root data on the circle, component
// count / nesting forest / Betti total on the sphere.
struct TopologySignature {
  int n = 1;
  // n = 1
  int root_count = 0;
  std::vector<double> roots;  // sorted angles in [0, 2pi)
  // n = 2
  int component_count = 0;
  int nest_depth = 0;
  int betti_total = 0;
  std::string forest;  // canonical parenthesization of the nesting forest
};

inline bool topology_equal(const TopologySignature& a, const TopologySignature& b) {
  if (a.n != b.n) return false;
  if (a.n == 1) return a.root_count == b.root_count;
  return a.component_count == b.component_count && a.forest == b.forest;
}

// Containment forest of the curve components with respect to a basepoint.
struct NestingForest {
  std::vector<int> parent;  // -1 for roots
  int depth = 0;            // longest chain, counted in vertices
  SpherePoint y_inf;
  std::string canonical;
};

using Vec3 = std::array<double, 3>;
using Polyline = std::vector<Vec3>;  // closed: last point connects to first

namespace detail {

// --- circle roots ---------------------------------------------------------

inline std::vector<double> scan_roots(const TrigSeries& t, int m, double scale) {
  std::vector<double> v(m);
  for (int i = 0; i < m; ++i) {
    double d1;
    t.eval(kTwoPi * i / m, &v[i], &d1);
    if (std::abs(v[i]) < 1e-9 * scale && std::abs(d1) < 1e-9 * scale)
      throw degenerate_input_error("roots_on_circle: near-tangency detected");
  }
  std::vector<double> roots;
  for (int i = 0; i < m; ++i) {
    double a = v[i], b = v[(i + 1) % m];
    if (!(a < 0.0) == !(b < 0.0)) continue;
    double lo = kTwoPi * i / m, hi = kTwoPi * (i + 1) / m;
    double flo = a;
    while (hi - lo > 1e-12) {
      const double mid = 0.5 * (lo + hi);
      const double fm = t.value(mid);
      if (!(flo < 0.0) == !(fm < 0.0)) {
        lo = mid;
        flo = fm;
      } else {
        hi = mid;
      }
    }
    roots.push_back(std::fmod(0.5 * (lo + hi), kTwoPi));
  }
  std::sort(roots.begin(), roots.end());
  return roots;
}

inline TopologySignature roots_impl(const TrigSeries& t, int d, double scale) {
  if (scale == 0.0) throw degenerate_input_error("roots_on_circle: zero polynomial");
  int m = std::max(16 * std::max(d, 1), 1024);
  auto roots = scan_roots(t, m, scale);
  for (int attempt = 0; attempt < 8; ++attempt) {
    auto finer = scan_roots(t, 2 * m, scale);
    if (finer.size() == roots.size()) {
      roots = std::move(finer);
      TopologySignature s;
      s.n = 1;
      s.root_count = int(roots.size());
      s.roots = std::move(roots);
      s.betti_total = s.root_count;
      return s;
    }
    m *= 2;
    roots = std::move(finer);
  }
  throw resolution_error("roots_on_circle: root count did not stabilize");
}

// --- icosphere mesh --------------------------------------------------------

struct Mesh {
  std::vector<Vec3> verts;
  std::vector<std::array<int, 3>> tris;
};

inline Vec3 v3normalize(const Vec3& a) {
  const double r = std::sqrt(a[0] * a[0] + a[1] * a[1] + a[2] * a[2]);
  return {a[0] / r, a[1] / r, a[2] / r};
}
inline Vec3 v3cross(const Vec3& a, const Vec3& b) {
  return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}
inline double v3dot(const Vec3& a, const Vec3& b) {
  return a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
}

inline std::shared_ptr<const Mesh> icosphere(int level) {
  static std::mutex mu;
  static std::map<int, std::shared_ptr<const Mesh>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(level);
  if (it != cache.end()) return it->second;

  auto mesh = std::make_shared<Mesh>();
  const double phi = 0.5 * (1.0 + std::sqrt(5.0));
  const std::vector<Vec3> base = {{-1, phi, 0}, {1, phi, 0},   {-1, -phi, 0}, {1, -phi, 0},
                                  {0, -1, phi}, {0, 1, phi},   {0, -1, -phi}, {0, 1, -phi},
                                  {phi, 0, -1}, {phi, 0, 1},   {-phi, 0, -1}, {-phi, 0, 1}};
  for (const auto& v : base) mesh->verts.push_back(v3normalize(v));
  mesh->tris = {{0, 11, 5}, {0, 5, 1},  {0, 1, 7},   {0, 7, 10}, {0, 10, 11},
                {1, 5, 9},  {5, 11, 4}, {11, 10, 2}, {10, 7, 6}, {7, 1, 8},
                {3, 9, 4},  {3, 4, 2},  {3, 2, 6},   {3, 6, 8},  {3, 8, 9},
                {4, 9, 5},  {2, 4, 11}, {6, 2, 10},  {8, 6, 7},  {9, 8, 1}};
  for (int step = 0; step < level; ++step) {
    std::unordered_map<std::uint64_t, int> midpoint;
    auto mid = [&](int a, int b) {
      const std::uint64_t key =
          (std::uint64_t(std::min(a, b)) << 32) | std::uint64_t(std::max(a, b));
      auto f = midpoint.find(key);
      if (f != midpoint.end()) return f->second;
      const Vec3& va = mesh->verts[a];
      const Vec3& vb = mesh->verts[b];
      mesh->verts.push_back(
          v3normalize({va[0] + vb[0], va[1] + vb[1], va[2] + vb[2]}));
      const int id = int(mesh->verts.size()) - 1;
      midpoint.emplace(key, id);
      return id;
    };
    std::vector<std::array<int, 3>> next;
    next.reserve(mesh->tris.size() * 4);
    for (const auto& t : mesh->tris) {
      const int ab = mid(t[0], t[1]), bc = mid(t[1], t[2]), ca = mid(t[2], t[0]);
      next.push_back({t[0], ab, ca});
      next.push_back({t[1], bc, ab});
      next.push_back({t[2], ca, bc});
      next.push_back({ab, bc, ca});
    }
    mesh->tris = std::move(next);
  }
  cache.emplace(level, mesh);
  return mesh;
}

// Marching triangles at one mesh level; loops are traced through the shared
// crossing edges (each crossing edge borders exactly two triangles).
template <class F>
std::vector<Polyline> march(const F& f, const Mesh& mesh) {
  const std::size_t nv = mesh.verts.size();
  std::vector<double> val(nv);
  for (std::size_t i = 0; i < nv; ++i)
    val[i] = f(SpherePoint::from_coords({mesh.verts[i][0], mesh.verts[i][1], mesh.verts[i][2]}));
  auto neg = [&](std::size_t i) { return val[i] < 0.0; };

  std::unordered_map<std::uint64_t, int> edge_id;
  std::vector<Vec3> cross_pt;
  std::vector<std::array<int, 2>> links;
  auto crossing = [&](int a, int b) {
    const std::uint64_t key =
        (std::uint64_t(std::min(a, b)) << 32) | std::uint64_t(std::max(a, b));
    auto it = edge_id.find(key);
    if (it != edge_id.end()) return it->second;
    Vec3 lo = mesh.verts[a], hi = mesh.verts[b];
    double flo = val[a];
    for (int iter = 0; iter < 40; ++iter) {
      Vec3 m = v3normalize({lo[0] + hi[0], lo[1] + hi[1], lo[2] + hi[2]});
      const double fm = f(SpherePoint::from_coords({m[0], m[1], m[2]}));
      if ((fm < 0.0) == (flo < 0.0)) {
        lo = m;
        flo = fm;
      } else {
        hi = m;
      }
      const double gap = std::abs(lo[0] - hi[0]) + std::abs(lo[1] - hi[1]) +
                         std::abs(lo[2] - hi[2]);
      if (gap < 1e-10) break;
    }
    cross_pt.push_back(v3normalize({lo[0] + hi[0], lo[1] + hi[1], lo[2] + hi[2]}));
    links.push_back({-1, -1});
    const int id = int(cross_pt.size()) - 1;
    edge_id.emplace(key, id);
    return id;
  };

  for (const auto& t : mesh.tris) {
    int ids[3], k = 0;
    for (int e = 0; e < 3; ++e) {
      const int a = t[e], b = t[(e + 1) % 3];
      if (neg(a) != neg(b)) ids[k++] = crossing(a, b);
    }
    if (k == 0) continue;
    // Binary vertex signs make one crossing impossible; k is always 2 here.
    for (int which : {0, 1}) {
      auto& slot = links[ids[which]];
      (slot[0] < 0 ? slot[0] : slot[1]) = ids[1 - which];
    }
  }

  std::vector<Polyline> loops;
  std::vector<char> used(cross_pt.size(), 0);
  for (std::size_t s = 0; s < cross_pt.size(); ++s) {
    if (used[s]) continue;
    Polyline loop;
    int prev = -1, cur = int(s);
    while (!used[cur]) {
      used[cur] = 1;
      loop.push_back(cross_pt[cur]);
      const int nxt = links[cur][0] == prev ? links[cur][1] : links[cur][0];
      prev = cur;
      cur = nxt;
    }
    loops.push_back(std::move(loop));
  }
  return loops;
}

// Counts transversal crossings of the geodesic arc (a, b) with a closed
// polyline; throws basepoint_error on any near-tangency so the caller can
// perturb the basepoint and retry.
inline int arc_crossings(const Vec3& a, const Vec3& b, const Polyline& curve) {
  const Vec3 n1raw = v3cross(a, b);
  const double n1len = std::sqrt(v3dot(n1raw, n1raw));
  if (n1len < 1e-12) throw basepoint_error("nesting: degenerate geodesic");
  const Vec3 n1 = {n1raw[0] / n1len, n1raw[1] / n1len, n1raw[2] / n1len};
  // A vertex on the great-circle plane is only a problem when it sits near
  // the arc itself; antipodally symmetric zero sets put exact plane contacts
  // on the far side for every choice of basepoint.
  auto near_arc = [&](const Vec3& v) {
    const double ta = v3dot(n1, v3cross(a, v));
    const double tb = v3dot(n1, v3cross(v, b));
    return ta > -1e-9 && tb > -1e-9;
  };
  int count = 0;
  const std::size_t m = curve.size();
  for (std::size_t i = 0; i < m; ++i) {
    const Vec3& c = curve[i];
    const Vec3& d = curve[(i + 1) % m];
    const double sc = v3dot(n1, c), sd = v3dot(n1, d);
    if (std::abs(sc) < 1e-12 || std::abs(sd) < 1e-12) {
      if ((std::abs(sc) < 1e-12 && near_arc(c)) || (std::abs(sd) < 1e-12 && near_arc(d)))
        throw basepoint_error("nesting: curve vertex on the test geodesic");
      continue;  // plane contact away from the arc contributes no crossing
    }
    if ((sc < 0.0) == (sd < 0.0)) continue;
    // Intersection of the two great circles, signed toward the segment.
    const Vec3 n2 = v3cross(c, d);
    Vec3 u = v3cross(n1, n2);
    const double ulen = std::sqrt(v3dot(u, u));
    if (ulen < 1e-14) throw basepoint_error("nesting: tangent segment");
    for (auto& x : u) x /= ulen;
    if (v3dot(u, {c[0] + d[0], c[1] + d[1], c[2] + d[2]}) < 0.0)
      for (auto& x : u) x = -x;
    // Is u inside the arc (a, b)?
    const double ta = v3dot(n1, v3cross(a, u));
    const double tb = v3dot(n1, v3cross(u, b));
    if (std::abs(ta) < 1e-12 || std::abs(tb) < 1e-12)
      throw basepoint_error("nesting: crossing at the geodesic endpoint");
    if (ta > 0.0 && tb > 0.0) ++count;
  }
  return count;
}

inline std::string canonical_forest(const std::vector<int>& parent) {
  const int k = int(parent.size());
  std::vector<std::vector<int>> children(k);
  std::vector<int> roots;
  for (int i = 0; i < k; ++i) {
    if (parent[i] < 0)
      roots.push_back(i);
    else
      children[parent[i]].push_back(i);
  }
  std::function<std::string(int)> canon = [&](int v) {
    std::vector<std::string> sub;
    for (int c : children[v]) sub.push_back(canon(c));
    std::sort(sub.begin(), sub.end());
    std::string s = "(";
    for (const auto& x : sub) s += x;
    return s + ")";
  };
  std::vector<std::string> top;
  for (int r : roots) top.push_back(canon(r));
  std::sort(top.begin(), top.end());
  std::string s;
  for (const auto& x : top) s += x;
  return s;
}

}  // namespace detail

// All simple roots of p on the circle: sign-change scan with grid doubling
// until the count stabilizes, then bisection to 1e-12.
inline TopologySignature roots_on_circle(const HomogeneousPoly& P, double delta_hint = -1.0) {
  if (P.n != 1) throw std::invalid_argument("roots_on_circle: n must be 1");
  (void)delta_hint;  // stabilization by refinement subsumes the hint
  return detail::roots_impl(TrigSeries::from(P), P.d, P.bw_norm());
}
inline TopologySignature roots_on_circle(const HarmonicExpansion& e, double delta_hint = -1.0) {
  if (e.n != 1) throw std::invalid_argument("roots_on_circle: n must be 1");
  (void)delta_hint;
  return detail::roots_impl(TrigSeries::from(e), std::max(e.d, 1), e.bw_norm());
}

// Zero set of p on S^2 as closed polylines via marching triangles on a
// subdivided icosahedron. The component count must agree across two
// consecutive subdivision levels; the finer extraction is returned.
inline std::vector<Polyline> extract_curves(const HomogeneousPoly& P, int level = 0) {
  if (P.n != 2) throw std::invalid_argument("extract_curves: n must be 2");
  if (delta(P).singular)
    throw degenerate_input_error("extract_curves: p is singular within tolerance");
  if (level <= 0) level = int(std::ceil(std::log2(8.0 * std::max(P.d, 2))));
  auto f = [&](const SpherePoint& t) { return P.evaluate(t); };
  auto coarse = detail::march(f, *detail::icosphere(level));
  for (int attempt = 0; attempt < 2; ++attempt) {
    auto fine = detail::march(f, *detail::icosphere(level + 1));
    if (fine.size() == coarse.size()) return fine;
    ++level;
    coarse = std::move(fine);
  }
  throw resolution_error("extract_curves: component count did not stabilize");
}

// Containment forest with respect to y_inf: a component lies below another
// when it is inside the side of that component not containing y_inf, decided
// by geodesic crossing parity. Throws basepoint_error on a non-generic
// basepoint (callers perturb and retry).
inline NestingForest nesting_forest(const std::vector<Polyline>& curves, const SpherePoint& y_inf) {
  const int k = int(curves.size());
  NestingForest forest;
  forest.y_inf = y_inf;
  forest.parent.assign(k, -1);
  if (k == 0) {
    forest.depth = 0;
    forest.canonical = "";
    return forest;
  }
  const Vec3 y = {y_inf.x[0], y_inf.x[1], y_inf.x[2]};
  for (const auto& c : curves)
    for (const auto& p : c)
      if (detail::v3dot(p, y) > 1.0 - 1e-10)
        throw basepoint_error("nesting: basepoint on a curve");

  // inside[b][a]: component b lies in the bounded side of component a.
  std::vector<std::vector<char>> inside(k, std::vector<char>(k, 0));
  std::vector<int> depth_of(k, 0);
  for (int b = 0; b < k; ++b) {
    const Vec3& xb = curves[b][0];
    for (int a = 0; a < k; ++a) {
      if (a == b) continue;
      inside[b][a] = detail::arc_crossings(xb, y, curves[a]) % 2;
    }
    for (int a = 0; a < k; ++a) depth_of[b] += inside[b][a];
  }
  for (int b = 0; b < k; ++b) {
    int best = -1;
    for (int a = 0; a < k; ++a)
      if (inside[b][a] && (best < 0 || depth_of[a] > depth_of[best])) best = a;
    forest.parent[b] = best;
  }
  forest.depth = 1 + *std::max_element(depth_of.begin(), depth_of.end());
  forest.canonical = detail::canonical_forest(forest.parent);
  return forest;
}

// Full S^2 signature: curves plus nesting data. Refuses singular inputs;
// the basepoint defaults to the north pole with deterministic perturbation
// retries on basepoint errors.
inline TopologySignature signature_s2(const HomogeneousPoly& P, int level = 0) {
  if (P.n != 2) throw std::invalid_argument("signature_s2: n must be 2");
  auto curves = extract_curves(P, level);
  TopologySignature s;
  s.n = 2;
  s.component_count = int(curves.size());
  s.betti_total = 2 * s.component_count;
  for (std::uint64_t attempt = 0;; ++attempt) {
    if (attempt > 64) throw basepoint_error("signature_s2: no generic basepoint found");
    std::vector<double> y = {0.0, 0.0, 1.0};
    if (attempt > 0) {
      const double r = 0.03 * double(attempt);
      y = {r * std::cos(2.39996 * double(attempt)), r * std::sin(2.39996 * double(attempt)), 1.0};
      const double nn = std::sqrt(y[0] * y[0] + y[1] * y[1] + 1.0);
      for (auto& v : y) v /= nn;
    }
    try {
      auto f = nesting_forest(curves, SpherePoint::from_coords(y));
      s.nest_depth = f.depth;
      s.forest = f.canonical;
      break;
    } catch (const basepoint_error&) {
      continue;
    }
  }
  return s;
}

// Unified signature entry points.
inline TopologySignature signature(const HomogeneousPoly& P) {
  if (P.n == 1) return roots_on_circle(P);
  return signature_s2(P);
}
inline TopologySignature signature(const HarmonicExpansion& e) {
  if (e.n == 1) return roots_on_circle(e);
  return signature_s2(to_homogeneous(e));
}

}  // namespace kostlan

#pragma once

#include <cstddef>
#include <functional>
#include <numeric>
#include <vector>

#include "kostlan/common.hpp"

namespace kostlan {

// Exponent vector (a_0, ..., a_n) of a monomial x_0^{a_0} ... x_n^{a_n}.
using MultiIndex = std::vector<int>;

inline int total_degree(const MultiIndex& a) {
  return std::accumulate(a.begin(), a.end(), 0);
}

// Number of monomials of total degree d in `nvars` variables.
inline std::size_t monomial_count(int nvars, int d) {
  return binomial_size(d + nvars - 1, nvars - 1);
}

// Monomials are stored in lexicographic order with the leading exponent
// descending: (d,0,...,0) first, (0,...,0,d) last.
inline std::size_t monomial_rank(const MultiIndex& a) {
  const int m = int(a.size());
  int deg = total_degree(a);
  std::size_t rank = 0;
  for (int i = 0; i + 1 < m; ++i) {
    for (int v = deg; v > a[i]; --v) rank += monomial_count(m - 1 - i, deg - v);
    deg -= a[i];
  }
  return rank;
}

// Visits all multi-indices with |a| = d in storage order.
inline void for_each_monomial(int nvars, int d,
                              const std::function<void(const MultiIndex&, std::size_t)>& fn) {
  MultiIndex a(nvars, 0);
  std::size_t idx = 0;
  std::function<void(int, int)> rec = [&](int pos, int rem) {
    if (pos == nvars - 1) {
      a[pos] = rem;
      fn(a, idx++);
      return;
    }
    for (int v = rem; v >= 0; --v) {
      a[pos] = v;
      rec(pos + 1, rem - v);
    }
  };
  rec(0, d);
}

inline std::vector<MultiIndex> all_monomials(int nvars, int d) {
  std::vector<MultiIndex> out;
  out.reserve(monomial_count(nvars, d));
  for_each_monomial(nvars, d, [&](const MultiIndex& a, std::size_t) { out.push_back(a); });
  return out;
}

}  // namespace kostlan

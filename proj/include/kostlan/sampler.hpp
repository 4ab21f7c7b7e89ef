#pragma once

#include <cmath>
#include <cstdint>

#include "kostlan/expansion.hpp"
#include "kostlan/poly.hpp"

namespace kostlan {

// Identifies one sample stream; (master_seed, stream_id) -> polynomial is a
// pure function, reproducible bit-for-bit regardless of evaluation order.
struct SeedSpec {
  std::uint64_t master_seed = 0;
  std::uint64_t stream_id = 0;
};

// Recorded in every serialized report so runs can be replayed.
inline constexpr const char* kRngTag = "boxmuller-splitmix64";

namespace detail {

inline std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

inline std::uint64_t counter_key(const SeedSpec& s, std::uint64_t index, std::uint64_t salt) {
  return mix64(mix64(mix64(mix64(s.master_seed) ^ s.stream_id) ^ index) ^ salt);
}

inline double uniform01(std::uint64_t k) { return (double(k >> 11) + 0.5) * 0x1p-53; }

// Standard normal from two counter-keyed uniforms (Box-Muller, cosine leg).
inline double gauss(const SeedSpec& s, std::uint64_t index, std::uint64_t salt) {
  const double u1 = uniform01(counter_key(s, index, 2 * salt));
  const double u2 = uniform01(counter_key(s, index, 2 * salt + 1));
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(kTwoPi * u2);
}

// Distinct sub-streams per representation so the two routes are independent.
inline constexpr std::uint64_t kSaltMonomial = 0;
inline constexpr std::uint64_t kSaltHarmonic = 1;

}  // namespace detail

// Kostlan sample in the monomial representation: gamma_a = xi_a sqrt(d!/a!)
// with xi_a i.i.d. standard normal, drawn in the monomial-rank order.
inline HomogeneousPoly sample_monomial(int n, int d, const SeedSpec& seed) {
  if (d < 1) throw std::invalid_argument("sample_monomial: degree must be >= 1");
  HomogeneousPoly P(n, d);
  const double lfd = log_factorial(d);
  for_each_monomial(n + 1, d, [&](const MultiIndex& a, std::size_t idx) {
    double lw = lfd;
    for (int ai : a) lw -= log_factorial(ai);
    P.coeffs[idx] = detail::gauss(seed, idx, detail::kSaltMonomial) * std::exp(0.5 * lw);
  });
  return P;
}

// The same ensemble in the spherical-harmonic representation:
// c_{l,j} = xi_{l,j} w_{n,d}(l), indices drawn in (l, j) order.
inline HarmonicExpansion sample_harmonic(int n, int d, const SeedSpec& seed) {
  if (d < 1) throw std::invalid_argument("sample_harmonic: degree must be >= 1");
  HarmonicExpansion e(n, d);
  std::uint64_t idx = 0;
  for (int l = d % 2; l <= d; l += 2) {
    const double w = weight(n, d, l);
    std::vector<double> c(harmonic_dim(n, l));
    for (double& x : c) x = detail::gauss(seed, idx++, detail::kSaltHarmonic) * w;
    e.set_component(l, std::move(c));
  }
  return e;
}

}  // namespace kostlan

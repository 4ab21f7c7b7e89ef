#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "kostlan/expansion.hpp"

using namespace kostlan;

namespace {

SpherePoint random_point(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  std::vector<double> v(n + 1);
  double s = 0.0;
  for (double& x : v) {
    x = g(rng);
    s += x * x;
  }
  for (double& x : v) x /= std::sqrt(s);
  return SpherePoint::from_coords(v);
}

HomogeneousPoly random_kostlan(int n, int d, std::mt19937_64& rng) {
  HomogeneousPoly P(n, d);
  std::normal_distribution<double> g;
  for_each_monomial(n + 1, d, [&](const MultiIndex& a, std::size_t idx) {
    double lf = log_factorial(d);
    for (int ai : a) lf -= log_factorial(ai);
    P.coeffs[idx] = g(rng) * std::exp(0.5 * lf);
  });
  return P;
}

}  // namespace

TEST_CASE("decompose reference values") {
  {
    HomogeneousPoly P(1, 2);
    P.at({2, 0}) = 1.0;  // x0^2
    auto e = decompose(P);
    REQUIRE(e.comps.count(0) == 1);
    REQUIRE(e.comps.count(2) == 1);
    CHECK(e.comps.at(0)[0] == doctest::Approx(0.5 * std::sqrt(kTwoPi)).epsilon(1e-12));
    CHECK(e.comps.at(2)[0] == doctest::Approx(0.5 * std::sqrt(kPi)).epsilon(1e-12));
    CHECK(std::abs(e.comps.at(2)[1]) < 1e-13);
  }
  {
    HomogeneousPoly P(1, 1);
    P.at({1, 0}) = 1.0;  // x0
    auto e = decompose(P);
    REQUIRE(e.comps.count(1) == 1);
    CHECK(e.comps.at(1)[0] == doctest::Approx(std::sqrt(kPi)).epsilon(1e-12));
    CHECK(std::abs(e.comps.at(1)[1]) < 1e-13);
  }
}

TEST_CASE("pure harmonics decompose onto a single degree") {
  std::mt19937_64 rng(7);
  std::normal_distribution<double> g;
  for (int n : {1, 2}) {
    for (int l : {3, 8}) {
      HomogeneousPoly H(n, l);
      for (int j = 0; j < harmonic_dim(n, l); ++j) {
        HomogeneousPoly term = solid_harmonic(n, l, j);
        term *= g(rng);
        H += term;
      }
      auto e = decompose(H);
      double off = 0.0, on = 0.0;
      for (const auto& [lc, c] : e.comps)
        for (double x : c) (lc == l ? on : off) = std::max(lc == l ? on : off, std::abs(x));
      CHECK(on > 0.1);
      CHECK(off < 1e-12 * on);
    }
  }
}

TEST_CASE("reconstruct matches evaluation") {
  std::mt19937_64 rng(11);
  {
    HomogeneousPoly P(1, 2);
    P.at({2, 0}) = 1.0;
    CHECK(reconstruct(decompose(P), SpherePoint::from_angle(0.0)) ==
          doctest::Approx(1.0).epsilon(1e-12));
  }
  CHECK(reconstruct(HarmonicExpansion(2, 4), random_point(2, rng)) == 0.0);

  for (int n : {1, 2}) {
    auto P = random_kostlan(n, 9, rng);
    auto e = decompose(P);
    for (int t = 0; t < 100; ++t) {
      auto p = random_point(n, rng);
      CHECK(std::abs(reconstruct(e, p) - P.evaluate(p)) < 1e-10);
    }
  }
}

TEST_CASE("reconstruction round-trip on random Kostlan samples") {
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 50; ++trial) {
    const int n = 1 + trial % 2;
    const int d = 1 + int(rng() % 40);
    auto P = random_kostlan(n, d, rng);
    auto e = decompose(P);
    const double tol = 1e-9 * P.bw_norm();
    double worst = 0.0;
    for (int t = 0; t < 1000; ++t) {
      auto p = random_point(n, rng);
      worst = std::max(worst, std::abs(reconstruct(e, p) - P.evaluate(p)));
    }
    CHECK(worst < tol);
  }
}

TEST_CASE("truncation") {
  HomogeneousPoly P(1, 2);
  P.at({2, 0}) = 1.0;
  auto e = decompose(P);
  {
    auto f = truncate(e, 2);
    CHECK(f.d == 2);
    CHECK(f.comps == e.comps);
  }
  {
    auto f = truncate(e, 0);
    CHECK(f.d == 0);
    CHECK(f.parity == 0);
    REQUIRE(f.comps.size() == 1);
    CHECK(f.comps.at(0)[0] == doctest::Approx(0.5 * std::sqrt(kTwoPi)).epsilon(1e-12));
  }
  {
    // L = 1 keeps only the constant part 1/2 (degree 1 absent by parity).
    auto f = truncate(e, 1);
    CHECK(f.d == 1);
    CHECK(f.parity == 0);
    REQUIRE(f.comps.size() == 1);
    std::mt19937_64 rng(3);
    CHECK(reconstruct(f, random_point(1, rng)) == doctest::Approx(0.5).epsilon(1e-12));
  }
  CHECK_THROWS_AS(truncate(e, 3), std::invalid_argument);
  CHECK_THROWS_AS(truncate(e, -1), std::invalid_argument);

  // truncate + residual partition the expansion.
  std::mt19937_64 rng(5);
  auto Q = random_kostlan(2, 12, rng);
  auto eq = decompose(Q);
  auto lo = truncate(eq, 6);
  auto hi = truncation_residual(eq, 6);
  CHECK(lo.l2_norm_sq() + hi.l2_norm_sq() == doctest::Approx(eq.l2_norm_sq()).epsilon(1e-12));
  for (const auto& [l, c] : eq.comps) CHECK((l <= 6 ? lo : hi).comps.at(l) == c);
}

TEST_CASE("sobolev norm") {
  std::mt19937_64 rng(17);
  // q = 0 equals the quadrature L^2 norm (Parseval).
  for (int n : {1, 2}) {
    auto P = random_kostlan(n, 8, rng);
    auto e = decompose(P);
    auto rule = quadrature(n, 16);
    double s = 0.0;
    for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
      const double v = P.evaluate(rule.nodes[q]);
      s += rule.weights[q] * v * v;
    }
    CHECK(e.sobolev_norm(0.0) * e.sobolev_norm(0.0) == doctest::Approx(s).epsilon(1e-10));
    CHECK(e.sobolev_norm(0.0) == doctest::Approx(e.l2_norm()).epsilon(1e-14));
  }
  {
    // Pure l = 1 with ||p_1|| = sqrt(pi): the q = 2 norm is unchanged.
    HarmonicExpansion e(1, 1);
    e.set_component(1, {std::sqrt(kPi), 0.0});
    CHECK(e.sobolev_norm(2.0) == doctest::Approx(std::sqrt(kPi)).epsilon(1e-14));
  }
  CHECK(HarmonicExpansion(1, 4).sobolev_norm(1.5) == 0.0);
  // The constant term survives q = 0 but not q > 0.
  {
    HarmonicExpansion e(1, 2);
    e.set_component(0, {2.0});
    CHECK(e.sobolev_norm(0.0) == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(e.sobolev_norm(1.0) == 0.0);
  }
}

TEST_CASE("rescaling identity for embedded pure harmonics") {
  std::mt19937_64 rng(19);
  std::normal_distribution<double> g;
  for (int n : {1, 2}) {
    for (int l : {0, 1, 4, 9}) {
      for (int d : {l, l + 2, l + 8, l + 20}) {
        HomogeneousPoly H(n, l);
        for (int j = 0; j < harmonic_dim(n, l); ++j) {
          HomogeneousPoly term = solid_harmonic(n, l, j);
          term *= g(rng);
          H += term;
        }
        auto rep = times_norm_power(H, (d - l) / 2);
        auto rule = quadrature(n, 2 * l);
        double s = 0.0;
        for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
          const double v = H.evaluate(rule.nodes[q]);
          s += rule.weights[q] * v * v;
        }
        CHECK(std::sqrt(s) ==
              doctest::Approx(weight(n, d, l) * rep.bw_norm()).epsilon(1e-9));
      }
    }
  }
}

TEST_CASE("expansion BW norm matches the homogeneous representative") {
  std::mt19937_64 rng(23);
  for (int n : {1, 2}) {
    for (int d : {3, 8, 14}) {
      auto P = random_kostlan(n, d, rng);
      auto e = decompose(P);
      CHECK(e.bw_norm() == doctest::Approx(P.bw_norm()).epsilon(1e-9));
      // Round trip through the homogeneous representative.
      auto Q = to_homogeneous(e);
      REQUIRE(Q.coeffs.size() == P.coeffs.size());
      double worst = 0.0;
      for (std::size_t i = 0; i < P.coeffs.size(); ++i)
        worst = std::max(worst, std::abs(Q.coeffs[i] - P.coeffs[i]));
      CHECK(worst < 1e-9 * P.bw_norm());
    }
  }
  // Truncations convert at their own nominal degree.
  auto P = random_kostlan(2, 10, rng);
  auto e = truncate(decompose(P), 6);
  auto Q = to_homogeneous(e);
  CHECK(Q.d == 6);
  for (int t = 0; t < 50; ++t) {
    auto p = random_point(2, rng);
    CHECK(Q.evaluate(p) == doctest::Approx(reconstruct(e, p)).epsilon(1e-9));
  }
}

TEST_CASE("trig series evaluation and derivatives") {
  std::mt19937_64 rng(29);
  auto P = random_kostlan(1, 14, rng);
  auto e = decompose(P);
  auto t = TrigSeries::from(e);
  const double h = 1e-6;
  for (int k = 0; k < 40; ++k) {
    const double phi = kTwoPi * double(rng() % 100000) / 100000.0;
    double v, d1, d2;
    t.eval(phi, &v, &d1, &d2);
    CHECK(v == doctest::Approx(reconstruct(e, SpherePoint::from_angle(phi))).epsilon(1e-11));
    const double fd1 = (t.value(phi + h) - t.value(phi - h)) / (2.0 * h);
    const double fd2 = (t.value(phi + h) - 2.0 * v + t.value(phi - h)) / (h * h);
    CHECK(d1 == doctest::Approx(fd1).epsilon(1e-5));
    CHECK(d2 == doctest::Approx(fd2).epsilon(1e-3));
  }
}

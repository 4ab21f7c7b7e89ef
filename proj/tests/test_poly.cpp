#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "kostlan/poly.hpp"

using namespace kostlan;

namespace {

HomogeneousPoly random_poly(int n, int d, std::mt19937_64& rng) {
  HomogeneousPoly p(n, d);
  std::normal_distribution<double> g;
  for (double& c : p.coeffs) c = g(rng);
  return p;
}

std::vector<double> random_unit(int dim, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  std::vector<double> v(dim);
  double s = 0.0;
  for (double& x : v) {
    x = g(rng);
    s += x * x;
  }
  for (double& x : v) x /= std::sqrt(s);
  return v;
}

}  // namespace

TEST_CASE("bw_norm on reference polynomials") {
  for (int n : {1, 2, 3}) {
    for (int d : {1, 2, 7, 40, 500}) {
      MultiIndex a(n + 1, 0);
      a[0] = d;
      auto p = HomogeneousPoly::monomial(n, d, a);
      CHECK(p.bw_norm() == doctest::Approx(1.0).epsilon(1e-13));
    }
  }

  HomogeneousPoly q(1, 2);
  q.at({1, 1}) = 1.0;
  CHECK(q.bw_norm() == doctest::Approx(std::sqrt(0.5)).epsilon(1e-13));

  HomogeneousPoly r(1, 2);
  r.at({2, 0}) = 1.0;
  r.at({0, 2}) = 1.0;
  CHECK(r.bw_norm() == doctest::Approx(std::sqrt(2.0)).epsilon(1e-13));

  CHECK(HomogeneousPoly(2, 5).bw_norm() == 0.0);
}

TEST_CASE("evaluate on reference polynomials") {
  auto cube = HomogeneousPoly::monomial(1, 3, {3, 0});
  CHECK(cube.evaluate(std::vector<double>{2.0, 0.0}) == doctest::Approx(8.0));

  auto xy = HomogeneousPoly::monomial(1, 2, {1, 1});
  CHECK(xy.evaluate(std::vector<double>{1.0, 1.0}) == doctest::Approx(1.0));

  HomogeneousPoly s(1, 2);
  s.at({2, 0}) = 1.0;
  s.at({0, 2}) = 1.0;
  CHECK(s.evaluate(std::vector<double>{3.0, 4.0}) == doctest::Approx(25.0));

  CHECK_THROWS_AS(s.evaluate(std::vector<double>{1.0, 2.0, 3.0}), std::invalid_argument);
}

TEST_CASE("homogeneity: P(lambda x) = lambda^d P(x)") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> lam(0.5, 2.0);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 1 + int(rng() % 3);
    const int d = 1 + int(rng() % 12);
    auto p = random_poly(n, d, rng);
    auto x = random_unit(n + 1, rng);
    const double l = lam(rng);
    std::vector<double> lx = x;
    for (double& c : lx) c *= l;
    const double lhs = p.evaluate(lx);
    const double rhs = std::pow(l, d) * p.evaluate(x);
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-11));
  }
}

TEST_CASE("spherical gradient reference values") {
  auto x0 = HomogeneousPoly::monomial(1, 1, {1, 0});

  auto g = x0.spherical_gradient(SpherePoint::from_coords({1.0, 0.0}));
  CHECK(std::abs(g[0]) < 1e-15);
  CHECK(std::abs(g[1]) < 1e-15);

  g = x0.spherical_gradient(SpherePoint::from_coords({0.0, 1.0}));
  CHECK(g[0] == doctest::Approx(1.0));
  CHECK(std::abs(g[1]) < 1e-15);

  // Tangent projection of the ambient gradient (sqrt(2), 0) at the midpoint
  // of the first quadrant.
  auto x0sq = HomogeneousPoly::monomial(1, 2, {2, 0});
  const double inv = 1.0 / std::sqrt(2.0);
  g = x0sq.spherical_gradient(SpherePoint::from_coords({inv, inv}));
  CHECK(g[0] == doctest::Approx(inv).epsilon(1e-12));
  CHECK(g[1] == doctest::Approx(-inv).epsilon(1e-12));
}

TEST_CASE("Euler identity and tangency for random inputs") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 1000; ++trial) {
    const int n = 1 + int(rng() % 2);
    const int d = 1 + int(rng() % 10);
    auto p = random_poly(n, d, rng);
    auto theta = SpherePoint::from_coords(random_unit(n + 1, rng));
    auto grad = p.gradient(theta.x.data(), n + 1);
    double radial = 0.0;
    for (int i = 0; i <= n; ++i) radial += grad[i] * theta.x[i];
    CHECK(radial == doctest::Approx(d * p.evaluate(theta)).epsilon(1e-12));
    auto tg = p.spherical_gradient(theta);
    double dotp = 0.0;
    for (int i = 0; i <= n; ++i) dotp += tg[i] * theta.x[i];
    CHECK(std::abs(dotp) < 1e-12 * (1.0 + p.bw_norm()));
  }
}

TEST_CASE("rescaled monomials are Bombieri-Weil orthonormal") {
  for (int n : {1, 2, 3}) {
    for (int d : {1, 4, 9, 20}) {
      const auto mons = all_monomials(n + 1, d);
      // Rescaled basis e_a = sqrt(d!/a!) x^a.
      std::vector<HomogeneousPoly> basis;
      for (const auto& a : mons) {
        double lw = log_factorial(d);
        for (int e : a) lw -= log_factorial(e);
        basis.push_back(HomogeneousPoly::monomial(n, d, a, std::exp(0.5 * lw)));
      }
      // Off-diagonal terms vanish structurally; spot-check a band plus the
      // full diagonal.
      for (std::size_t i = 0; i < basis.size(); ++i) {
        CHECK(bw_inner(basis[i], basis[i]) == doctest::Approx(1.0).epsilon(1e-12));
        for (std::size_t j = i + 1; j < std::min(basis.size(), i + 6); ++j)
          CHECK(std::abs(bw_inner(basis[i], basis[j])) < 1e-12);
      }
    }
  }
}

TEST_CASE("derivative matches finite differences") {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 1 + int(rng() % 2);
    const int d = 2 + int(rng() % 6);
    auto p = random_poly(n, d, rng);
    auto x = random_unit(n + 1, rng);
    const double h = 1e-6;
    for (int i = 0; i <= n; ++i) {
      auto xp = x, xm = x;
      xp[i] += h;
      xm[i] -= h;
      const double fd = (p.evaluate(xp) - p.evaluate(xm)) / (2 * h);
      CHECK(p.derivative(i).evaluate(x) == doctest::Approx(fd).epsilon(1e-6));
    }
  }
}

TEST_CASE("multiply and norm powers") {
  // (x^2 + y^2)^2 expanded.
  auto np = norm_power(1, 2);
  CHECK(np.at({4, 0}) == doctest::Approx(1.0));
  CHECK(np.at({2, 2}) == doctest::Approx(2.0));
  CHECK(np.at({0, 4}) == doctest::Approx(1.0));

  std::mt19937_64 rng(31);
  auto p = random_poly(2, 4, rng);
  auto q = times_norm_power(p, 3);
  auto x = random_unit(3, rng);
  CHECK(q.evaluate(x) == doctest::Approx(p.evaluate(x)).epsilon(1e-12));
}

TEST_CASE("compose_linear is evaluation-compatible") {
  std::mt19937_64 rng(37);
  auto p = random_poly(2, 5, rng);
  // A rotation in the (0,1) plane.
  const double c = std::cos(0.7), s = std::sin(0.7);
  std::vector<std::vector<double>> R = {{c, -s, 0}, {s, c, 0}, {0, 0, 1}};
  auto q = compose_linear(p, R);
  auto x = random_unit(3, rng);
  std::vector<double> rx = {R[0][0] * x[0] + R[0][1] * x[1] + R[0][2] * x[2],
                            R[1][0] * x[0] + R[1][1] * x[1] + R[1][2] * x[2],
                            R[2][0] * x[0] + R[2][1] * x[1] + R[2][2] * x[2]};
  CHECK(q.evaluate(x) == doctest::Approx(p.evaluate(rx)).epsilon(1e-11));
}

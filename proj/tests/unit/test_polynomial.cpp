#include "nikishin/polynomial.hpp"

#include "oracles.hpp"

#include <doctest.h>

#include <algorithm>
#include <random>

using namespace nikishin;

namespace {

double match_error(std::vector<cplx> a, std::vector<cplx> b) {
  // greedy nearest matching is enough for well-separated random roots
  double err = 0.0;
  for (const cplx& r : a) {
    auto it = std::min_element(b.begin(), b.end(),
                               [&](cplx x, cplx y) { return std::abs(x - r) < std::abs(y - r); });
    err = std::max(err, std::abs(*it - r));
    b.erase(it);
  }
  return err;
}

}  // namespace

TEST_CASE("elementary symmetric functions expand the root product") {
  std::vector<cplx> v{{1.0, 2.0}, {-0.5, 0.0}, {3.0, -1.0}, {0.25, 0.75}};
  auto e = elementary_symmetric(v);
  auto c = oracle::expand_roots(v);
  REQUIRE(e.size() == 5);
  CHECK(e[0] == cplx(1.0));
  for (std::size_t k = 1; k < e.size(); ++k) {
    const double sign = (k % 2 == 0) ? 1.0 : -1.0;
    CHECK(std::abs(sign * e[k] - c[k - 1]) <= 1e-13);
  }
}

TEST_CASE("monic roots round trip") {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  for (int n = 1; n <= 7; ++n)
    for (int it = 0; it < 20; ++it) {
      std::vector<cplx> roots;
      for (int i = 0; i < n; ++i) roots.emplace_back(u(rng), u(rng));
      auto c = oracle::expand_roots(roots);
      auto got = monic_roots(c);
      REQUIRE(static_cast<int>(got.size()) == n);
      CHECK(match_error(roots, got) <= 1e-8);
      for (const cplx& z : got) CHECK(std::abs(eval_monic(c, z)) <= 1e-9 * std::pow(4.0, n));
    }
}

TEST_CASE("sylvester discriminant equals the root-product discriminant") {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (int n = 2; n <= 6; ++n)
    for (int it = 0; it < 25; ++it) {
      std::vector<double> c(n);
      for (double& x : c) x = u(rng);
      std::vector<cplx> cc(c.begin(), c.end());
      const cplx ref = oracle::discriminant_from_roots(monic_roots(cc));
      CHECK(std::abs(ref.imag()) <= 1e-8 * (1.0 + std::abs(ref)));
      CHECK(sylvester_discriminant(c) == doctest::Approx(ref.real()).epsilon(1e-8).scale(1.0));
    }
  std::vector<double> lin{3.0};
  CHECK(sylvester_discriminant(lin) == 1.0);
  // (z-1)^2 (z+2) has a double root
  std::vector<double> dbl{0.0, -3.0, 2.0};
  CHECK(std::abs(sylvester_discriminant(dbl)) <= 1e-12);
}

TEST_CASE("cubic discriminant agrees with the general one") {
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> u(-5.0, 5.0);
  for (int it = 0; it < 100; ++it) {
    const double p = u(rng), q = u(rng);
    std::vector<double> c{0.0, p, q};
    CHECK(cubic_discriminant(p, q) == doctest::Approx(sylvester_discriminant(c)).epsilon(1e-10).scale(1.0));
  }
}

TEST_CASE("depressed cubic roots: ordering, residuals, extreme scales") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(-4.0, 4.0);
  for (int it = 0; it < 200; ++it) {
    const double p = u(rng), q = u(rng);
    auto r = depressed_cubic_roots(p, q);
    REQUIRE(r.size() == 3);
    std::vector<cplx> c{0.0, p, q};
    for (const cplx& z : r) CHECK(std::abs(eval_monic(c, z)) <= 1e-10 * (1.0 + std::abs(p) + std::abs(q)));
    if (cubic_discriminant(p, q) > 0.0) {
      CHECK(r[0].real() <= r[1].real());
      CHECK(r[1].real() <= r[2].real());
      for (const cplx& z : r) CHECK(z.imag() == 0.0);
    } else {
      CHECK(r[0].imag() == 0.0);
      CHECK(r[1].imag() >= 0.0);
      CHECK(r[2] == std::conj(r[1]));
    }
  }
  // triple root and a near-double root
  auto t = depressed_cubic_roots(0.0, 0.0);
  for (const cplx& z : t) CHECK(std::abs(z) == 0.0);
  auto nd = depressed_cubic_roots(-3.0, 2.0 + 1e-12);  // (z-1)^2(z+2) perturbed
  CHECK(std::abs(nd[0] + 2.0) <= 1e-12);
  // coefficients far from unit scale
  for (double s : {1e-80, 1e80}) {
    const double p = -3.0 * s * s, q = 2.0 * s * s * s;  // roots s, s, -2s
    if (!std::isfinite(q) || q == 0.0) continue;
    auto big = depressed_cubic_roots(p, q);
    CHECK(std::abs(big[0] / s + 2.0) <= 1e-8);
  }
  const double s = 1e100;
  auto huge = depressed_cubic_roots(-s * s, 0.0);  // roots -s, 0, s
  CHECK(huge[0].real() == doctest::Approx(-s));
  CHECK(huge[2].real() == doctest::Approx(s));
}

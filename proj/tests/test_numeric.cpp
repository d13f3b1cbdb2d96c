#include <doctest.h>

#include <cmath>

#include "sibuya/numeric.hpp"
#include "sibuya/rng.hpp"

using namespace sibuya;

TEST_CASE("series reciprocal and composition") {
  const std::vector<double> a = {1.0, -1.0};  // 1 - x
  const auto r = series::reciprocal(a, 10);
  for (double c : r) CHECK(c == doctest::Approx(1.0));
  const std::vector<double> outer = {0.0, 1.0, 1.0};  // x + x^2
  const std::vector<double> inner = {0.0, 2.0};       // 2x
  const auto c = series::compose(outer, inner, 4);
  CHECK(c[1] == doctest::Approx(2.0));
  CHECK(c[2] == doctest::Approx(4.0));
  CHECK(c[3] == doctest::Approx(0.0));
}

TEST_CASE("series reversion inverts x e^{-x}") {
  std::vector<double> f(12);
  double fact = 1.0;
  for (int n = 1; n < 12; ++n) {
    fact *= (n == 1 ? 1.0 : n - 1.0);
    f[n] = ((n - 1) % 2 ? -1.0 : 1.0) / fact;
  }
  // inverse is the tree function T(x) = sum n^{n-1} x^n / n!
  const auto g = series::revert(f, 8);
  double nf = 1.0;
  for (int n = 1; n <= 8; ++n) {
    nf *= n;
    CHECK(g[n] == doctest::Approx(std::pow(n, n - 1) / nf).epsilon(1e-12));
  }
}

TEST_CASE("positive axis quadrature") {
  const auto r = quad::positive_axis([](double x) { return std::exp(-x) * x; });
  CHECK(r.value == doctest::Approx(1.0).epsilon(1e-10));
  const auto z = quad::positive_axis([](double x) { return x < 5.0 ? 0.0 : (x - 5.0) * std::exp(5.0 - x); });
  CHECK(z.value == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("Gauss hypergeometric special values") {
  const std::vector<cdouble> a = {1.0, 1.0};
  const std::vector<cdouble> b = {2.0};
  const double x = 0.5;
  CHECK(hypergeometric_pfq(a, b, x).real() == doctest::Approx(-std::log1p(-x) / x).epsilon(1e-13));
}

TEST_CASE("compensated sum recovers small terms") {
  CompensatedSum s;
  s.add(1.0);
  for (int i = 0; i < 1000; ++i) s.add(1e-16);
  s.add(-1.0);
  CHECK(s.value() == doctest::Approx(1e-13).epsilon(1e-6));
}

TEST_CASE("counter RNG streams are reproducible and distinct") {
  CounterRng a(42, 0), b(42, 0), c(42, 1);
  for (int i = 0; i < 100; ++i) {
    const auto x = a();
    CHECK(x == b());
    (void)c;
  }
  CounterRng d(42, 0), e(42, 1);
  int same = 0;
  for (int i = 0; i < 100; ++i) same += d() == e();
  CHECK(same == 0);
  double mean = 0.0;
  CounterRng u(1, 0);
  for (int i = 0; i < 100000; ++i) {
    const double v = u.uniform();
    CHECK(v > 0.0);
    CHECK(v < 1.0);
    mean += v;
  }
  CHECK(mean / 1e5 == doctest::Approx(0.5).epsilon(0.01));
}

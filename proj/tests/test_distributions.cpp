#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "sibuya/distributions.hpp"
#include "sibuya/errors.hpp"

using namespace sibuya;

namespace {

std::vector<DistributionSpec> catalog() {
  return {
      DistributionSpec::sibuya(0.5),
      DistributionSpec::scaled_sibuya(0.4, 0.5),
      DistributionSpec::shifted_sibuya(0.3),
      DistributionSpec::generalized_sibuya(1.0, 0.5),
      DistributionSpec::shifted_generalized_sibuya(2.0, 1.5),
      DistributionSpec::extended_sibuya(0.9, 0.5),
      DistributionSpec::extended_sibuya(0.6, -1.5),
      DistributionSpec::shifted_extended_sibuya(0.8, 0.5),
      DistributionSpec::discrete_stable(1.0, 0.6),
      DistributionSpec::mittag_leffler(1.0, 0.5),
      DistributionSpec::nbd_mean(3.0, 2.0),
      DistributionSpec::geometric(1.0),
      DistributionSpec::poisson(2.0),
      DistributionSpec::bernoulli(0.3),
      DistributionSpec::logarithmic(0.7),
      DistributionSpec::zero_inflated_log(0.5),
      DistributionSpec::cmp2(1.0),
      DistributionSpec::zero_truncated_nbd(0.4, 2.0),
      DistributionSpec::four_param(0.9, 0.5, 2, 2, 2),
  };
}

}  // namespace

TEST_CASE("make_spec rejects out-of-domain parameters") {
  CHECK_THROWS_AS(DistributionSpec::generalized_sibuya(1.0, 2.5), ParameterError);
  CHECK_THROWS_AS(DistributionSpec::sibuya(1.0), ParameterError);
  CHECK_THROWS_AS(DistributionSpec::sibuya(0.0), ParameterError);
  CHECK_THROWS_AS(DistributionSpec::bernoulli(1.0), ParameterError);
  CHECK_THROWS_AS(DistributionSpec::cmp2(0.0), ParameterError);
  CHECK_THROWS_AS(DistributionSpec::extended_sibuya(1.0, -0.5), ParameterError);
  CHECK_THROWS_AS(DistributionSpec::scaled_sibuya(1.5, 0.5), ParameterError);
  CHECK_THROWS_AS(make_spec(Family::nbd, {{"k", 2.0}}), ParameterError);
  CHECK_THROWS_AS(family_from_name("zipf"), ParameterError);
  try {
    DistributionSpec::generalized_sibuya(1.0, 2.5);
  } catch (const ParameterError& e) {
    CHECK(std::string(e.what()).find("nu + 1") != std::string::npos);
  }
}

TEST_CASE("extended Sibuya at gamma = 0 becomes logarithmic") {
  const auto s = DistributionSpec::extended_sibuya(0.6, 0.0);
  CHECK(s.family() == Family::logarithmic);
  CHECK(s.params().theta == 0.6);
}

TEST_CASE("four_param outside the proven region is flagged") {
  CHECK_FALSE(DistributionSpec::four_param(1.0, 0.5, 2, 2, 2).unverified());
  CHECK(DistributionSpec::four_param(1.0, 0.5, 2, 3, 2).unverified());
  CHECK(DistributionSpec::four_param(1.0, 0.45, 2, 2, 2).unverified());
}

TEST_CASE("pmf spot values") {
  CHECK(pmf(DistributionSpec::generalized_sibuya(0.0, 0.4), 1) == doctest::Approx(0.4).epsilon(1e-14));
  const auto nbd = DistributionSpec::nbd_q(0.5, 2.0);
  CHECK(pmf(nbd, 0) == doctest::Approx(0.25).epsilon(1e-14));
  CHECK(pmf(nbd, 1) == doctest::Approx(0.25).epsilon(1e-14));
  CHECK(pmf(nbd, 2) == doctest::Approx(0.1875).epsilon(1e-14));
  // 1 / sum 1/(n!)^2 at theta = 1
  CHECK(pmf(DistributionSpec::cmp2(1.0), 0) == doctest::Approx(1.0 / 2.2795853023360673).epsilon(1e-12));
  const auto sib = DistributionSpec::sibuya(0.5);
  CHECK(pmf(sib, 1) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(pmf(sib, 2) == doctest::Approx(0.125).epsilon(1e-15));
  CHECK(pmf(sib, 3) == doctest::Approx(0.0625).epsilon(1e-15));
}

TEST_CASE("extended Sibuya with b = 1 equals Sibuya") {
  const auto ext = DistributionSpec::extended_sibuya(1.0, 0.5);
  const auto sib = DistributionSpec::sibuya(0.5);
  for (long n = 0; n <= 200; ++n) CHECK(pmf(ext, n) == doctest::Approx(pmf(sib, n)).epsilon(1e-13));
}

TEST_CASE("g-function values") {
  const auto g = g_function(DistributionSpec::extended_sibuya(0.9, 0.5));
  CHECK(g(1) == doctest::Approx(0.45).epsilon(1e-15));
  CHECK(g(4) == doctest::Approx(3.15).epsilon(1e-15));
  CHECK(g_function(DistributionSpec::shifted_sibuya(0.5))(0) == doctest::Approx(0.25).epsilon(1e-15));

  // k = l = 2, m = 2, b = 1: the exact series gives g(2) = 3/2 and
  // g(n) = (2n - 3)/2 from n = 3 on.
  const auto g4 = g_function(DistributionSpec::four_param(1.0, 0.5, 2, 2, 2));
  CHECK(g4(2) == doctest::Approx(1.5).epsilon(1e-12));
  for (long n = 3; n <= 40; ++n) CHECK(g4(n) == doctest::Approx((2.0 * n - 3.0) / 2.0).epsilon(1e-9));
}

TEST_CASE("four_param pmf against hand expansion") {
  // 1 - (1 - S^2)^2 with S = 1 - sqrt(1-w): 0, 0, 1/2, 1/4, 3/32, 3/64, 7/256
  const auto t = pmf_table(DistributionSpec::four_param(1.0, 0.5, 2, 2, 2), 6);
  const double want[] = {0.0, 0.0, 0.5, 0.25, 3.0 / 32, 3.0 / 64, 7.0 / 256};
  for (int n = 0; n <= 6; ++n) CHECK(t[n] == doctest::Approx(want[n]).epsilon(1e-13));
}

TEST_CASE("recurrence table reproduces the closed form on the catalog") {
  for (const auto& spec : catalog()) {
    CAPTURE(spec.describe());
    const auto rec = recurrence_table(spec, 100);
    const auto cf = pmf_table(spec, 100);
    for (long n = 0; n <= 100; ++n) {
      if (cf[n] < 1e-280) continue;
      CHECK(oracle::rel_err(rec[n], cf[n]) < 1e-9);
    }
  }
}

TEST_CASE("pmf tables are normalized up to the tail mass") {
  for (const auto& spec : catalog()) {
    CAPTURE(spec.describe());
    const auto t = pmf_table(spec, 400);
    CHECK(t.sum() + t.tail_mass == doctest::Approx(1.0).epsilon(1e-12));
    for (double p : t.probs) CHECK(p >= 0.0);
  }
}

TEST_CASE("contour coefficients match closed-form pmf for n <= 60") {
  for (const auto& spec : catalog()) {
    CAPTURE(spec.describe());
    const auto c = pgf_coefficients(Pgf::closed_form(spec), 60, CoefficientMethod::contour);
    const auto t = pmf_table(spec, 60);
    for (int n = 0; n <= 60; ++n) CHECK(std::abs(c[n] - t[n]) < 1e-9);
  }
}

TEST_CASE("extended Sibuya approaches logarithmic as gamma -> 0") {
  const double b = 0.7;
  const auto log = oracle::logarithmic_table(b, 30);
  for (double gamma : {1e-3, -1e-3, 1e-4, -1e-4}) {
    const auto t = pmf_table(DistributionSpec::extended_sibuya(b, gamma), 30);
    double worst = 0.0;
    for (int n = 1; n <= 30; ++n) worst = std::max(worst, std::abs(t[n] - static_cast<double>(log[n])));
    CAPTURE(gamma);
    CHECK(worst < 5.0 * std::abs(gamma));
  }
}

TEST_CASE("extended Sibuya at gamma = -k is the zero-truncated NBD") {
  for (double k : {1.0, 2.0}) {
    const double b = 0.6;
    const auto ext = pmf_table(DistributionSpec::extended_sibuya(b, -k), 80);
    const auto nbd = oracle::nbd_table(b, k, 80);
    for (int n = 1; n <= 80; ++n) {
      const long double want = nbd[n] / (1.0L - nbd[0]);
      CHECK(oracle::rel_err(ext[n], want) < 1e-10);
    }
    const auto zt = pmf_table(DistributionSpec::zero_truncated_nbd(b, k), 80);
    for (int n = 1; n <= 80; ++n) CHECK(oracle::rel_err(zt[n], ext[n]) < 1e-12);
  }
}

TEST_CASE("generalized Sibuya with nu = 0 is Sibuya") {
  for (double gamma : {0.2, 0.5, 0.9}) {
    const auto g = pmf_table(DistributionSpec::generalized_sibuya(0.0, gamma), 150);
    const auto s = pmf_table(DistributionSpec::sibuya(gamma), 150);
    for (int n = 0; n <= 150; ++n) CHECK(g[n] == doctest::Approx(s[n]).epsilon(1e-12));
  }
}

TEST_CASE("generalized Sibuya pgf matches partial sums of the pmf") {
  for (auto [nu, gamma] : {std::pair{1.0, 0.5}, {2.0, 1.5}, {0.5, 0.3}, {3.0, 1.0}}) {
    const auto t = oracle::generalized_sibuya_table(nu, gamma, 6000);
    for (double w = 0.0; w <= 0.9 + 1e-12; w += 0.05) {
      long double sum = 0.0L, wn = 1.0L;
      for (int n = 0; n <= 6000; ++n) {
        sum += t[n] * wn;
        wn *= w;
      }
      CAPTURE(nu);
      CAPTURE(gamma);
      CAPTURE(w);
      CHECK(std::abs(generalized_sibuya_pgf(nu, gamma, w).real() - static_cast<double>(sum)) < 1e-9);
    }
  }
}

TEST_CASE("four_param with k = l = 1 is the extended Sibuya pgf") {
  const auto fp = DistributionSpec::four_param(0.8, 0.4, 1, 1, 3);
  const auto ext = DistributionSpec::extended_sibuya(0.8, 0.4);
  for (double w = 0.0; w <= 1.0; w += 0.05) {
    CHECK(closed_form_pgf(fp, w).real() == doctest::Approx(closed_form_pgf(ext, w).real()).epsilon(1e-15));
  }
}

TEST_CASE("Sibuya excess over m is generalized Sibuya with nu = m") {
  const double gamma = 0.45;
  const auto sib = oracle::sibuya_table(gamma, 200);
  for (int m = 1; m <= 3; ++m) {
    long double survive = 1.0L;
    for (int n = 1; n <= m; ++n) survive -= sib[n];
    const auto gen = pmf_table(DistributionSpec::generalized_sibuya(m, gamma), 40);
    for (int n = 1; n <= 40; ++n) {
      CHECK(oracle::rel_err(gen[n], sib[m + n] / survive) < 1e-10);
    }
  }
}

TEST_CASE("Pollard density at gamma = 1/2 matches the Levy density") {
  PollardDensity g(0.5);
  for (double x : {1.0, 2.0, 5.0}) {
    const double levy = std::pow(x, -1.5) * std::exp(-1.0 / (4.0 * x)) / (2.0 * std::sqrt(M_PI));
    CHECK(g(x) == doctest::Approx(levy).epsilon(1e-6));
  }
}

TEST_CASE("discrete stable mixture normalizes and reproduces its pgf") {
  const auto m = discrete_stable_mixture(1.0, 0.6);
  CHECK(std::abs(mixture_mass(m) - 1.0) < 2e-3);
  const auto q = mixture_pgf(m);
  for (double w = 0.0; w <= 0.9 + 1e-12; w += 0.1) {
    CHECK(std::abs(q(w) - std::exp(-std::pow(1.0 - w, 0.6))) < 5e-4);
  }
  PollardDensity g(0.6);
  CHECK(g.low_accuracy(0.5 * g.x_min()));
  CHECK_FALSE(g.low_accuracy(1.0));
}

TEST_CASE("divisibility verdicts") {
  const auto r = divisibility_report(DistributionSpec::scaled_sibuya(0.4, 0.5));
  CHECK(r.infinitely_divisible == Ternary::yes);
  CHECK(r.self_decomposable == Ternary::no);
  CHECK(divisibility_report(DistributionSpec::scaled_sibuya(0.3, 0.5)).self_decomposable == Ternary::yes);
  CHECK(divisibility_report(DistributionSpec::scaled_sibuya(0.6, 0.5)).infinitely_divisible == Ternary::no);
  CHECK(divisibility_report(DistributionSpec::shifted_extended_sibuya(0.7, 0.3)).self_decomposable ==
        Ternary::yes);
  CHECK(divisibility_report(DistributionSpec::shifted_generalized_sibuya(1.0, 0.5)).self_decomposable ==
        Ternary::no);
  CHECK(divisibility_report(DistributionSpec::cmp2(1.0)).self_decomposable == Ternary::unknown);
}

#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "sibuya/distributions.hpp"
#include "sibuya/errors.hpp"
#include "sibuya/gf.hpp"

using namespace sibuya;

namespace {

std::vector<double> grid(int n, double hi = 1.0) {
  std::vector<double> w;
  for (int i = 0; i < n; ++i) w.push_back(hi * i / (n - 1));
  return w;
}

}  // namespace

TEST_CASE("pgf_eval basics") {
  const auto s = Pgf::closed_form(DistributionSpec::sibuya(0.5));
  CHECK(pgf_eval(s, 1.0) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(pgf_eval(s, 0.0) == 0.0);
  CHECK_THROWS_AS(pgf_eval(s, 1.2), DomainError);
  CHECK_THROWS_AS(pgf_eval(s, -0.1), DomainError);
  const auto thinned = pgf_thin(Pgf::closed_form(DistributionSpec::poisson(2.0)), 0.5);
  CHECK(pgf_eval(thinned, 0.3) == doctest::Approx(std::exp(-0.7)).epsilon(1e-14));
}

TEST_CASE("NBD is form-invariant under thinning") {
  const auto nbd = Pgf::closed_form(DistributionSpec::nbd_mean(3.0, 2.0));
  const auto want = Pgf::closed_form(DistributionSpec::nbd_mean(1.2, 2.0));
  const auto t = pgf_thin(nbd, 0.4);
  for (double w : grid(20)) CHECK(std::abs(t(w) - want(w)) < 1e-12);
}

TEST_CASE("thinning is Q(1 - a + a w) on the catalog") {
  const std::vector<DistributionSpec> specs = {
      DistributionSpec::sibuya(0.4),          DistributionSpec::nbd_q(0.3, 2.0),
      DistributionSpec::extended_sibuya(0.8, 0.5), DistributionSpec::cmp2(2.0),
      DistributionSpec::discrete_stable(1.0, 0.7), DistributionSpec::logarithmic(0.5),
      DistributionSpec::four_param(1.0, 0.5, 2, 2, 2)};
  for (const auto& spec : specs) {
    const auto q = Pgf::closed_form(spec);
    for (double a : {0.25, 0.5, 0.75, 1.0}) {
      const auto t = pgf_thin(q, a);
      for (double w : grid(11)) CHECK(t(w) == q(1.0 - a + a * w));
    }
  }
}

TEST_CASE("thinning with a > 1") {
  const auto sib = Pgf::closed_form(DistributionSpec::sibuya(0.5));
  CHECK_THROWS_AS(pgf_thin(sib, 2.0), ScalingError);
  CHECK_THROWS_AS(pgf_thin(sib, 0.0), ParameterError);

  const auto sh = pgf_thin(Pgf::closed_form(DistributionSpec::shifted_extended_sibuya(0.8, 0.5)), 2.0);
  const auto c = pgf_coefficients(sh, 60);
  for (double p : c.probs) CHECK(p >= -1e-12);
  CHECK(c.sum() <= 1.0 + 1e-12);
  CHECK(c.sum() + c.tail_mass == doctest::Approx(1.0).epsilon(1e-9));

  // Poisson(2) scaled by 3 is Poisson(6)
  const auto p6 = pgf_coefficients(pgf_thin(Pgf::closed_form(DistributionSpec::poisson(2.0)), 3.0), 30);
  const auto want = oracle::poisson_table(6.0, 30);
  for (int n = 0; n <= 30; ++n) CHECK(oracle::rel_err(p6[n], want[n]) < 1e-12);

  // thinning of thinning composes multiplicatively
  const auto nbd = Pgf::closed_form(DistributionSpec::nbd_q(0.5, 2.0));
  const auto twice = pgf_thin(pgf_thin(nbd, 0.5), 3.0);
  CHECK(twice.kind() == PgfKind::thinned);
  CHECK(twice(0.3) == doctest::Approx(nbd(1.0 - 1.5 + 1.5 * 0.3)).epsilon(1e-15));
}

TEST_CASE("Sibuya semigroup under composition") {
  for (double g1 : {0.3, 0.5, 0.8}) {
    for (double g2 : {0.3, 0.5, 0.8}) {
      const auto comp = pgf_compound(Pgf::closed_form(DistributionSpec::sibuya(g1)),
                                     Pgf::closed_form(DistributionSpec::sibuya(g2)));
      const auto c = pgf_coefficients(comp, 50);
      const auto want = oracle::sibuya_table(g1 * g2, 50);
      for (int n = 0; n <= 50; ++n) CHECK(std::abs(c[n] - static_cast<double>(want[n])) < 1e-10);
    }
  }
}

TEST_CASE("geometric after Sibuya is Mittag-Leffler") {
  const auto ml = pgf_compound(Pgf::closed_form(DistributionSpec::geometric(1.0)),
                               Pgf::closed_form(DistributionSpec::sibuya(0.5)));
  for (double w : grid(20)) CHECK(std::abs(ml(w) - 1.0 / (1.0 + std::sqrt(1.0 - w))) < 1e-12);
  const auto c = pgf_coefficients(ml, 40);
  const auto t = pmf_table(DistributionSpec::mittag_leffler(1.0, 0.5), 40);
  for (int n = 0; n <= 40; ++n) CHECK(std::abs(c[n] - t[n]) < 1e-13);
}

TEST_CASE("composition with identity and associativity") {
  const auto q = Pgf::closed_form(DistributionSpec::nbd_q(0.4, 1.5));
  const auto id = Pgf::identity();
  for (double w : grid(11)) {
    CHECK(pgf_compound(q, id)(w) == q(w));
    CHECK(pgf_compound(id, q)(w) == q(w));
  }
  const auto p = Pgf::closed_form(DistributionSpec::poisson(1.3));
  const auto r = Pgf::closed_form(DistributionSpec::sibuya(0.6));
  const auto left = pgf_compound(pgf_compound(p, q), r);
  const auto right = pgf_compound(p, pgf_compound(q, r));
  for (double w : grid(21)) CHECK(std::abs(left(w) - right(w)) < 1e-12);
}

TEST_CASE("pgf_coefficients examples") {
  const auto s = pgf_coefficients(Pgf::closed_form(DistributionSpec::sibuya(0.5)), 3);
  CHECK(s[0] == 0.0);
  CHECK(s[1] == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(s[2] == doctest::Approx(0.125).epsilon(1e-15));
  CHECK(s[3] == doctest::Approx(0.0625).epsilon(1e-15));
  const auto id = pgf_coefficients(Pgf::identity(), 4);
  CHECK(id.probs == std::vector<double>{0.0, 1.0, 0.0, 0.0, 0.0});
  const auto ext = pgf_coefficients(Pgf::closed_form(DistributionSpec::extended_sibuya(0.9, 0.5)), 2);
  CHECK(ext[1] == doctest::Approx(0.9 * 0.5 / (1.0 - std::sqrt(0.1))).epsilon(1e-14));
  CHECK_THROWS_AS(pgf_coefficients(Pgf::identity(), -1), ParameterError);
}

TEST_CASE("contour extraction agrees with closed forms up to n = 100") {
  struct Case {
    DistributionSpec spec;
    std::vector<long double> want;
  };
  const std::vector<Case> cases = {
      {DistributionSpec::sibuya(0.5), oracle::sibuya_table(0.5L, 100)},
      {DistributionSpec::nbd_q(0.5, 2.0), oracle::nbd_table(0.5L, 2.0L, 100)},
      {DistributionSpec::geometric(1.0), oracle::nbd_table(0.5L, 1.0L, 100)},
      {DistributionSpec::logarithmic(0.6), oracle::logarithmic_table(0.6L, 100)},
  };
  for (const auto& c : cases) {
    CAPTURE(c.spec.describe());
    const auto t = pgf_coefficients(Pgf::closed_form(c.spec), 100, CoefficientMethod::contour);
    CHECK(t.provenance == "contour");
    for (int n = 0; n <= 100; ++n) CHECK(std::abs(t[n] - static_cast<double>(c.want[n])) < 1e-10);
  }
}

TEST_CASE("binomial thinning route agrees with contour") {
  const auto base = Pgf::closed_form(DistributionSpec::sibuya(0.5));
  const auto t = pgf_thin(pgf_compound(base, Pgf::closed_form(DistributionSpec::sibuya(0.7))), 0.3);
  const auto a = pgf_coefficients(t, 40);
  const auto b = pgf_coefficients(t, 40, CoefficientMethod::contour);
  for (int n = 0; n <= 40; ++n) CHECK(std::abs(a[n] - b[n]) < 1e-10);
}

TEST_CASE("pgf evaluations are monotone on [0, 1]") {
  const std::vector<Pgf> pgfs = {
      Pgf::closed_form(DistributionSpec::sibuya(0.3)),
      Pgf::closed_form(DistributionSpec::generalized_sibuya(1.0, 0.5)),
      Pgf::closed_form(DistributionSpec::zero_inflated_log(0.9)),
      pgf_thin(Pgf::closed_form(DistributionSpec::mittag_leffler(2.0, 0.4)), 3.0),
  };
  for (const auto& q : pgfs) {
    double prev = -1.0;
    for (double w : grid(101)) {
      const double v = q(w);
      CHECK(v >= prev - 1e-15);
      prev = v;
    }
    CHECK(q(1.0) == doctest::Approx(1.0).epsilon(1e-10));
  }
}

TEST_CASE("mixture g-function for a gamma density is the NBD g") {
  const double q = 0.5, k = 2.0;
  const auto m = gamma_mixture(k, (1.0 - q) / q);
  CHECK(mixture_g(m, 0) == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(mixture_g(m, 3) == doctest::Approx(2.5).epsilon(1e-9));
}

TEST_CASE("mixture g-function for the shifted Sibuya density") {
  CHECK(mixture_g(shifted_sibuya_mixture(0.5), 2) == doctest::Approx(1.875).epsilon(1e-6));
  for (double gamma : {0.25, 0.5, 0.75}) {
    const auto m = shifted_sibuya_mixture(gamma);
    CHECK(mixture_mass(m) == doctest::Approx(1.0).epsilon(1e-8));
    for (int n = 0; n <= 30; ++n) {
      CAPTURE(gamma);
      CAPTURE(n);
      const double want = (n + 1.0) * (n + 1.0 - gamma) / (n + 2.0);
      CHECK(mixture_g(m, n) == doctest::Approx(want).epsilon(1e-6));
    }
  }
}

TEST_CASE("narrow gamma mixture tends to the Poisson g") {
  double prev_err = 1e300;
  for (double shape : {1e2, 1e4, 1e6}) {
    const auto m = gamma_mixture(shape, shape / 2.0);
    const double err = std::abs(mixture_g(m, 3) - 2.0);
    CHECK(err < prev_err);
    prev_err = err;
  }
  CHECK(prev_err < 1e-4);
}

TEST_CASE("mixture rescaling") {
  const auto m = gamma_mixture(2.0, 1.0);
  const auto same = mixture_rescale(m, 1.0);
  CHECK(same.density(0.7) == m.density(0.7));

  const auto q = mixture_pgf(m);
  const auto qb = mixture_pgf(mixture_rescale(m, 0.5));
  for (double w : grid(20)) CHECK(std::abs(qb(w) - q(0.5 * w) / q(0.5)) < 1e-9);

  const double gamma = 0.5;
  const auto sh = Pgf::closed_form(DistributionSpec::shifted_sibuya(gamma));
  const auto rb = mixture_pgf(mixture_rescale(shifted_sibuya_mixture(gamma), 0.8));
  for (double w : grid(20)) CHECK(std::abs(rb(w) - sh(0.8 * w) / sh(0.8)) < 1e-8);
}

TEST_CASE("mixture thinning by a > 1 stays a mixture") {
  const auto q = mixture_pgf(gamma_mixture(2.0, 1.0));
  const auto t = pgf_thin(q, 2.0);
  CHECK(t.kind() == PgfKind::mixture);
  // gamma(2, 1) mixture is NBD(q = 1/2, k = 2); thinning by 2 gives q = 2/3
  const auto want = Pgf::closed_form(DistributionSpec::nbd_q(2.0 / 3.0, 2.0));
  for (double w : grid(6)) CHECK(std::abs(t(w) - want(w)) < 1e-9);
}

TEST_CASE("negative mixture density is rejected") {
  LaplaceMixture bad;
  bad.density = [](double x) { return x < 1.0 ? -0.1 : std::exp(-x); };
  CHECK_THROWS_AS(mixture_mass(bad), DomainError);
}

TEST_CASE("composition with an inner constant term agrees with contour") {
  const auto outer = Pgf::closed_form(DistributionSpec::nbd_q(0.3, 2.0));
  const auto inner = pgf_thin(Pgf::closed_form(DistributionSpec::sibuya(0.6)), 0.4);
  const auto g = pgf_compound(outer, inner);
  const auto a = pgf_coefficients(g, 40);
  CHECK(a.provenance == "shifted_series_composition");
  const auto b = pgf_coefficients(g, 40, CoefficientMethod::contour);
  for (int n = 0; n <= 40; ++n) CHECK(std::abs(a[n] - b[n]) < 1e-11);
  // thinning a composition thins the inner pgf
  const auto t = pgf_coefficients(pgf_thin(pgf_compound(outer, Pgf::closed_form(DistributionSpec::sibuya(0.6))), 0.4), 40);
  for (int n = 0; n <= 40; ++n) CHECK(std::abs(t[n] - a[n]) < 1e-14);
}

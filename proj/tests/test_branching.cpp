#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "sibuya/branching.hpp"
#include "sibuya/distributions.hpp"
#include "sibuya/errors.hpp"

using namespace sibuya;

namespace {

PmfTable geometric_half(int n) {
  PmfTable t;
  for (int k = 0; k <= n; ++k) t.probs.push_back(std::ldexp(1.0, -k - 1));
  t.tail_mass = std::ldexp(1.0, -n - 1);
  return t;
}

}  // namespace

TEST_CASE("offspring from extended Sibuya progeny matches the closed form") {
  for (auto [b, gamma] : {std::pair{0.9, 0.6}, {0.5, 0.5}, {0.7, 0.8}, {1.0, 0.75}}) {
    const auto h = offspring_from_progeny(Pgf::closed_form(DistributionSpec::extended_sibuya(b, gamma)), 80);
    CAPTURE(b);
    CAPTURE(gamma);
    CHECK(h.negative_indices.empty());
    REQUIRE(h.reliable_order >= 25);
    const auto exact = progeny_sign_diagnosis(b, gamma, 80).coefficients;
    for (int k = 0; k <= 80; ++k) CHECK(std::abs(h.coefficients[k] - exact[k]) <= h.noise[k]);
    // power-law offspring tail at b = 1 needs far more terms near u = 1
    const double u_max = b < 1.0 ? 0.9 : 0.5;
    const std::vector<double> kept(h.coefficients.begin(), h.coefficients.begin() + h.reliable_order + 1);
    for (int i = 0; i <= 9; ++i) {
      const double u = u_max * i / 9.0;
      CHECK(std::abs(series::eval(kept, u) - extended_offspring(u, b, gamma)) < 1e-8);
    }
  }
}

TEST_CASE("offspring of trivial and Sibuya(1/2) progeny") {
  const auto one = offspring_from_progeny(Pgf::identity(), 20);
  CHECK(one.coefficients[0] == doctest::Approx(1.0).epsilon(1e-15));
  for (int k = 1; k <= 20; ++k) CHECK(std::abs(one.coefficients[k]) < 1e-15);
  CHECK(one.reliable_order == 20);

  const auto geo = offspring_from_progeny(Pgf::closed_form(DistributionSpec::sibuya(0.5)), 60);
  CHECK(geo.negative_indices.empty());
  // Q^{-1}(u) = 2u - u^2 here, and reversion loses about a factor 3 per order
  REQUIRE(geo.reliable_order >= 10);
  for (int k = 0; k <= 60; ++k) CHECK(std::abs(geo.coefficients[k] - std::ldexp(1.0, -k - 1)) <= geo.noise[k]);
  for (int k = 0; k <= 10; ++k) CHECK(geo.coefficients[k] == doctest::Approx(std::ldexp(1.0, -k - 1)).epsilon(1e-9));
}

TEST_CASE("reversion reports negative offspring coefficients") {
  // Sibuya(gamma) with gamma < 1/2 is not a progeny law
  const auto h = offspring_from_progeny(Pgf::closed_form(DistributionSpec::sibuya(0.3)), 30);
  REQUIRE_FALSE(h.negative_indices.empty());
  CHECK(h.negative_indices.front() == *progeny_sign_diagnosis(1.0, 0.3, 30).first_negative);
}

TEST_CASE("inversion needs p_1 > 0") {
  PmfTable t;
  t.probs = {0.0, 0.0, 1.0};
  CHECK_THROWS_AS(offspring_from_progeny(Pgf::series(t), 10), InversionError);
  CHECK_THROWS_AS(offspring_from_progeny(Pgf::closed_form(DistributionSpec::poisson(1.0)), 10), InversionError);
}

TEST_CASE("reverted series composes back to the identity") {
  const auto q = pgf_coefficients(Pgf::closed_form(DistributionSpec::extended_sibuya(0.8, 0.7)), 81);
  std::vector<double> a = q.probs;
  a[0] = 0.0;
  const auto g = series::revert(a, 80);
  const auto id = series::compose(a, g, 80);
  CHECK(std::abs(id[1] - 1.0) < 1e-9);
  for (int k = 2; k <= 80; ++k) CHECK(std::abs(id[k]) < 1e-9);
}

TEST_CASE("sign diagnosis examples") {
  for (double b : {0.3, 0.8}) {
    const auto d = progeny_sign_diagnosis(b, -1.0, 40);
    CHECK(d.is_progeny_evidence);
    const double c = 1.0 - 1.0 / (1.0 - b);
    CHECK(d.coefficients[0] == doctest::Approx(-b / c).epsilon(1e-14));
    CHECK(d.coefficients[1] == doctest::Approx(b).epsilon(1e-14));
    for (int k = 2; k <= 40; ++k) CHECK(std::abs(d.coefficients[k]) < 1e-14 * std::pow(std::abs(c), k));
  }
  const auto neg = progeny_sign_diagnosis(0.8, -1.5, 20);
  REQUIRE(neg.first_negative.has_value());
  CHECK(*neg.first_negative == 2);
  CHECK_FALSE(neg.is_progeny_evidence);
  CHECK(progeny_sign_diagnosis(0.9, 0.6, 100).is_progeny_evidence);
}

TEST_CASE("sign diagnosis: leading coefficients of the expansion") {
  for (auto [b, gamma] : {std::pair{0.6, -0.5}, {0.8, 0.3}, {0.5, -2.0}}) {
    const double c = 1.0 - std::pow(1.0 - b, gamma);
    const auto d = progeny_sign_diagnosis(b, gamma, 5);
    CHECK(d.coefficients[0] == doctest::Approx(b * gamma / c).epsilon(1e-13));
    CHECK(d.coefficients[1] == doctest::Approx(-0.5 * b * (gamma - 1.0)).epsilon(1e-13));
    CHECK(d.coefficients[2] == doctest::Approx(-b * c * (gamma * gamma - 1.0) / (12.0 * gamma)).epsilon(1e-13));
    CHECK(d.coefficients[3] == doctest::Approx(-b * c * c * (gamma * gamma - 1.0) / (24.0 * gamma)).epsilon(1e-13));
  }
  const double b = 0.7, l = std::log(1.0 - b);
  const auto d0 = progeny_sign_diagnosis(b, 0.0, 5);
  CHECK(d0.coefficients[0] == doctest::Approx(-b / l).epsilon(1e-14));
  CHECK(d0.coefficients[1] == doctest::Approx(b / 2.0).epsilon(1e-14));
  CHECK(d0.coefficients[2] == doctest::Approx(-b * l / 12.0).epsilon(1e-14));
  CHECK(std::abs(d0.coefficients[3]) < 1e-15);
  CHECK(d0.coefficients[4] == doctest::Approx(b * l * l * l / 720.0).epsilon(1e-13));
}

TEST_CASE("sign pattern over the parameter grid") {
  for (double gamma : {-2.0, -1.5, -1.0, -0.5, 0.0, 0.25, 0.4, 0.5, 0.7, 0.9}) {
    for (double b : {0.5, 0.8, 1.0}) {
      if (b == 1.0 && gamma <= 0.0) continue;
      CAPTURE(gamma);
      CAPTURE(b);
      const auto d = progeny_sign_diagnosis(b, gamma, 200);
      if (gamma < -1.0) {
        CHECK(d.first_negative == 2);
      } else if (gamma == -1.0) {
        CHECK(d.is_progeny_evidence);
      } else if (gamma < 0.0) {
        CHECK(d.first_negative == 3);
      } else if (gamma == 0.0) {
        CHECK(d.first_negative == 4);
      } else if (gamma < 0.5) {
        CHECK_FALSE(d.is_progeny_evidence);
      } else {
        CHECK(d.is_progeny_evidence);
      }
    }
  }
}

TEST_CASE("offspring moments") {
  const auto [m, s] = offspring_moments(0.5, 0.5);
  const double h = 1e-4;
  auto H = [](double u) { return extended_offspring(u, 0.5, 0.5); };
  CHECK(oracle::rel_err(m, (H(1.0 + h) - H(1.0 - h)) / (2.0 * h)) < 1e-6);
  CHECK(oracle::rel_err(s, (H(1.0 + h) - 2.0 * H(1.0) + H(1.0 - h)) / (h * h)) < 1e-5);
  CHECK(m < 1.0);

  for (double gamma : {-1.5, -0.5, 0.3, 0.5, 0.8}) {
    const auto [m1, s1] = offspring_moments(gamma > 0.0 ? 1.0 : 1.0 - 1e-12, gamma);
    CHECK(m1 == doctest::Approx(1.0).epsilon(1e-6));
    if (gamma > 0.0 && gamma < 0.5) CHECK(s1 == 0.0);
    if (gamma > 0.5) CHECK(std::isinf(s1));
  }
  // geometric offspring 1/(2 - u) at gamma = 1/2, b = 1
  CHECK(offspring_moments(1.0, 0.5).second == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(offspring_moments(1.0 - 1e-10, 0.4).second < offspring_moments(1.0 - 1e-6, 0.4).second);
  CHECK_THROWS_AS(offspring_moments(0.5, 0.0), DomainError);
}

TEST_CASE("fixed point and monotone iteration") {
  const double b = 0.9, gamma = 0.6;
  const auto q = Pgf::closed_form(DistributionSpec::extended_sibuya(b, gamma));
  for (int i = 0; i <= 19; ++i) {
    const double w = 0.05 * i;
    const double qw = q(w);
    CHECK(std::abs(qw - w * extended_offspring(qw, b, gamma)) < 1e-9);
    // Y_n grows with n, so Q_n(w) = E w^{Y_n} can only decrease
    double prev = w * extended_offspring(w, b, gamma);
    for (int n = 2; n <= 200; ++n) {
      const double next = w * extended_offspring(prev, b, gamma);
      CHECK(next <= prev + 1e-15);
      prev = next;
    }
    CHECK(std::abs(prev - qw) < 1e-9);
  }
}

TEST_CASE("simulated progeny") {
  const auto single = simulate_progeny(branching_model(PmfTable{{1.0}}), 1000, 7);
  CHECK(single.progeny[1] == 1.0);
  CHECK(single.budget_hits == 0);

  const auto geo = branching_model(geometric_half(60));
  CHECK(geo.criticality == Criticality::critical);
  const auto sim = simulate_progeny(geo, 100000, 11);
  const auto want = pmf_table(DistributionSpec::sibuya(0.5), 50);
  std::vector<double> a(sim.progeny.probs.begin(), sim.progeny.probs.begin() + 51);
  CHECK(total_variation(a, want.probs) < 0.02);
  const auto again = simulate_progeny(geo, 100000, 11);
  CHECK(again.progeny.probs == sim.progeny.probs);

  const auto ext = extended_branching_model(0.9, 0.6);
  CHECK(ext.criticality == Criticality::subcritical);
  CHECK(ext.offspring.tail_mass < 1e-12);
  const auto es = simulate_progeny(ext, 100000, 3);
  const auto ew = pmf_table(DistributionSpec::extended_sibuya(0.9, 0.6), static_cast<long>(es.progeny.size()) - 1);
  CHECK(total_variation(es.progeny.probs, ew.probs) < 0.02);
}

TEST_CASE("progeny simulation guards") {
  PmfTable super;
  super.probs = {0.1, 0.2, 0.7};
  CHECK_THROWS_AS(simulate_progeny(branching_model(super), 10, 1), DomainError);
  CHECK_THROWS_AS(simulate_progeny(branching_model(geometric_half(60)), 2000, 1, 3), BudgetError);
  CHECK_THROWS_AS(extended_branching_model(0.9, 0.3), DomainError);
}

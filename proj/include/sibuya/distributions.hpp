#ifndef SIBUYA_DISTRIBUTIONS_HPP
#define SIBUYA_DISTRIBUTIONS_HPP

#include <optional>
#include <string>

#include "sibuya/gf.hpp"
#include "sibuya/numeric.hpp"
#include "sibuya/spec.hpp"

namespace sibuya {

double pmf(const DistributionSpec& spec, long n);
/// Closed form where one exists, otherwise series arithmetic on the pgf.
PmfTable pmf_table(const DistributionSpec& spec, long n_max);
/// Table built purely from g_function and the first support point.
PmfTable recurrence_table(const DistributionSpec& spec, long n_max);

GFunction g_function(const DistributionSpec& spec);
/// Smallest n with p_n > 0.
long support_floor(const DistributionSpec& spec);
/// Power-law index of the tail p_n ~ n^{-1-index}, when the tail is heavy.
std::optional<double> tail_index(const DistributionSpec& spec);

cdouble closed_form_pgf(const DistributionSpec& spec, cdouble w);
/// 1 - Q(w) for real w in [0, 1].
double closed_form_complement(const DistributionSpec& spec, double w);
double analytic_radius(const DistributionSpec& spec);
/// Families for which Q(1 - a + a w) stays a pgf for every a > 0.
bool laplace_whitelisted(const DistributionSpec& spec);
/// Same family with thinned parameters, for families closed under thinning.
std::optional<DistributionSpec> thinned_spec(const DistributionSpec& spec, double a);

/// Gauss 2F1 pgf of the generalized Sibuya law.
cdouble generalized_sibuya_pgf(double nu, double gamma, cdouble w);

// Laplace-mixture densities.
LaplaceMixture gamma_mixture(double shape, double rate);
/// f(x) = -e^x Gamma(-gamma, x) / Gamma(-gamma); induces the shifted Sibuya pgf.
LaplaceMixture shifted_sibuya_mixture(double gamma);

/// One-sided stable density via the Pollard series.
class PollardDensity {
 public:
  PollardDensity(double gamma, int max_terms = 500);

  /// Standard density g_gamma(x); extrapolated below x_min().
  double operator()(double x) const;
  double x_min() const noexcept { return x_min_; }
  bool low_accuracy(double x) const noexcept { return x < x_min_; }
  /// Series value with its largest-term / |sum| ratio.
  double series(double x, double* cancellation = nullptr) const;

 private:
  double gamma_;
  int max_terms_;
  double x_min_ = 0.0;
  double y0_ = 0.0, y1_ = 0.0, h_ = 0.0;
};

/// f(x) = lambda^{-1/gamma} g_gamma(lambda^{-1/gamma} x).
LaplaceMixture discrete_stable_mixture(double lambda, double gamma, int series_terms = 500);

enum class Ternary { yes, no, unknown };
std::string to_string(Ternary t);

struct InfDivisibilityReport {
  DistributionSpec spec;
  Ternary infinitely_divisible = Ternary::unknown;
  Ternary self_decomposable = Ternary::unknown;
  std::string source;
};

InfDivisibilityReport divisibility_report(const DistributionSpec& spec);

}  // namespace sibuya

#endif  // SIBUYA_DISTRIBUTIONS_HPP

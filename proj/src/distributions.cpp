#include "sibuya/distributions.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <mutex>
#include <numbers>
#include <sstream>

#include "sibuya/errors.hpp"

namespace sibuya {
namespace {

constexpr double kHugeRadius = 1e300;

/// 1 - (1-x)^gamma without cancellation at small x.
cdouble sibuya_s(double gamma, cdouble x) {
  if (x == 1.0) return gamma > 0.0 ? 1.0 : -std::numeric_limits<double>::infinity();
  return -expm1(gamma * log1p(-x));
}

double sibuya_c(double b, double gamma) { return -std::expm1(gamma * std::log1p(-b)); }

/// gamma Gamma(n-gamma) / (Gamma(1-gamma) n!), the Sibuya coefficient; for
/// gamma < 0 it carries the sign of gamma.
double sibuya_coeff(double gamma, long n) {
  if (n <= 0) return 0.0;
  const double l = std::lgamma(n - gamma) - std::lgamma(1.0 - gamma) - std::lgamma(n + 1.0);
  return gamma * std::exp(l);
}

/// s_1..s_N by the product recurrence; exact for gamma = 1.
std::vector<double> sibuya_series(double gamma, std::size_t n, double b = 1.0) {
  std::vector<double> s(n + 1, 0.0);
  if (n == 0) return s;
  s[1] = gamma * b;
  for (std::size_t k = 1; k < n; ++k) s[k + 1] = s[k] * b * (k - gamma) / (k + 1.0);
  return s;
}

double log_theta_norm(double theta) { return -std::log1p(-theta); }

double cmp_norm(double theta) { return std::cyl_bessel_i(0.0, 2.0 * std::sqrt(theta)); }

cdouble cmp_series(double theta, cdouble w) {
  const cdouble x = theta * w;
  cdouble term = 1.0, sum = 1.0;
  for (int n = 1; n < 100000; ++n) {
    term *= x / (static_cast<double>(n) * n);
    sum += term;
    if (std::abs(term) < 1e-17 * std::abs(sum) && n > std::abs(x)) break;
  }
  return sum;
}

bool is_series_family(Family f) {
  return f == Family::discrete_stable || f == Family::mittag_leffler || f == Family::four_param;
}

std::vector<double> series_family_table(const DistributionSpec& spec, std::size_t n) {
  const Params& p = spec.params();
  switch (spec.family()) {
    case Family::discrete_stable: {
      auto s = sibuya_series(p.gamma, n);
      for (double& v : s) v *= p.lambda;
      auto e = series::exp(s, n);
      const double scale = std::exp(-p.lambda);
      for (double& v : e) v *= scale;
      return e;
    }
    case Family::mittag_leffler: {
      const auto s = sibuya_series(p.gamma, n);
      const double r = p.lambda / (1.0 + p.lambda);
      std::vector<double> c(n + 1, 0.0);
      c[0] = 1.0 / (1.0 + p.lambda);
      for (std::size_t m = 1; m <= n; ++m) {
        CompensatedSum acc;
        for (std::size_t k = 1; k <= m; ++k) acc.add(s[k] * c[m - k]);
        c[m] = r * acc.value();
      }
      return c;
    }
    case Family::four_param: {
      const auto t = sibuya_series(p.gamma, n, p.b);
      const auto u = series::power(t, p.ell, n);
      const int k = static_cast<int>(p.k);
      std::vector<double> q(n + 1, 0.0);
      std::vector<double> uj{1.0};
      for (int j = 1; j <= k; ++j) {
        uj = series::multiply(uj, u, n);
        const double coef = std::tgamma(k + 1.0) / (std::tgamma(j + 1.0) * std::tgamma(k - j + 1.0)) *
                            ((j % 2 == 1) ? 1.0 : -1.0);
        for (std::size_t i = 0; i <= n; ++i) q[i] += coef * uj[i];
      }
      const double c = sibuya_c(p.b, p.gamma);
      const double norm = 1.0 - std::pow(1.0 - std::pow(c, p.ell), k);
      for (double& v : q) v /= norm;
      return q;
    }
    default:
      throw UnsupportedError("not a series-defined family");
  }
}

double closed_pmf(const DistributionSpec& spec, long n) {
  const Params& p = spec.params();
  const double dn = static_cast<double>(n);
  switch (spec.family()) {
    case Family::sibuya:
      return sibuya_coeff(p.gamma, n);
    case Family::scaled_sibuya:
      return n == 0 ? 1.0 - p.lambda : p.lambda * sibuya_coeff(p.gamma, n);
    case Family::shifted_sibuya:
      return sibuya_coeff(p.gamma, n + 1);
    case Family::generalized_sibuya:
    case Family::shifted_generalized_sibuya: {
      const long m = spec.family() == Family::generalized_sibuya ? n : n + 1;
      if (m < 1) return 0.0;
      const double l = std::lgamma(p.nu + 1.0) + std::lgamma(m + p.nu - p.gamma) -
                       std::lgamma(1.0 + p.nu - p.gamma) - std::lgamma(m + p.nu + 1.0);
      return p.gamma * std::exp(l);
    }
    case Family::extended_sibuya:
    case Family::shifted_extended_sibuya: {
      const long m = spec.family() == Family::extended_sibuya ? n : n + 1;
      if (m < 1) return 0.0;
      const double c = sibuya_c(p.b, p.gamma);
      const double l = m * std::log(p.b) + std::lgamma(m - p.gamma) - std::lgamma(1.0 - p.gamma) -
                       std::lgamma(m + 1.0);
      return p.gamma / c * std::exp(l);
    }
    case Family::zero_truncated_nbd: {
      if (n < 1) return 0.0;
      const double gamma = -p.k;
      const double c = sibuya_c(p.q, gamma);
      const double l = dn * std::log(p.q) + std::lgamma(dn - gamma) - std::lgamma(1.0 - gamma) -
                       std::lgamma(dn + 1.0);
      return gamma / c * std::exp(l);
    }
    case Family::nbd:
    case Family::geometric: {
      const double l = std::lgamma(dn + p.k) - std::lgamma(p.k) - std::lgamma(dn + 1.0) +
                       p.k * std::log1p(-p.q) + dn * std::log(p.q);
      return std::exp(l);
    }
    case Family::poisson:
      return std::exp(-p.lambda + dn * std::log(p.lambda) - std::lgamma(dn + 1.0));
    case Family::bernoulli:
      return n == 0 ? 1.0 - p.a : (n == 1 ? p.a : 0.0);
    case Family::logarithmic:
      if (n < 1) return 0.0;
      return std::exp(dn * std::log(p.theta)) / (dn * log_theta_norm(p.theta));
    case Family::zero_inflated_log:
      return std::exp((dn + 1.0) * std::log(p.theta)) / ((dn + 1.0) * log_theta_norm(p.theta));
    case Family::cmp2:
      return std::exp(dn * std::log(p.theta) - 2.0 * std::lgamma(dn + 1.0)) / cmp_norm(p.theta);
    default:
      throw UnsupportedError("no closed-form pmf");
  }
}

/// Black-box g from a growing cache of the series table.
class SeriesG {
 public:
  explicit SeriesG(DistributionSpec spec) : spec_(std::move(spec)) {}
  double operator()(long n) {
    std::lock_guard<std::mutex> lock(mu_);
    if (static_cast<std::size_t>(n) + 1 >= table_.size()) {
      std::size_t size = std::max<std::size_t>(256, 2 * (n + 2));
      table_ = series_family_table(spec_, size);
    }
    if (table_[n] <= 0.0) return 0.0;
    return (n + 1.0) * table_[n + 1] / table_[n];
  }

 private:
  DistributionSpec spec_;
  std::mutex mu_;
  std::vector<double> table_;
};

}  // namespace

// ------------------------------------------------------------------ pmf

double pmf(const DistributionSpec& spec, long n) {
  if (n < 0) return 0.0;
  if (is_series_family(spec.family())) return series_family_table(spec, n)[n];
  return closed_pmf(spec, n);
}

PmfTable pmf_table(const DistributionSpec& spec, long n_max) {
  if (n_max < 0) throw ParameterError("n_max must be >= 0");
  PmfTable t;
  if (is_series_family(spec.family())) {
    t.probs = series_family_table(spec, n_max);
    for (double& v : t.probs) v = std::max(v, 0.0);
    t.provenance = "series";
  } else {
    t.probs.resize(n_max + 1);
    for (long n = 0; n <= n_max; ++n) t.probs[n] = closed_pmf(spec, n);
    t.provenance = "closed_form";
  }
  t.tail_mass = std::max(0.0, 1.0 - t.sum());
  if (auto idx = tail_index(spec)) t.tail_exponent = 1.0 + *idx;
  return t;
}

PmfTable recurrence_table(const DistributionSpec& spec, long n_max) {
  const long floor = support_floor(spec);
  PmfTable t = table_from_g(g_function(spec), floor, pmf(spec, floor), n_max);
  if (auto idx = tail_index(spec)) t.tail_exponent = 1.0 + *idx;
  return t;
}

long support_floor(const DistributionSpec& spec) {
  const Params& p = spec.params();
  switch (spec.family()) {
    case Family::sibuya:
    case Family::generalized_sibuya:
    case Family::extended_sibuya:
    case Family::logarithmic:
    case Family::zero_truncated_nbd:
      return 1;
    case Family::scaled_sibuya:
      return p.lambda < 1.0 ? 0 : 1;
    case Family::four_param:
      return p.ell;
    default:
      return 0;
  }
}

std::optional<double> tail_index(const DistributionSpec& spec) {
  const Params& p = spec.params();
  switch (spec.family()) {
    case Family::sibuya:
    case Family::scaled_sibuya:
    case Family::shifted_sibuya:
    case Family::generalized_sibuya:
    case Family::shifted_generalized_sibuya:
      return p.gamma;
    case Family::extended_sibuya:
    case Family::shifted_extended_sibuya:
      if (p.b == 1.0) return p.gamma;
      return std::nullopt;
    case Family::discrete_stable:
    case Family::mittag_leffler:
      if (p.gamma < 1.0) return p.gamma;
      return std::nullopt;
    case Family::four_param:
      if (p.b == 1.0 && p.k * p.gamma < 1.0) return p.k * p.gamma;
      return std::nullopt;
    default:
      return std::nullopt;
  }
}

// ------------------------------------------------------------ g-functions

GFunction g_function(const DistributionSpec& spec) {
  const Params& p = spec.params();
  const double g = p.gamma;
  switch (spec.family()) {
    case Family::sibuya:
      return GFunction::rational({-g, 1.0}, {1.0});
    case Family::scaled_sibuya: {
      const double g0 = p.lambda < 1.0 ? p.lambda * g / (1.0 - p.lambda) : 0.0;
      return GFunction::black_box([g0, g](long n) { return n == 0 ? g0 : n - g; });
    }
    case Family::shifted_sibuya:
      return GFunction::rational({1.0 - g, 2.0 - g, 1.0}, {2.0, 1.0});
    case Family::generalized_sibuya:
      return GFunction::rational({p.nu - g, 1.0 + p.nu - g, 1.0}, {p.nu + 1.0, 1.0});
    case Family::shifted_generalized_sibuya:
      return GFunction::rational({1.0 + p.nu - g, 2.0 + p.nu - g, 1.0}, {p.nu + 2.0, 1.0});
    case Family::extended_sibuya:
      return GFunction::rational({-p.b * g, p.b}, {1.0});
    case Family::shifted_extended_sibuya:
      return GFunction::rational({p.b * (1.0 - g), p.b * (2.0 - g), p.b}, {2.0, 1.0});
    case Family::nbd:
    case Family::geometric:
    case Family::zero_truncated_nbd:
      return GFunction::rational({p.q * p.k, p.q}, {1.0});
    case Family::poisson:
      return GFunction::rational({p.lambda}, {1.0});
    case Family::bernoulli: {
      const double r = p.a / (1.0 - p.a);
      return GFunction::rational({r, -r}, {1.0});
    }
    case Family::logarithmic:
      return GFunction::rational({0.0, p.theta}, {1.0});
    case Family::zero_inflated_log:
      return GFunction::rational({p.theta, 2.0 * p.theta, p.theta}, {2.0, 1.0});
    case Family::cmp2:
      return GFunction::rational({p.theta}, {1.0, 1.0});
    case Family::discrete_stable:
    case Family::mittag_leffler:
    case Family::four_param: {
      auto state = std::make_shared<SeriesG>(spec);
      return GFunction::black_box([state](long n) { return (*state)(n); });
    }
  }
  throw UnsupportedError("no g-function for " + spec.describe());
}

// ------------------------------------------------------------------- pgfs

cdouble generalized_sibuya_pgf(double nu, double gamma, cdouble w) {
  if (w == 1.0) return 1.0;
  const bool near_integer = std::abs(gamma - std::round(gamma)) < 1e-6;
  const cdouble x = 1.0 - w;
  if (std::abs(x) < 0.5 && !near_integer) {
    const std::array<cdouble, 2> a{1.0, nu - gamma + 1.0};
    const std::array<cdouble, 1> b{1.0 - gamma};
    const cdouble f = hypergeometric_pfq(a, b, x);
    const double k = std::tgamma(nu + 1.0) * std::tgamma(1.0 - gamma) / std::tgamma(nu + 1.0 - gamma);
    return w * f - k * std::pow(x, gamma) * std::pow(w, -nu);
  }
  const std::array<cdouble, 2> a{1.0, nu - gamma + 1.0};
  const std::array<cdouble, 1> b{nu + 2.0};
  return w * gamma / (nu + 1.0) * hypergeometric_pfq(a, b, w);
}

cdouble closed_form_pgf(const DistributionSpec& spec, cdouble w) {
  const Params& p = spec.params();
  const double g = p.gamma;
  const bool near0 = std::abs(w) < 1e-8;
  switch (spec.family()) {
    case Family::sibuya:
      return sibuya_s(g, w);
    case Family::scaled_sibuya:
      return 1.0 - p.lambda + p.lambda * sibuya_s(g, w);
    case Family::shifted_sibuya:
      if (near0) return g + g * (1.0 - g) / 2.0 * w;
      return sibuya_s(g, w) / w;
    case Family::generalized_sibuya:
      return generalized_sibuya_pgf(p.nu, g, w);
    case Family::shifted_generalized_sibuya: {
      if (near0) {
        const double p1 = g / (p.nu + 1.0);
        return p1 + p1 * (1.0 + p.nu - g) / (p.nu + 2.0) * w;
      }
      return generalized_sibuya_pgf(p.nu, g, w) / w;
    }
    case Family::extended_sibuya:
      return sibuya_s(g, p.b * w) / sibuya_c(p.b, g);
    case Family::shifted_extended_sibuya: {
      const double c = sibuya_c(p.b, g);
      if (near0) {
        const double p1 = p.b * g / c;
        return p1 + p1 * p.b * (1.0 - g) / 2.0 * w;
      }
      return sibuya_s(g, p.b * w) / c / w;
    }
    case Family::zero_truncated_nbd:
      return sibuya_s(-p.k, p.q * w) / sibuya_c(p.q, -p.k);
    case Family::discrete_stable:
      if (w == 1.0) return 1.0;
      return std::exp(-p.lambda * std::exp(g * log1p(-w)));
    case Family::mittag_leffler:
      if (w == 1.0) return 1.0;
      return 1.0 / (1.0 + p.lambda * std::exp(g * log1p(-w)));
    case Family::nbd:
    case Family::geometric:
      return std::exp(-p.k * log1p(p.q * (1.0 - w) / (1.0 - p.q)));
    case Family::poisson:
      return std::exp(p.lambda * (w - 1.0));
    case Family::bernoulli:
      return 1.0 - p.a + p.a * w;
    case Family::logarithmic:
      return log1p(-p.theta * w) / std::log1p(-p.theta);
    case Family::zero_inflated_log: {
      const double l = log_theta_norm(p.theta);
      if (near0) return p.theta / l + p.theta * p.theta / (2.0 * l) * w;
      return -log1p(-p.theta * w) / (l * w);
    }
    case Family::cmp2:
      return cmp_series(p.theta, w) / cmp_norm(p.theta);
    case Family::four_param: {
      const cdouble t = sibuya_s(g, p.b * w);
      const double c = sibuya_c(p.b, g);
      const double norm = 1.0 - std::pow(1.0 - std::pow(c, p.ell), p.k);
      return (1.0 - std::pow(1.0 - std::pow(t, p.ell), p.k)) / norm;
    }
  }
  return 0.0;
}

double closed_form_complement(const DistributionSpec& spec, double w) {
  const Params& p = spec.params();
  const double g = p.gamma;
  const double x = 1.0 - w;
  auto ext = [&](double b, double gamma) {
    if (b == 1.0) return std::pow(x, gamma);
    const double lead = std::exp(gamma * std::log1p(-b));
    return lead * std::expm1(gamma * std::log1p(b * x / (1.0 - b))) / sibuya_c(b, gamma);
  };
  switch (spec.family()) {
    case Family::sibuya:
      return std::pow(x, g);
    case Family::scaled_sibuya:
      return p.lambda * std::pow(x, g);
    case Family::shifted_sibuya:
      if (w < 1e-8) return 1.0 - closed_form_pgf(spec, w).real();
      return (std::pow(x, g) - x) / w;
    case Family::extended_sibuya:
      return ext(p.b, g);
    case Family::shifted_extended_sibuya:
      if (w < 1e-8) return 1.0 - closed_form_pgf(spec, w).real();
      return (ext(p.b, g) - x) / w;
    case Family::zero_truncated_nbd:
      return ext(p.q, -p.k);
    case Family::discrete_stable:
      return -std::expm1(-p.lambda * std::pow(x, g));
    case Family::mittag_leffler: {
      const double v = p.lambda * std::pow(x, g);
      return v / (1.0 + v);
    }
    case Family::nbd:
    case Family::geometric:
      return -std::expm1(-p.k * std::log1p(p.q * x / (1.0 - p.q)));
    case Family::poisson:
      return -std::expm1(-p.lambda * x);
    case Family::bernoulli:
      return p.a * x;
    default:
      return 1.0 - closed_form_pgf(spec, w).real();
  }
}

double analytic_radius(const DistributionSpec& spec) {
  const Params& p = spec.params();
  switch (spec.family()) {
    case Family::extended_sibuya:
    case Family::shifted_extended_sibuya:
    case Family::four_param:
      return 1.0 / p.b;
    case Family::nbd:
    case Family::geometric:
    case Family::zero_truncated_nbd:
      return 1.0 / p.q;
    case Family::logarithmic:
    case Family::zero_inflated_log:
      return 1.0 / p.theta;
    case Family::poisson:
    case Family::bernoulli:
    case Family::cmp2:
      return kHugeRadius;
    case Family::discrete_stable:
    case Family::mittag_leffler:
      return p.gamma == 1.0 ? (spec.family() == Family::discrete_stable
                                   ? kHugeRadius
                                   : (1.0 + p.lambda) / p.lambda)
                            : 1.0;
    default:
      return 1.0;
  }
}

bool laplace_whitelisted(const DistributionSpec& spec) {
  switch (spec.family()) {
    case Family::nbd:
    case Family::geometric:
    case Family::poisson:
    case Family::discrete_stable:
    case Family::mittag_leffler:
    case Family::shifted_sibuya:
    case Family::shifted_extended_sibuya:
      return true;
    default:
      return false;
  }
}

std::optional<DistributionSpec> thinned_spec(const DistributionSpec& spec, double a) {
  const Params& p = spec.params();
  switch (spec.family()) {
    case Family::poisson:
      return DistributionSpec::poisson(a * p.lambda);
    case Family::nbd:
      return DistributionSpec::nbd_mean(a * p.mean, p.k);
    case Family::geometric:
      return DistributionSpec::geometric(a * p.lambda);
    case Family::discrete_stable:
      return DistributionSpec::discrete_stable(std::pow(a, p.gamma) * p.lambda, p.gamma);
    case Family::mittag_leffler:
      return DistributionSpec::mittag_leffler(std::pow(a, p.gamma) * p.lambda, p.gamma);
    case Family::sibuya:
      if (a < 1.0) return DistributionSpec::scaled_sibuya(std::pow(a, p.gamma), p.gamma);
      return std::nullopt;
    case Family::scaled_sibuya:
      if (a < 1.0) return DistributionSpec::scaled_sibuya(p.lambda * std::pow(a, p.gamma), p.gamma);
      return std::nullopt;
    case Family::bernoulli:
      if (a * p.a < 1.0) return DistributionSpec::bernoulli(a * p.a);
      return std::nullopt;
    default:
      return std::nullopt;
  }
}

// -------------------------------------------------------------- mixtures

LaplaceMixture gamma_mixture(double shape, double rate) {
  if (!(shape > 0.0 && rate > 0.0)) throw ParameterError("gamma mixture needs shape, rate > 0");
  LaplaceMixture m;
  const double lnorm = shape * std::log(rate) - std::lgamma(shape);
  m.density = [=](double x) {
    if (x <= 0.0) return 0.0;
    return std::exp(lnorm + (shape - 1.0) * std::log(x) - rate * x);
  };
  return m;
}

LaplaceMixture shifted_sibuya_mixture(double gamma) {
  if (!(gamma > 0.0 && gamma < 1.0)) throw ParameterError("shifted Sibuya mixture needs 0 < gamma < 1");
  LaplaceMixture m;
  const double inv = -1.0 / std::tgamma(-gamma);
  m.density = [=](double x) {
    if (x <= 0.0) return 0.0;
    return inv * exp_scaled_upper_gamma(-gamma, x);
  };
  return m;
}

PollardDensity::PollardDensity(double gamma, int max_terms) : gamma_(gamma), max_terms_(max_terms) {
  if (!(gamma > 0.0 && gamma < 1.0)) throw ParameterError("Pollard series needs 0 < gamma < 1");
  double x = 1.0;
  double ratio = 0.0;
  series(x, &ratio);
  while (x > 1e-6) {
    const double next = x * 0.98;
    double r = 0.0;
    try {
      series(next, &r);
    } catch (const SeriesDivergenceError&) {
      break;
    }
    if (!(r < 1e8)) break;
    x = next;
  }
  x_min_ = x;
  h_ = 0.05 * x_min_;
  y0_ = series(x_min_);
  y1_ = series(x_min_ + h_);
}

double PollardDensity::series(double x, double* cancellation) const {
  if (!(x > 0.0)) return 0.0;
  const double lx = std::log(x);
  CompensatedSum sum;
  double largest = 0.0;
  double prev_mag = 0.0;
  for (int j = 1; j <= max_terms_; ++j) {
    const double lmag = std::lgamma(1.0 + gamma_ * j) - std::lgamma(j + 1.0) - (1.0 + gamma_ * j) * lx;
    const double mag = std::exp(lmag);
    const double s = std::sin(std::numbers::pi * gamma_ * j);
    const double term = ((j % 2 == 1) ? 1.0 : -1.0) * mag * s / std::numbers::pi;
    sum.add(term);
    largest = std::max(largest, std::abs(term));
    const bool shrinking = j > 1 && mag < prev_mag;
    prev_mag = mag;
    if (shrinking && mag < 1e-14 * std::abs(sum.value())) {
      if (cancellation) *cancellation = sum.value() != 0.0 ? largest / std::abs(sum.value()) : INFINITY;
      return sum.value();
    }
    if (mag == 0.0 && j > 1) break;
  }
  if (std::abs(sum.value()) == 0.0 && prev_mag == 0.0) {
    if (cancellation) *cancellation = 1.0;
    return 0.0;
  }
  std::ostringstream msg;
  msg << "Pollard series did not converge within " << max_terms_ << " terms at x = " << x;
  throw SeriesDivergenceError(msg.str());
}

double PollardDensity::operator()(double x) const {
  if (!(x > 0.0)) return 0.0;
  if (x >= x_min_) return std::max(0.0, series(x));
  // log g ~ A - B x^{-gamma/(1-gamma)} as x -> 0, matched at x_min and x_min + h
  const double alpha = gamma_ / (1.0 - gamma_);
  if (y0_ > 0.0 && y1_ > y0_) {
    const double x0 = x_min_, x1 = x_min_ + h_;
    const double B = std::log(y1_ / y0_) / (std::pow(x0, -alpha) - std::pow(x1, -alpha));
    return y0_ * std::exp(-B * (std::pow(x, -alpha) - std::pow(x0, -alpha)));
  }
  return y0_ * x / x_min_;
}

LaplaceMixture discrete_stable_mixture(double lambda, double gamma, int series_terms) {
  if (!(lambda > 0.0)) throw ParameterError("discrete stable mixture needs lambda > 0");
  auto dens = std::make_shared<PollardDensity>(gamma, series_terms);
  const double s = std::pow(lambda, -1.0 / gamma);
  LaplaceMixture m;
  m.density = [dens, s](double x) { return s * (*dens)(s * x); };
  m.normalization_tolerance = 2e-3;
  return m;
}

// ----------------------------------------------------------- divisibility

std::string to_string(Ternary t) {
  switch (t) {
    case Ternary::yes:
      return "yes";
    case Ternary::no:
      return "no";
    case Ternary::unknown:
      return "unknown";
  }
  return "unknown";
}

InfDivisibilityReport divisibility_report(const DistributionSpec& spec) {
  InfDivisibilityReport r{spec, Ternary::unknown, Ternary::unknown, "analytic_rule"};
  const Params& p = spec.params();
  auto set = [&](Ternary id, Ternary sd) {
    r.infinitely_divisible = id;
    r.self_decomposable = sd;
  };
  switch (spec.family()) {
    case Family::poisson:
    case Family::nbd:
    case Family::geometric:
    case Family::discrete_stable:
    case Family::mittag_leffler:
    case Family::shifted_sibuya:
    case Family::shifted_extended_sibuya:
      set(Ternary::yes, Ternary::yes);
      break;
    case Family::scaled_sibuya:
      set(p.lambda <= 1.0 - p.gamma ? Ternary::yes : Ternary::no,
          p.lambda <= (1.0 - p.gamma) / (1.0 + p.gamma) ? Ternary::yes : Ternary::no);
      break;
    case Family::shifted_generalized_sibuya:
      if (p.nu == 0.0) {
        set(Ternary::yes, Ternary::yes);
      } else {
        set(Ternary::unknown, Ternary::no);
      }
      break;
    case Family::sibuya:
    case Family::generalized_sibuya:
    case Family::extended_sibuya:
    case Family::logarithmic:
    case Family::zero_truncated_nbd:
    case Family::four_param:
    case Family::bernoulli:
      // a non-degenerate law with p_0 = 0, or bounded support, cannot be
      // infinitely divisible
      set(Ternary::no, Ternary::no);
      break;
    case Family::cmp2:
    case Family::zero_inflated_log:
      set(Ternary::unknown, Ternary::unknown);
      r.source = "none";
      break;
  }
  return r;
}

}  // namespace sibuya

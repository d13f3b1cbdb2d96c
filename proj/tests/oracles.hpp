#ifndef SIBUYA_TESTS_ORACLES_HPP
#define SIBUYA_TESTS_ORACLES_HPP

// Reference values computed by routes independent of the library: direct
// products in long double, plain partial sums, textbook closed forms.

#include <algorithm>
#include <cmath>
#include <vector>

namespace oracle {

/// (-1)^{n+1} C(gamma, n) as a running product.
inline long double sibuya_binomial(long double gamma, long n) {
  if (n < 1) return 0.0L;
  long double c = gamma;  // C(gamma,1) with sign (+)
  for (long k = 1; k < n; ++k) c *= (k - gamma) / (k + 1.0L);
  return c;
}

inline std::vector<long double> sibuya_table(long double gamma, long n_max) {
  std::vector<long double> p(n_max + 1, 0.0L);
  for (long n = 1; n <= n_max; ++n) p[n] = sibuya_binomial(gamma, n);
  return p;
}

/// Generalized Sibuya by the trial construction: success at trial t w.p.
/// gamma / (nu + t).
inline std::vector<long double> generalized_sibuya_table(long double nu, long double gamma,
                                                         long n_max) {
  std::vector<long double> p(n_max + 1, 0.0L);
  long double survive = 1.0L;
  for (long t = 1; t <= n_max; ++t) {
    const long double s = gamma / (nu + t);
    p[t] = survive * s;
    survive *= 1.0L - s;
  }
  return p;
}

/// Extended Sibuya: b^n * sibuya_n / (1 - (1-b)^gamma), any gamma < 1.
inline std::vector<long double> extended_sibuya_table(long double b, long double gamma,
                                                      long n_max) {
  std::vector<long double> p(n_max + 1, 0.0L);
  const long double c = 1.0L - std::pow(1.0L - b, gamma);
  long double coeff = gamma;  // (-1)^{n+1} C(gamma, n)
  long double bn = b;
  for (long n = 1; n <= n_max; ++n) {
    p[n] = bn * coeff / c;
    coeff *= (n - gamma) / (n + 1.0L);
    bn *= b;
  }
  return p;
}

inline std::vector<long double> nbd_table(long double q, long double k, long n_max) {
  std::vector<long double> p(n_max + 1);
  p[0] = std::pow(1.0L - q, k);
  for (long n = 1; n <= n_max; ++n) p[n] = p[n - 1] * q * (k + n - 1) / n;
  return p;
}

inline std::vector<long double> poisson_table(long double lambda, long n_max) {
  std::vector<long double> p(n_max + 1);
  p[0] = std::exp(-lambda);
  for (long n = 1; n <= n_max; ++n) p[n] = p[n - 1] * lambda / n;
  return p;
}

inline std::vector<long double> cmp_table(long double theta, long n_max) {
  long double norm = 0.0L, term = 1.0L;
  for (int n = 0; n < 400; ++n) {
    norm += term;
    term *= theta / ((n + 1.0L) * (n + 1.0L));
  }
  std::vector<long double> p(n_max + 1);
  term = 1.0L;
  for (long n = 0; n <= n_max; ++n) {
    p[n] = term / norm;
    term *= theta / ((n + 1.0L) * (n + 1.0L));
  }
  return p;
}

inline std::vector<long double> logarithmic_table(long double theta, long n_max) {
  std::vector<long double> p(n_max + 1, 0.0L);
  const long double l = -std::log1p(-theta);
  long double tn = theta;
  for (long n = 1; n <= n_max; ++n) {
    p[n] = tn / (n * l);
    tn *= theta;
  }
  return p;
}

inline double rel_err(long double got, long double want) {
  if (want == 0.0L) return static_cast<double>(std::fabs(got));
  return static_cast<double>(std::fabs(got - want) / std::fabs(want));
}

/// Upper tail P(chi^2_dof > x) via the lower incomplete gamma series.
inline double chi2_sf(double x, int dof) {
  const long double a = dof / 2.0L, z = x / 2.0L;
  long double term = 1.0L / a, sum = term;
  for (int n = 1; n < 100000 && term > sum * 1e-19L; ++n) {
    term *= z / (a + n);
    sum += term;
  }
  const long double lower = std::exp(a * std::log(z) - z - std::lgamma(a)) * sum;
  return static_cast<double>(1.0L - lower);
}

/// Pearson chi^2 of integer draws against probs[lo..hi] plus one bin for
/// everything else; adjacent states are pooled until the expected count is
/// at least 5. Returns the p-value.
template <class Draws>
double chi2_pvalue(const Draws& draws, const std::vector<double>& probs, long lo, long hi) {
  const double n = static_cast<double>(draws.size());
  std::vector<double> observed(hi - lo + 2, 0.0);
  for (auto x : draws) {
    const long v = static_cast<long>(x);
    observed[(v >= lo && v <= hi) ? v - lo : hi - lo + 1] += 1.0;
  }
  std::vector<double> expected(hi - lo + 2, 0.0);
  double inside = 0.0;
  for (long k = lo; k <= hi; ++k) {
    expected[k - lo] = n * probs[k];
    inside += probs[k];
  }
  expected.back() = n * std::max(0.0, 1.0 - inside);
  double stat = 0.0, eo = 0.0, ee = 0.0;
  int bins = 0;
  for (std::size_t i = 0; i < expected.size(); ++i) {
    eo += observed[i];
    ee += expected[i];
    if (ee >= 5.0 || i + 1 == expected.size()) {
      if (ee > 0.0) {
        stat += (eo - ee) * (eo - ee) / ee;
        ++bins;
      }
      eo = ee = 0.0;
    }
  }
  return chi2_sf(stat, std::max(1, bins - 1));
}

}  // namespace oracle

#endif  // SIBUYA_TESTS_ORACLES_HPP

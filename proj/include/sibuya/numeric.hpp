#ifndef SIBUYA_NUMERIC_HPP
#define SIBUYA_NUMERIC_HPP

// Numerical building blocks shared by every module: compensated summation,
// adaptive Gauss-Kronrod quadrature, truncated power-series arithmetic and
// the handful of special functions the distribution catalog needs.

#include <complex>
#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace sibuya {

using cdouble = std::complex<double>;

/// Neumaier-compensated running sum; also tracks sum of magnitudes so callers
/// can bound cancellation.
class CompensatedSum {
 public:
  void add(double x) noexcept;
  double value() const noexcept { return sum_ + comp_; }
  double magnitude() const noexcept { return abs_sum_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
  double abs_sum_ = 0.0;
};

struct QuadResult {
  double value = 0.0;
  double error = 0.0;
  int evaluations = 0;
};

namespace quad {

using Integrand = std::function<double(double)>;

/// Adaptive G7/K15 on a finite interval. Throws QuadratureError when the
/// interval budget is exhausted before the tolerance is met.
QuadResult gauss_kronrod(const Integrand& f, double a, double b, double rel_tol = 1e-10,
                         double abs_tol = 1e-300, int max_intervals = 2000);

/// Integral over (x_lo, inf) of f(x) for x_lo >= 0 via x = e^t. The t-line is
/// split at t = 0 (x = 1) and each side is covered by doubling segments until
/// two successive segments are negligible.
QuadResult positive_axis(const Integrand& f, double x_lo = 0.0, double rel_tol = 1e-10,
                         double abs_tol = 1e-300);

}  // namespace quad

/// Truncated power series, coefficient k at index k.
using Series = std::vector<double>;

namespace series {

Series truncate(Series s, std::size_t n);
Series multiply(std::span<const double> a, std::span<const double> b, std::size_t n);
/// 1 / a, requires a[0] != 0.
Series reciprocal(std::span<const double> a, std::size_t n);
/// a / b with compensated accumulation; requires b[0] != 0.
Series divide(std::span<const double> a, std::span<const double> b, std::size_t n);
/// outer(inner(w)) truncated to degree n; requires inner[0] == 0.
Series compose(std::span<const double> outer, std::span<const double> inner, std::size_t n);
Series exp(std::span<const double> a, std::size_t n);
Series power(std::span<const double> a, int k, std::size_t n);
Series derivative(std::span<const double> a);
/// Compositional inverse: r with a(r(u)) = u, requires a[0] == 0, a[1] != 0.
/// Newton iteration with precision doubling.
Series revert(std::span<const double> a, std::size_t n);
double eval(std::span<const double> a, double x);
cdouble eval(std::span<const double> a, cdouble x);

}  // namespace series

// Complex-safe log(1+z) and exp(z)-1.
cdouble log1p(cdouble z);
cdouble expm1(cdouble z);

/// Generalized binomial coefficient C(x, n) for real x.
double binomial(double x, long n);
/// Falling factorial (x)_k = x (x-1) ... (x-k+1).
double falling_factorial(double x, int k);
/// Rising factorial x (x+1) ... (x+k-1).
double rising_factorial(double x, int k);

/// e^x * Gamma(a, x) for real a (any sign, non-integer if <= 0) and x > 0.
double exp_scaled_upper_gamma(double a, double x);

/// Generalized hypergeometric pFq(a; b; z) by direct power series. Terminates
/// when |term| < tol * |sum|; throws ConvergenceError after max_terms.
cdouble hypergeometric_pfq(std::span<const cdouble> a, std::span<const cdouble> b, cdouble z,
                           double tol = 1e-15, long max_terms = 10'000'000);

/// Root of f on [lo, hi] by bisection; f(lo) and f(hi) must differ in sign.
double bisect(const std::function<double(double)>& f, double lo, double hi, double x_tol = 1e-14,
              int max_iter = 200);

/// Total variation distance, zero-padding the shorter sequence.
double total_variation(std::span<const double> p, std::span<const double> q);

}  // namespace sibuya

#endif  // SIBUYA_NUMERIC_HPP

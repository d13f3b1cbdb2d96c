#include "sibuya/numeric.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <queue>
#include <sstream>

#include "sibuya/errors.hpp"

namespace sibuya {

void CompensatedSum::add(double x) noexcept {
  const double t = sum_ + x;
  if (std::abs(sum_) >= std::abs(x)) {
    comp_ += (sum_ - t) + x;
  } else {
    comp_ += (x - t) + sum_;
  }
  sum_ = t;
  abs_sum_ += std::abs(x);
}

namespace quad {
namespace {

constexpr std::array<double, 8> kNodes = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr std::array<double, 8> kKronrod = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> kGauss = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Panel {
  double a, b, value, error;
  bool operator<(const Panel& o) const { return error < o.error; }
};

Panel rule15(const Integrand& f, double a, double b) {
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  const double fc = f(c);
  double lo[7], hi[7];
  double k = fc * kKronrod[7];
  double g = fc * kGauss[3];
  for (int i = 0; i < 7; ++i) {
    const double dx = h * kNodes[i];
    lo[i] = f(c - dx);
    hi[i] = f(c + dx);
    const double s = lo[i] + hi[i];
    k += kKronrod[i] * s;
    if (i % 2 == 1) g += kGauss[i / 2] * s;
  }
  if (!std::isfinite(k)) {
    std::ostringstream msg;
    msg << "non-finite integrand on [" << a << ", " << b << "]";
    throw QuadratureError(msg.str());
  }
  // QUADPACK-style error scaling guards against accidental Gauss/Kronrod agreement
  const double mean = 0.5 * k;
  double asc = kKronrod[7] * std::abs(fc - mean);
  for (int i = 0; i < 7; ++i) asc += kKronrod[i] * (std::abs(lo[i] - mean) + std::abs(hi[i] - mean));
  asc *= std::abs(h);
  double err = std::abs((k - g) * h);
  if (asc != 0.0 && err != 0.0) err = asc * std::min(1.0, std::pow(200.0 * err / asc, 1.5));
  return {a, b, k * h, err};
}

}  // namespace

QuadResult gauss_kronrod(const Integrand& f, double a, double b, double rel_tol, double abs_tol,
                         int max_intervals) {
  if (a == b) return {};
  std::priority_queue<Panel> heap;
  Panel first = rule15(f, a, b);
  double total = first.value;
  double err = first.error;
  heap.push(first);
  int evals = 15;
  while (err > std::max(abs_tol, rel_tol * std::abs(total))) {
    if (static_cast<int>(heap.size()) >= max_intervals) {
      std::ostringstream msg;
      msg << "interval budget exhausted on [" << a << ", " << b << "], value " << total
          << " error " << err;
      throw QuadratureError(msg.str());
    }
    Panel worst = heap.top();
    const double mid = 0.5 * (worst.a + worst.b);
    if (mid <= worst.a || mid >= worst.b) break;  // interval cannot be split further
    heap.pop();
    Panel left = rule15(f, worst.a, mid);
    Panel right = rule15(f, mid, worst.b);
    evals += 30;
    total += left.value + right.value - worst.value;
    err += left.error + right.error - worst.error;
    heap.push(left);
    heap.push(right);
  }
  // re-sum to shed the drift of incremental updates
  CompensatedSum sum;
  double esum = 0.0;
  while (!heap.empty()) {
    sum.add(heap.top().value);
    esum += heap.top().error;
    heap.pop();
  }
  return {sum.value(), esum, evals};
}

QuadResult positive_axis(const Integrand& f, double x_lo, double rel_tol, double abs_tol) {
  constexpr double kTMax = 700.0;
  const Integrand g = [&f](double t) {
    const double x = std::exp(t);
    return f(x) * x;
  };
  QuadResult out;
  CompensatedSum total;

  auto sweep = [&](double start, double direction, double stop) {
    double t = start;
    double len = 1.0;
    int quiet = 0;
    while (direction * (stop - t) > 0.0) {
      double next = t + direction * len;
      if (direction * (next - stop) > 0.0) next = stop;
      const double lo = std::min(t, next);
      const double hi = std::max(t, next);
      const double seg_abs = std::max(abs_tol, 1e-3 * rel_tol * std::abs(total.value()));
      QuadResult seg = gauss_kronrod(g, lo, hi, rel_tol, seg_abs);
      total.add(seg.value);
      out.error += seg.error;
      out.evaluations += seg.evaluations;
      if (total.value() != 0.0 &&
          (std::abs(seg.value) <= 1e-3 * rel_tol * std::abs(total.value()) ||
           std::abs(seg.value) <= abs_tol)) {
        if (++quiet >= 2) return;
      } else {
        quiet = 0;
      }
      t = next;
      len *= 2.0;
    }
  };

  if (x_lo >= 1.0) {
    sweep(std::log(x_lo), +1.0, kTMax);
  } else {
    sweep(0.0, +1.0, kTMax);
    const double left_stop = x_lo > 0.0 ? std::log(x_lo) : -kTMax;
    sweep(0.0, -1.0, left_stop);
  }
  out.value = total.value();
  return out;
}

}  // namespace quad

namespace series {

Series truncate(Series s, std::size_t n) {
  s.resize(n + 1, 0.0);
  return s;
}

namespace {
double at(std::span<const double> a, std::size_t k) { return k < a.size() ? a[k] : 0.0; }
}  // namespace

Series multiply(std::span<const double> a, std::span<const double> b, std::size_t n) {
  Series out(n + 1, 0.0);
  const std::size_t na = std::min(a.size(), n + 1);
  for (std::size_t i = 0; i < na; ++i) {
    if (a[i] == 0.0) continue;
    const std::size_t nb = std::min(b.size(), n + 1 - i);
    for (std::size_t j = 0; j < nb; ++j) out[i + j] += a[i] * b[j];
  }
  return out;
}

Series reciprocal(std::span<const double> a, std::size_t n) {
  const Series one{1.0};
  return divide(one, a, n);
}

Series divide(std::span<const double> a, std::span<const double> b, std::size_t n) {
  if (b.empty() || b[0] == 0.0) throw DivisionInstabilityError("series division by zero leading term");
  Series q(n + 1, 0.0);
  for (std::size_t k = 0; k <= n; ++k) {
    CompensatedSum s;
    s.add(at(a, k));
    const std::size_t jmax = std::min(k, b.size() - 1);
    for (std::size_t j = 1; j <= jmax; ++j) s.add(-b[j] * q[k - j]);
    q[k] = s.value() / b[0];
  }
  return q;
}

Series compose(std::span<const double> outer, std::span<const double> inner, std::size_t n) {
  if (!inner.empty() && inner[0] != 0.0) {
    throw DomainError("series composition requires inner series with zero constant term");
  }
  const std::size_t top = std::min(outer.size(), n + 1);
  Series result(n + 1, 0.0);
  if (top == 0) return result;
  result[0] = outer[top - 1];
  for (std::size_t k = top - 1; k-- > 0;) {
    result = multiply(result, inner, n);
    result[0] += outer[k];
  }
  return result;
}

Series exp(std::span<const double> a, std::size_t n) {
  Series e(n + 1, 0.0);
  e[0] = std::exp(at(a, 0));
  for (std::size_t m = 1; m <= n; ++m) {
    CompensatedSum s;
    for (std::size_t k = 1; k <= m; ++k) {
      const double ak = at(a, k);
      if (ak != 0.0) s.add(static_cast<double>(k) * ak * e[m - k]);
    }
    e[m] = s.value() / static_cast<double>(m);
  }
  return e;
}

Series power(std::span<const double> a, int k, std::size_t n) {
  Series result{1.0};
  result.resize(n + 1, 0.0);
  Series base(a.begin(), a.end());
  base.resize(n + 1, 0.0);
  while (k > 0) {
    if (k & 1) result = multiply(result, base, n);
    k >>= 1;
    if (k > 0) base = multiply(base, base, n);
  }
  return result;
}

Series derivative(std::span<const double> a) {
  if (a.size() <= 1) return Series{0.0};
  Series d(a.size() - 1);
  for (std::size_t k = 1; k < a.size(); ++k) d[k - 1] = static_cast<double>(k) * a[k];
  return d;
}

Series revert(std::span<const double> a, std::size_t n) {
  if (a.size() < 2 || a[0] != 0.0 || a[1] == 0.0) {
    throw InversionError("series reversion needs a[0] = 0 and a[1] != 0");
  }
  const Series da = derivative(a);
  Series r{0.0, 1.0 / a[1]};
  r.resize(n + 1, 0.0);
  std::size_t prec = 1;
  int polish = 0;
  while (prec < n || polish < 2) {
    if (prec >= n) ++polish;
    prec = std::min(n, 2 * prec + 1);
    Series f = compose(a, r, prec);
    f[1] -= 1.0;
    const Series d = compose(da, r, prec);
    const Series step = divide(f, d, prec);
    for (std::size_t k = 0; k <= prec; ++k) r[k] -= step[k];
    r[0] = 0.0;
  }
  r.resize(n + 1);
  return r;
}

double eval(std::span<const double> a, double x) {
  double acc = 0.0;
  for (std::size_t k = a.size(); k-- > 0;) acc = acc * x + a[k];
  return acc;
}

cdouble eval(std::span<const double> a, cdouble x) {
  cdouble acc = 0.0;
  for (std::size_t k = a.size(); k-- > 0;) acc = acc * x + a[k];
  return acc;
}

}  // namespace series

cdouble log1p(cdouble z) {
  const cdouble u = 1.0 + z;
  if (u == 1.0) return z;
  return std::log(u) * z / (u - 1.0);
}

cdouble expm1(cdouble z) {
  const double x = z.real();
  const double y = z.imag();
  const double s = std::sin(0.5 * y);
  const double re = std::expm1(x) * std::cos(y) - 2.0 * s * s;
  const double im = std::exp(x) * std::sin(y);
  return {re, im};
}

double binomial(double x, long n) {
  if (n < 0) return 0.0;
  double c = 1.0;
  for (long j = 0; j < n; ++j) c *= (x - static_cast<double>(j)) / static_cast<double>(j + 1);
  return c;
}

double falling_factorial(double x, int k) {
  double p = 1.0;
  for (int i = 0; i < k; ++i) p *= x - i;
  return p;
}

double rising_factorial(double x, int k) {
  double p = 1.0;
  for (int i = 0; i < k; ++i) p *= x + i;
  return p;
}

double exp_scaled_upper_gamma(double a, double x) {
  if (!(x > 0.0)) throw DomainError("upper incomplete gamma needs x > 0");
  if (x > 1.5) {
    // modified Lentz on the Legendre continued fraction
    constexpr double tiny = 1e-300;
    double b = x + 1.0 - a;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i < 100000; ++i) {
      const double an = -i * (i - a);
      b += 2.0;
      d = an * d + b;
      if (std::abs(d) < tiny) d = tiny;
      c = b + an / c;
      if (std::abs(c) < tiny) c = tiny;
      d = 1.0 / d;
      const double del = d * c;
      h *= del;
      if (std::abs(del - 1.0) < 4e-16) return std::pow(x, a) * h;
    }
    throw ConvergenceError("incomplete gamma continued fraction did not converge");
  }
  if (a <= 0.0 && a == std::floor(a)) {
    throw DomainError("incomplete gamma series needs non-integer a <= 0");
  }
  CompensatedSum s;
  double term = 1.0;  // (-x)^k / k!
  for (int k = 0; k < 200; ++k) {
    const double t = term / (a + k);
    s.add(t);
    if (k > 2 && std::abs(t) < 1e-17 * std::abs(s.value())) break;
    term *= -x / (k + 1);
  }
  const double lower = std::pow(x, a) * s.value();
  return std::exp(x) * (std::tgamma(a) - lower);
}

cdouble hypergeometric_pfq(std::span<const cdouble> a, std::span<const cdouble> b, cdouble z,
                           double tol, long max_terms) {
  cdouble sum = 1.0;
  cdouble term = 1.0;
  int quiet = 0;
  for (long n = 0; n < max_terms; ++n) {
    cdouble ratio = z / static_cast<double>(n + 1);
    for (const auto& ai : a) ratio *= ai + static_cast<double>(n);
    for (const auto& bi : b) ratio /= bi + static_cast<double>(n);
    term *= ratio;
    if (term == 0.0) return sum;
    sum += term;
    if (std::abs(term) < tol * std::abs(sum)) {
      if (++quiet >= 2) return sum;
    } else {
      quiet = 0;
    }
  }
  throw ConvergenceError("hypergeometric series did not converge within the term budget");
}

double bisect(const std::function<double(double)>& f, double lo, double hi, double x_tol,
              int max_iter) {
  double flo = f(lo);
  const double fhi = f(hi);
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  if ((flo > 0.0) == (fhi > 0.0)) throw NoRootError("bisection bracket has no sign change");
  for (int i = 0; i < max_iter && hi - lo > x_tol; ++i) {
    const double mid = 0.5 * (lo + hi);
    const double fm = f(mid);
    if (fm == 0.0) return mid;
    if ((fm > 0.0) == (flo > 0.0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

double total_variation(std::span<const double> p, std::span<const double> q) {
  const std::size_t n = std::max(p.size(), q.size());
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double a = i < p.size() ? p[i] : 0.0;
    const double b = i < q.size() ? q[i] : 0.0;
    s += std::abs(a - b);
  }
  return 0.5 * s;
}

}  // namespace sibuya

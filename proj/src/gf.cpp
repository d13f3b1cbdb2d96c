#include "sibuya/gf.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "sibuya/distributions.hpp"
#include "sibuya/errors.hpp"

namespace sibuya {

double PmfTable::sum() const {
  CompensatedSum s;
  for (double p : probs) s.add(p);
  return s.value();
}

// ---------------------------------------------------------------- GFunction

GFunction GFunction::rational(std::vector<double> numerator, std::vector<double> denominator) {
  if (denominator.empty()) throw ParameterError("g-function denominator is empty");
  GFunction g;
  g.num_ = std::move(numerator);
  g.den_ = std::move(denominator);
  return g;
}

namespace {

std::vector<double> falling_to_monomial(const std::vector<double>& amp) {
  std::vector<double> out(amp.size(), 0.0);
  std::vector<double> basis{1.0};  // (n)_k in monomial form
  for (std::size_t k = 0; k < amp.size(); ++k) {
    for (std::size_t i = 0; i < basis.size(); ++i) out[i] += amp[k] * basis[i];
    std::vector<double> next(basis.size() + 1, 0.0);
    for (std::size_t i = 0; i < basis.size(); ++i) {
      next[i + 1] += basis[i];
      next[i] -= static_cast<double>(k) * basis[i];
    }
    basis = std::move(next);
  }
  return out;
}

}  // namespace

GFunction GFunction::from_amplitudes(const std::vector<double>& alpha,
                                     const std::vector<double>& beta) {
  auto num = falling_to_monomial(alpha);
  auto den = falling_to_monomial(beta);
  while (num.size() > 1 && den.size() > 1 && num.front() == 0.0 && den.front() == 0.0) {
    num.erase(num.begin());
    den.erase(den.begin());
  }
  while (num.size() > 1 && num.back() == 0.0) num.pop_back();
  while (den.size() > 1 && den.back() == 0.0) den.pop_back();
  return rational(std::move(num), std::move(den));
}

GFunction GFunction::black_box(std::function<double(long)> g) {
  GFunction out;
  out.fn_ = std::move(g);
  return out;
}

double GFunction::operator()(long n) const {
  if (fn_) return fn_(n);
  const double x = static_cast<double>(n);
  const double a = series::eval(num_, x);
  const double b = series::eval(den_, x);
  if (b == 0.0) return a == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
  return a / b;
}

PmfTable table_from_g(const GFunction& g, long floor, double p_floor, long n_max) {
  if (n_max < 0) throw ParameterError("n_max must be >= 0");
  if (floor < 0) throw ParameterError("floor must be >= 0");
  PmfTable t;
  t.provenance = "recurrence";
  t.probs.assign(static_cast<std::size_t>(n_max) + 1, 0.0);
  if (floor <= n_max && p_floor > 0.0) {
    double lp = std::log(p_floor);
    t.probs[floor] = p_floor;
    for (long n = floor; n < n_max; ++n) {
      const double gv = g(n);
      if (!(gv > 0.0)) break;
      lp += std::log(gv) - std::log(static_cast<double>(n + 1));
      t.probs[n + 1] = std::exp(lp);
    }
  }
  t.tail_mass = std::max(0.0, 1.0 - t.sum());
  return t;
}

// ---------------------------------------------------------- LaplaceMixture

namespace {

double integrate_mixture(const LaplaceMixture& m, const std::function<double(double)>& weight) {
  const auto integrand = [&](double x) {
    if (x > m.x_max) return 0.0;
    const double f = m.density(x);
    if (f < 0.0 || std::isnan(f)) {
      std::ostringstream msg;
      msg << "mixture density negative at x = " << x << " (f = " << f << ")";
      throw DomainError(msg.str());
    }
    if (f == 0.0) return 0.0;
    return weight(x) * f;
  };
  return quad::positive_axis(integrand, m.x_min, 1e-10).value;
}

}  // namespace

double mixture_mass(const LaplaceMixture& m) {
  return integrate_mixture(m, [](double) { return 1.0; });
}

double mixture_moment(const LaplaceMixture& m, int n, double s) {
  if (n < 0) throw ParameterError("moment order must be >= 0");
  const double lf = std::lgamma(n + 1.0);
  return integrate_mixture(m, [=](double x) {
    return std::exp(-s * x + n * std::log(x) - lf);
  });
}

double mixture_g(const LaplaceMixture& m, int n) {
  const double lo = mixture_moment(m, n);
  const double hi = mixture_moment(m, n + 1);
  if (lo == 0.0) throw QuadratureError("vanishing mixture moment");
  return (n + 1.0) * hi / lo;
}

LaplaceMixture mixture_rescale(const LaplaceMixture& m, double b) {
  if (!(b > 0.0 && b <= 1.0)) throw ParameterError("rescale requires 0 < b <= 1");
  if (b == 1.0) return m;
  const double z = b * mixture_moment(m, 0, 1.0 - b);
  if (!(z > 0.0)) throw QuadratureError("rescaled mixture has zero normalization");
  LaplaceMixture out;
  auto f = m.density;
  out.density = [f, b, z](double x) {
    return std::exp(-(1.0 - b) * x / b) * f(x / b) / z;
  };
  out.x_min = m.x_min * b;
  out.x_max = m.x_max * b;
  out.normalization_tolerance = m.normalization_tolerance;
  return out;
}

// --------------------------------------------------------------------- Pgf

namespace {

using NodePtr = std::shared_ptr<const Pgf::Node>;

cdouble eval_node(const Pgf::Node& n, cdouble w);
double complement_node(const Pgf::Node& n, double w);

cdouble eval_mixture(const LaplaceMixture& m, cdouble w) {
  const double s = 1.0 - w.real();
  const double t = w.imag();
  if (t == 0.0) {
    if (s == 0.0) return mixture_mass(m);
    return mixture_moment(m, 0, s);
  }
  const double re = integrate_mixture(m, [=](double x) { return std::exp(-s * x) * std::cos(t * x); });
  const double im = integrate_mixture(m, [=](double x) { return std::exp(-s * x) * std::sin(t * x); });
  return {re, im};
}

cdouble eval_table(const PmfTable& t, cdouble w) {
  cdouble v = series::eval(t.probs, w);
  if (t.tail_mass > 0.0) v += t.tail_mass * std::pow(w, static_cast<double>(t.probs.size()));
  return v;
}

cdouble eval_node(const Pgf::Node& n, cdouble w) {
  switch (n.kind) {
    case PgfKind::closed_form:
      return closed_form_pgf(*n.spec, w);
    case PgfKind::identity:
      return w;
    case PgfKind::composed:
      return eval_node(*n.a, eval_node(*n.b, w));
    case PgfKind::thinned:
      return eval_node(*n.a, 1.0 - n.scale + n.scale * w);
    case PgfKind::series:
      return eval_table(n.table, w);
    case PgfKind::mixture:
      return eval_mixture(*n.mix, w);
    case PgfKind::custom:
      return n.fn(w);
  }
  return 0.0;
}

double complement_node(const Pgf::Node& n, double w) {
  switch (n.kind) {
    case PgfKind::closed_form:
      return closed_form_complement(*n.spec, w);
    case PgfKind::identity:
      return 1.0 - w;
    case PgfKind::composed: {
      const double inner_c = complement_node(*n.b, w);
      return complement_node(*n.a, 1.0 - inner_c);
    }
    case PgfKind::thinned:
      return complement_node(*n.a, 1.0 - n.scale * (1.0 - w));
    default:
      return 1.0 - eval_node(n, cdouble(w, 0.0)).real();
  }
}

double radius_node(const Pgf::Node& n) {
  constexpr double kHuge = 1e300;
  switch (n.kind) {
    case PgfKind::closed_form:
      return analytic_radius(*n.spec);
    case PgfKind::identity:
      return kHuge;
    case PgfKind::composed:
      return std::min(radius_node(*n.b), 1.0);
    case PgfKind::thinned: {
      const double r = radius_node(*n.a);
      if (r >= kHuge) return kHuge;
      return (r - 1.0 + n.scale) / n.scale;
    }
    case PgfKind::series:
      return n.table.tail_mass == 0.0 ? kHuge : 1.0;
    case PgfKind::mixture:
      return 1.0;
    case PgfKind::custom:
      return n.scale;
  }
  return 1.0;
}

bool representable_node(const Pgf::Node& n) {
  switch (n.kind) {
    case PgfKind::closed_form:
      return laplace_whitelisted(*n.spec);
    case PgfKind::mixture:
      return true;
    case PgfKind::thinned:
      return representable_node(*n.a);
    default:
      return false;
  }
}

std::string describe_node(const Pgf::Node& n) {
  std::ostringstream os;
  switch (n.kind) {
    case PgfKind::closed_form:
      return n.spec->describe();
    case PgfKind::identity:
      return "identity";
    case PgfKind::composed:
      return describe_node(*n.a) + " o " + describe_node(*n.b);
    case PgfKind::thinned:
      os << "thin(" << describe_node(*n.a) << ", a=" << n.scale << ")";
      return os.str();
    case PgfKind::series:
      os << "series[" << n.table.size() << "]";
      return os.str();
    case PgfKind::mixture:
      return "laplace_mixture";
    case PgfKind::custom:
      return n.name;
  }
  return "?";
}

NodePtr make_node(Pgf::Node n) { return std::make_shared<const Pgf::Node>(std::move(n)); }

}  // namespace

Pgf Pgf::closed_form(DistributionSpec spec) {
  Node n;
  n.kind = PgfKind::closed_form;
  n.spec = std::move(spec);
  return Pgf(make_node(std::move(n)));
}

Pgf Pgf::identity() {
  Node n;
  n.kind = PgfKind::identity;
  return Pgf(make_node(std::move(n)));
}

Pgf Pgf::series(PmfTable table) {
  for (double p : table.probs) {
    if (!std::isfinite(p)) throw ParameterError("series pgf has non-finite coefficient");
  }
  Node n;
  n.kind = PgfKind::series;
  n.table = std::move(table);
  return Pgf(make_node(std::move(n)));
}

Pgf Pgf::mixture(LaplaceMixture m) {
  if (!m.density) throw ParameterError("mixture density is empty");
  Node n;
  n.kind = PgfKind::mixture;
  n.mix = std::move(m);
  return Pgf(make_node(std::move(n)));
}

Pgf Pgf::custom(std::function<cdouble(cdouble)> fn, double radius, std::string name,
                std::optional<PmfTable> table) {
  if (!fn) throw ParameterError("custom pgf evaluator is empty");
  Node n;
  n.kind = PgfKind::custom;
  n.fn = std::move(fn);
  n.scale = radius;
  n.name = std::move(name);
  if (table) {
    n.table = std::move(*table);
    n.has_table = true;
  }
  return Pgf(make_node(std::move(n)));
}

PgfKind Pgf::kind() const noexcept { return node_->kind; }
double Pgf::analytic_radius() const { return radius_node(*node_); }
bool Pgf::laplace_representable() const { return representable_node(*node_); }
double Pgf::operator()(double w) const { return eval_node(*node_, cdouble(w, 0.0)).real(); }
cdouble Pgf::operator()(cdouble w) const { return eval_node(*node_, w); }
double Pgf::complement(double w) const { return complement_node(*node_, w); }
std::string Pgf::describe() const { return describe_node(*node_); }

double pgf_eval(const Pgf& p, double w) {
  if (!(w >= 0.0 && w <= p.domain_radius())) {
    std::ostringstream msg;
    msg << "w = " << w << " outside [0, " << p.domain_radius() << "]";
    throw DomainError(msg.str());
  }
  return p(w);
}

Pgf pgf_thin(const Pgf& p, double a) {
  if (!(a > 0.0) || !std::isfinite(a)) throw ParameterError("thinning requires a > 0");
  if (a == 1.0) return p;
  if (a > 1.0 && !p.laplace_representable()) {
    throw ScalingError("thinning with a > 1 needs a Laplace-representable pgf; got " +
                       p.describe());
  }
  const auto& node = p.node();
  if (node.kind == PgfKind::thinned) {
    const double combined = node.scale * a;
    if (combined == 1.0) return Pgf(node.a);
    Pgf::Node n;
    n.kind = PgfKind::thinned;
    n.a = node.a;
    n.scale = combined;
    return Pgf(make_node(std::move(n)));
  }
  if (node.kind == PgfKind::mixture) {
    LaplaceMixture m = *node.mix;
    auto f = m.density;
    m.density = [f, a](double x) { return f(x / a) / a; };
    m.x_min *= a;
    m.x_max *= a;
    return Pgf::mixture(std::move(m));
  }
  Pgf::Node n;
  n.kind = PgfKind::thinned;
  n.a = p.node_ptr();
  n.scale = a;
  return Pgf(make_node(std::move(n)));
}

Pgf pgf_compound(const Pgf& outer, const Pgf& inner) {
  if (inner.kind() == PgfKind::identity) return outer;
  if (outer.kind() == PgfKind::identity) return inner;
  const double lo = inner(0.0);
  const double hi = inner(1.0);
  if (lo < -1e-12 || hi > outer.domain_radius() + 1e-10) {
    std::ostringstream msg;
    msg << "inner pgf range [" << lo << ", " << hi << "] not inside outer domain";
    throw DomainError(msg.str());
  }
  Pgf::Node n;
  n.kind = PgfKind::composed;
  n.a = outer.node_ptr();
  n.b = inner.node_ptr();
  return Pgf(make_node(std::move(n)));
}

Pgf mixture_pgf(const LaplaceMixture& m) { return Pgf::mixture(m); }

// ------------------------------------------------------------ coefficients

std::vector<double> binomial_thin(std::span<const double> p, double a, std::size_t n_out) {
  std::vector<double> out(n_out, 0.0);
  if (a == 1.0) {
    std::copy_n(p.begin(), std::min(p.size(), n_out), out.begin());
    return out;
  }
  const double la = std::log(a);
  const double lb = std::log1p(-a);
  std::vector<double> lf(p.size() + 1);
  for (std::size_t i = 0; i < lf.size(); ++i) lf[i] = std::lgamma(static_cast<double>(i) + 1.0);
  for (std::size_t m = 0; m < n_out; ++m) {
    CompensatedSum s;
    for (std::size_t n = m; n < p.size(); ++n) {
      if (p[n] == 0.0) continue;
      const double lw = lf[n] - lf[m] - lf[n - m] + m * la + (n - m) * lb;
      s.add(p[n] * std::exp(lw));
    }
    out[m] = s.value();
  }
  return out;
}

namespace {

PmfTable finish(std::vector<double> probs, std::string provenance) {
  PmfTable t;
  t.probs = std::move(probs);
  t.provenance = std::move(provenance);
  t.tail_mass = std::max(0.0, 1.0 - t.sum());
  return t;
}

std::vector<double> dft_coefficients(const std::vector<cdouble>& vals, double rho, int n_max) {
  const std::size_t m = vals.size();
  std::vector<double> c(n_max + 1);
  for (int n = 0; n <= n_max; ++n) {
    CompensatedSum s;
    for (std::size_t j = 0; j < m; ++j) {
      const double phase = -2.0 * std::numbers::pi * static_cast<double>((j * n) % m) / m;
      s.add(vals[j].real() * std::cos(phase) - vals[j].imag() * std::sin(phase));
    }
    c[n] = s.value() / m * std::pow(rho, -n);
  }
  return c;
}

PmfTable contour_coefficients(const Pgf& p, int n_max) {
  const double r_an = p.analytic_radius();
  const double rho =
      std::min(0.95 * std::min(r_an, 1e6), std::max(0.5, std::pow(10.0, -4.0 / std::max(n_max, 1))));
  std::size_t m = 8 * static_cast<std::size_t>(std::max(n_max, 1));
  auto node = [&](std::size_t j, std::size_t count) {
    const double th = 2.0 * std::numbers::pi * static_cast<double>(j) / count;
    return p(cdouble(rho * std::cos(th), rho * std::sin(th)));
  };
  std::vector<cdouble> vals(m);
  for (std::size_t j = 0; j < m; ++j) vals[j] = node(j, m);
  auto coeffs = dft_coefficients(vals, rho, n_max);
  for (int round = 0; round < 4; ++round) {
    std::vector<cdouble> fine(2 * m);
    double vmax = 0.0;
    for (std::size_t j = 0; j < 2 * m; ++j) {
      fine[j] = (j % 2 == 0) ? vals[j / 2] : node(j, 2 * m);
      vmax = std::max(vmax, std::abs(fine[j]));
    }
    auto next = dft_coefficients(fine, rho, n_max);
    bool ok = true;
    for (int n = 0; n <= n_max && ok; ++n) {
      const double roundoff = 64.0 * std::numeric_limits<double>::epsilon() * vmax * std::pow(rho, -n);
      ok = std::abs(next[n] - coeffs[n]) <= 1e-9 + roundoff;
    }
    vals = std::move(fine);
    coeffs = std::move(next);
    m *= 2;
    if (ok) return finish(std::move(coeffs), "contour");
  }
  throw ConvergenceError("contour extraction did not stabilise for " + p.describe());
}

std::size_t thinning_source_size(int n_max, double a) {
  const double n = n_max + 1.0;
  return static_cast<std::size_t>(std::ceil(n / a + 60.0 * std::sqrt(n) / a + 60.0 / a));
}

}  // namespace

PmfTable pgf_coefficients(const Pgf& p, int n_max, CoefficientMethod method) {
  if (n_max < 0) throw ParameterError("n_max must be >= 0");
  if (method == CoefficientMethod::contour) return contour_coefficients(p, n_max);
  const auto& node = p.node();
  switch (node.kind) {
    case PgfKind::identity: {
      std::vector<double> c(n_max + 1, 0.0);
      if (n_max >= 1) c[1] = 1.0;
      return finish(std::move(c), "exact");
    }
    case PgfKind::closed_form:
      return pmf_table(*node.spec, n_max);
    case PgfKind::series: {
      PmfTable t = node.table;
      double dropped = 0.0;
      for (std::size_t i = n_max + 1; i < t.probs.size(); ++i) dropped += t.probs[i];
      t.probs.resize(n_max + 1, 0.0);
      t.tail_mass += dropped;
      return t;
    }
    case PgfKind::mixture: {
      std::vector<double> c(n_max + 1);
      for (int n = 0; n <= n_max; ++n) c[n] = mixture_moment(*node.mix, n);
      return finish(std::move(c), "quadrature");
    }
    case PgfKind::thinned: {
      const Pgf base(node.a);
      if (base.kind() == PgfKind::closed_form) {
        if (auto s = thinned_spec(*base.node().spec, node.scale)) {
          PmfTable t = pmf_table(*s, n_max);
          t.provenance += "+thinned_closed_form";
          return t;
        }
      }
      if (node.scale < 1.0 && base.kind() == PgfKind::composed) {
        // thinning acts on the inner pgf: Q(S(1 - a + a w))
        const Pgf outer(base.node().a);
        const Pgf inner(base.node().b);
        return pgf_coefficients(pgf_compound(outer, pgf_thin(inner, node.scale)), n_max);
      }
      if (node.scale < 1.0) {
        const std::size_t src = thinning_source_size(n_max, node.scale);
        const bool cheap = base.kind() == PgfKind::closed_form || base.kind() == PgfKind::series ||
                           base.kind() == PgfKind::identity;
        if (cheap || src <= 4000) {
          const PmfTable b = pgf_coefficients(base, static_cast<int>(src));
          return finish(binomial_thin(b.probs, node.scale, n_max + 1), "binomial_thinning");
        }
      }
      return contour_coefficients(p, n_max);
    }
    case PgfKind::custom:
      if (node.has_table && node.table.size() > static_cast<std::size_t>(n_max)) {
        PmfTable t = node.table;
        t.probs.resize(n_max + 1);
        t.tail_mass = std::max(0.0, 1.0 - t.sum());
        return t;
      }
      return contour_coefficients(p, n_max);
    case PgfKind::composed: {
      const Pgf outer(node.a);
      const Pgf inner(node.b);
      const PmfTable in = pgf_coefficients(inner, n_max);
      if (in.probs[0] == 0.0) {
        const PmfTable out = pgf_coefficients(outer, n_max);
        return finish(series::compose(out.probs, in.probs, n_max), "series_composition");
      }
      const double c = in.probs[0];
      const double reach = 2.0 * (n_max + 40.0) / -std::log(c) + n_max;
      if (c < 0.999 && reach < 20000.0) {
        // expand the outer pgf about c: sum_n p_n C(n,k) c^{n-k}, all terms positive
        const PmfTable out = pgf_coefficients(outer, static_cast<int>(reach));
        std::vector<CompensatedSum> acc(n_max + 1);
        const double lc = std::log(c);
        for (long n = 0; n < static_cast<long>(out.size()); ++n) {
          const double pn = out.probs[n];
          if (pn == 0.0) continue;
          const long top = std::min<long>(n, n_max);
          double t = std::exp(std::lgamma(n + 1.0) - std::lgamma(top + 1.0) - std::lgamma(n - top + 1.0) +
                              (n - top) * lc);
          for (long k = top; k >= 0; --k) {
            acc[k].add(pn * t);
            t *= k * c / (n - k + 1.0);
          }
        }
        std::vector<double> shifted(n_max + 1);
        for (int k = 0; k <= n_max; ++k) shifted[k] = acc[k].value();
        std::vector<double> rest = in.probs;
        rest[0] = 0.0;
        return finish(series::compose(shifted, rest, n_max), "shifted_series_composition");
      }
      return contour_coefficients(p, n_max);
    }
  }
  return contour_coefficients(p, n_max);
}

}  // namespace sibuya

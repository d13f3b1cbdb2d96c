#include "sibuya/moments.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <json.hpp>

#include "sibuya/distributions.hpp"
#include "sibuya/errors.hpp"

namespace sibuya {
namespace {

FactorialMoments finish(std::vector<double> raw, std::vector<double> error, std::string method) {
  FactorialMoments m;
  m.raw = std::move(raw);
  m.error = std::move(error);
  m.method = std::move(method);
  m.scaled.resize(m.raw.size(), 1.0);
  if (m.raw.size() > 1) {
    const double mean = m.raw[1];
    for (std::size_t j = 2; j < m.raw.size(); ++j) m.scaled[j] = m.raw[j] / std::pow(mean, j);
  }
  return m;
}

void require_finite(const DistributionSpec& spec, int j_max) {
  const auto tau = tail_index(spec);
  if (!tau || j_max < 1) return;
  const int first_bad = static_cast<int>(std::ceil(*tau - 1e-12));
  const int order = std::max(first_bad, 1);
  if (order <= j_max) {
    std::ostringstream msg;
    msg << "factorial moment of order " << order << " is infinite for " << spec.describe()
        << " (tail index " << *tau << ")";
    throw InfiniteMomentError(msg.str());
  }
}

// G^(j)(1) for G(w) = (1 - (1 - b w)^gamma) / (1 - (1 - b)^gamma).
std::vector<double> extended_raw(double b, double gamma, int j_max) {
  std::vector<double> raw(j_max + 1, 1.0);
  const double c = -std::expm1(gamma * std::log1p(-b));
  double fall = 1.0;
  for (int j = 1; j <= j_max; ++j) {
    fall *= gamma - (j - 1);
    raw[j] = -std::pow(-b, j) * fall * std::pow(1.0 - b, gamma - j) / c;
  }
  return raw;
}

std::optional<std::vector<double>> closed_form_raw(const DistributionSpec& spec, int j_max) {
  const Params& p = spec.params();
  std::vector<double> raw(j_max + 1, 1.0);
  switch (spec.family()) {
    case Family::nbd:
    case Family::geometric: {
      const double ratio = p.q / (1.0 - p.q);
      for (int j = 1; j <= j_max; ++j) raw[j] = raw[j - 1] * (p.k + j - 1) * ratio;
      return raw;
    }
    case Family::poisson:
      for (int j = 1; j <= j_max; ++j) raw[j] = raw[j - 1] * p.lambda;
      return raw;
    case Family::bernoulli:
      for (int j = 1; j <= j_max; ++j) raw[j] = j == 1 ? p.a : 0.0;
      return raw;
    case Family::cmp2: {
      // E N^(j) = theta^{j/2} I_j(2 sqrt theta) / I_0(2 sqrt theta)
      const double z = 2.0 * std::sqrt(p.theta);
      const double i0 = std::cyl_bessel_i(0.0, z);
      for (int j = 1; j <= j_max; ++j) {
        raw[j] = std::pow(p.theta, 0.5 * j) * std::cyl_bessel_i(static_cast<double>(j), z) / i0;
      }
      return raw;
    }
    case Family::extended_sibuya:
      if (p.b < 1.0) return extended_raw(p.b, p.gamma, j_max);
      return std::nullopt;
    case Family::zero_truncated_nbd:
      return extended_raw(p.q, -p.k, j_max);
    case Family::logarithmic: {
      const double L = -std::log1p(-p.theta);
      double fact = 1.0;
      for (int j = 1; j <= j_max; ++j) {
        if (j > 1) fact *= j - 1;
        raw[j] = fact * std::pow(p.theta / (1.0 - p.theta), j) / L;
      }
      return raw;
    }
    default:
      return std::nullopt;
  }
}

double falling(double n, int j) {
  double f = 1.0;
  for (int i = 0; i < j; ++i) f *= n - i;
  return f;
}

// Tail-completed sums; done is true when the truncation error is negligible.
FactorialMoments sum_table(const PmfTable& t, int j_max, bool* done) {
  const long N = static_cast<long>(t.size()) - 1;
  std::vector<CompensatedSum> acc(j_max + 1);
  for (long n = 0; n <= N; ++n) {
    const double p = t.probs[n];
    if (p == 0.0) continue;
    for (int j = 0; j <= j_max; ++j) acc[j].add(falling(static_cast<double>(n), j) * p);
  }
  std::vector<double> raw(j_max + 1), err(j_max + 1, 0.0);
  for (int j = 0; j <= j_max; ++j) raw[j] = acc[j].value();
  raw[0] = 1.0;
  bool ok = true;
  const double pN = N >= 0 ? t.probs[N] : 0.0;
  if (t.tail_exponent) {
    const double tau = *t.tail_exponent - 1.0;
    for (int j = 1; j <= j_max; ++j) {
      if (!(j < tau)) {
        std::ostringstream msg;
        msg << "factorial moment of order " << j << " is infinite (tail exponent " << *t.tail_exponent
            << ")";
        throw InfiniteMomentError(msg.str());
      }
      // p_n ~ p_N (N/n)^{1+tau} beyond the table
      const double tail = pN * std::pow(N, 1.0 + tau) * std::pow(N + 0.5, j - tau) / (tau - j);
      raw[j] += tail;
      err[j] = std::abs(tail) * (2.0 * j + 2.0) / N;
      if (err[j] > 1e-10 * std::abs(raw[j])) ok = false;
    }
  } else if (N >= 1 && pN > 0.0) {
    const double rho = t.probs[N] / t.probs[N - 1];
    for (int j = 1; j <= j_max; ++j) {
      if (!(rho < 1.0)) {
        err[j] = std::numeric_limits<double>::infinity();
        ok = false;
        continue;
      }
      const double reach = N + 1.0 + j / (1.0 - rho);
      err[j] = pN * rho / (1.0 - rho) * std::pow(reach, j);
      if (err[j] > 1e-13 * std::abs(raw[j])) ok = false;
    }
  }
  if (done) *done = ok;
  return finish(raw, err, "numeric");
}

}  // namespace

FactorialMoments factorial_moments(const PmfTable& table, int j_max) {
  if (j_max < 0) throw ParameterError("j_max must be >= 0");
  return sum_table(table, j_max, nullptr);
}

FactorialMoments factorial_moments(const DistributionSpec& spec, int j_max) {
  if (j_max < 0) throw ParameterError("j_max must be >= 0");
  require_finite(spec, j_max);
  if (auto raw = closed_form_raw(spec, j_max)) {
    return finish(*raw, std::vector<double>(j_max + 1, 0.0), "closed_form");
  }
  FactorialMoments m;
  for (long n = 256;; n *= 2) {
    PmfTable t = pmf_table(spec, n);
    bool done = false;
    m = sum_table(t, j_max, &done);
    if (done || n >= (1L << 20)) return m;
  }
}

FactorialMoments factorial_moments(const Pgf& p, int j_max) {
  if (j_max < 0) throw ParameterError("j_max must be >= 0");
  if (p.kind() == PgfKind::closed_form) return factorial_moments(*p.node().spec, j_max);
  if (p.kind() == PgfKind::identity) {
    std::vector<double> raw(j_max + 1, 0.0);
    raw[0] = 1.0;
    if (j_max >= 1) raw[1] = 1.0;
    return finish(raw, std::vector<double>(j_max + 1, 0.0), "closed_form");
  }
  FactorialMoments m;
  for (long n = 256;; n *= 2) {
    PmfTable t = pgf_coefficients(p, n);
    bool done = false;
    m = sum_table(t, j_max, &done);
    if (done || n >= (1L << 16)) return m;
  }
}

ThinningInvarianceReport thinning_invariance_check(const DistributionSpec& spec,
                                                   const std::vector<double>& a_list, int j_max) {
  ThinningInvarianceReport rep;
  rep.original = factorial_moments(spec, j_max).scaled;
  rep.pass = true;
  const Pgf q = Pgf::closed_form(spec);
  for (double a : a_list) {
    ThinningInvarianceRow row;
    row.a = a;
    if (a == 1.0) {
      row.scaled = rep.original;
    } else {
      FactorialMoments fm;
      const Pgf t = pgf_thin(q, a);
      for (long n = 256;; n *= 2) {
        PmfTable tab = pgf_coefficients(t, n);
        fm = factorial_moments(tab, j_max);
        bool done = true;
        for (int j = 1; j <= j_max; ++j) {
          if (!(fm.error[j] <= 1e-13 * std::abs(fm.raw[j]))) done = false;
        }
        if (done || n >= (1L << 16)) break;
      }
      row.scaled = fm.scaled;
    }
    for (int j = 1; j <= j_max; ++j) {
      const double want = rep.original[j];
      const double err = std::abs(row.scaled[j] - want) / std::max(std::abs(want), 1e-300);
      row.max_rel_err = std::max(row.max_rel_err, err);
    }
    row.pass = row.max_rel_err <= rep.tolerance;
    rep.pass = rep.pass && row.pass;
    rep.rows.push_back(std::move(row));
  }
  return rep;
}

std::vector<double> default_eps_ladder() {
  std::vector<double> eps;
  for (int k = 4; k <= 20; ++k) eps.push_back(std::ldexp(1.0, -k));
  return eps;
}

MomentVerdict abs_moment_classify(const Pgf& p, double r, const std::vector<double>& eps_ladder) {
  if (!(r > 0.0 && r < 1.0)) throw ParameterError("r must lie in (0, 1)");
  if (eps_ladder.size() < 4) throw ParameterError("eps ladder needs at least 4 rungs");
  for (std::size_t k = 0; k < eps_ladder.size(); ++k) {
    const double e = eps_ladder[k];
    if (!(e > 0.0 && e < 1.0) || (k > 0 && !(e < eps_ladder[k - 1]))) {
      throw ParameterError("eps ladder must be strictly decreasing inside (0, 1)");
    }
  }
  constexpr double kU = 50.0;
  // integrand in t = log u: (1 - Q(e^{-u})) u^{-r}
  const quad::Integrand f = [&](double t) {
    const double u = std::exp(t);
    return p.complement(std::exp(-u)) * std::exp(-r * t);
  };
  auto piece = [&](double u_lo, double u_hi) {
    return quad::gauss_kronrod(f, std::log(u_lo), std::log(u_hi), 1e-13, 1e-300, 4000).value;
  };

  std::vector<double> u;
  for (double e : eps_ladder) u.push_back(-std::log1p(-e));

  MomentVerdict v;
  v.r = r;
  CompensatedSum total;
  const double p0 = 1.0 - p.complement(0.0);
  total.add((1.0 - p0) * std::pow(kU, -r) / r);
  double lo = u[0];
  for (double hi : {1.0, 5.0, kU}) {
    if (hi > lo) {
      total.add(piece(lo, hi));
      lo = hi;
    }
  }
  v.diagnostics.emplace_back(eps_ladder[0], total.value());
  std::vector<double> d;
  for (std::size_t k = 1; k < u.size(); ++k) {
    d.push_back(piece(u[k], u[k - 1]));
    total.add(d.back());
    v.diagnostics.emplace_back(eps_ladder[k], total.value());
  }

  // d_k ~ A u_k^s (1 - c^s): successive increments shrink iff s > 0
  std::vector<double> s;
  for (std::size_t k = 1; k < d.size(); ++k) {
    if (d[k] > 0.0 && d[k - 1] > 0.0) {
      s.push_back(std::log(d[k] / d[k - 1]) / std::log(u[k + 1] / u[k]));
    }
  }
  if (s.size() < 3) {
    // increments vanished: the integrand is identically zero near u = 0
    v.finite = true;
    v.exponent = std::numeric_limits<double>::infinity();
  } else {
    const double s_last = s.back();
    v.exponent = s_last;
    v.finite = s_last > 0.0;
    const std::size_t m = s.size();
    const bool consistent = (s[m - 1] > 0.0) == (s[m - 2] > 0.0) && (s[m - 2] > 0.0) == (s[m - 3] > 0.0);
    v.low_confidence = !consistent || std::abs(s_last) < 0.02;
  }
  if (v.finite) {
    double rest = 0.0;
    if (std::isfinite(v.exponent)) {
      const double rho = d.back() / d[d.size() - 2];
      rest = d.back() * rho / (1.0 - rho);
    }
    const double integral = total.value() + rest;
    // -Gamma(-r) = Gamma(2 - r) / (r (1 - r))
    const double norm = std::tgamma(2.0 - r) / (r * (1.0 - r));
    v.estimate = integral / norm;
  }
  return v;
}

std::string to_json(const MomentVerdict& v) {
  nlohmann::json j;
  j["r"] = v.r;
  j["finite"] = v.finite;
  j["low_confidence"] = v.low_confidence;
  j["exponent"] = std::isfinite(v.exponent) ? nlohmann::json(v.exponent) : nlohmann::json(nullptr);
  j["estimate"] = v.estimate ? nlohmann::json(*v.estimate) : nlohmann::json(nullptr);
  nlohmann::json diag = nlohmann::json::array();
  for (const auto& [eps, val] : v.diagnostics) diag.push_back({eps, val});
  j["diagnostics"] = diag;
  return j.dump();
}

double f2_extended(double delta, double gamma) {
  if (!(delta > 0.0)) throw ParameterError("delta must be > 0");
  if (gamma == 0.0) return delta;
  return (1.0 - gamma) / gamma * std::expm1(delta * gamma);
}

double f2_extremum(double delta) {
  if (!(delta > 2.0)) throw NoRootError("F2 has no interior extremum for delta <= 2");
  // psi = gamma^2 dF2/dgamma = e^x (x (1 - gamma) - 1) + 1 with x = gamma delta
  auto psi = [delta](double gamma) {
    const double x = gamma * delta;
    if (x < 0.5) {
      CompensatedSum s;
      double xn = x * x, fact2 = 1.0, factn = 2.0;  // (n-2)!, n!
      for (int n = 2; n < 60; ++n) {
        const double term = xn * ((n - 1) / factn - 1.0 / (delta * fact2));
        s.add(term);
        if (std::abs(term) < 1e-18 * std::abs(s.value())) break;
        xn *= x;
        fact2 *= n - 1;
        factn *= n + 1;
      }
      return s.value();
    }
    return std::exp(x) * (x * (1.0 - gamma) - 1.0) + 1.0;
  };
  const double lo = 1e-6, hi = 1.0 - 1e-6;
  if (psi(lo) <= 0.0) return lo;
  return bisect(psi, lo, hi);
}

}  // namespace sibuya

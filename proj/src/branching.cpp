#include "sibuya/branching.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include <json.hpp>

#include "sibuya/distributions.hpp"
#include "sibuya/errors.hpp"
#include "sibuya/numeric.hpp"
#include "sibuya/rng.hpp"

namespace sibuya {

std::string to_string(Criticality c) {
  switch (c) {
    case Criticality::subcritical: return "subcritical";
    case Criticality::critical: return "critical";
    case Criticality::supercritical: return "supercritical";
  }
  return "unknown";
}

namespace {

Criticality classify(double mean) {
  if (std::abs(mean - 1.0) <= 1e-12) return Criticality::critical;
  return mean < 1.0 ? Criticality::subcritical : Criticality::supercritical;
}

// h = num / den with the running magnitude kept for the sign test
std::vector<long> divide_tracking(const std::vector<double>& num, const std::vector<double>& den,
                                  std::vector<double>& out, double rel) {
  const long n = static_cast<long>(out.size());
  std::vector<long> negative;
  for (long k = 0; k < n; ++k) {
    CompensatedSum s;
    s.add(k < static_cast<long>(num.size()) ? num[k] : 0.0);
    for (long i = 1; i <= k && i < static_cast<long>(den.size()); ++i) s.add(-den[i] * out[k - i]);
    out[k] = s.value() / den[0];
    if (out[k] < -rel * std::abs(s.magnitude() / den[0])) negative.push_back(k);
  }
  return negative;
}

void check_extended(double b, double gamma) {
  if (!(b > 0.0 && b <= 1.0)) throw ParameterError("b must lie in (0, 1]");
  if (!std::isfinite(gamma) || gamma >= 1.0) throw ParameterError("gamma must be finite and < 1");
  if (b == 1.0 && gamma <= 0.0) throw ParameterError("b = 1 needs gamma in (0, 1)");
}

}  // namespace

BranchingModel branching_model(PmfTable offspring) {
  if (offspring.probs.empty()) throw ParameterError("empty offspring table");
  CompensatedSum mean, second;
  for (std::size_t k = 0; k < offspring.size(); ++k) {
    const double p = offspring.probs[k];
    if (!(p >= 0.0)) throw ParameterError("offspring probabilities must be nonnegative");
    const double kk = static_cast<double>(k);
    mean.add(kk * p);
    second.add(kk * (kk - 1.0) * p);
  }
  BranchingModel m;
  m.mean_offspring = mean.value();
  m.second_factorial = second.value();
  m.criticality = classify(m.mean_offspring);
  m.offspring = std::move(offspring);
  return m;
}

Pgf OffspringSeries::offspring() const {
  PmfTable t;
  t.probs.assign(coefficients.begin(), coefficients.begin() + (reliable_order + 1));
  t.provenance = "offspring_series";
  t.normalized = false;
  return Pgf::series(std::move(t));
}

OffspringSeries offspring_from_progeny(const Pgf& q, long n_max) {
  if (n_max < 0) throw ParameterError("n_max must be >= 0");
  const PmfTable table = pgf_coefficients(q, static_cast<int>(n_max + 1));
  if (std::abs(table[0]) > 1e-14) throw InversionError("progeny pgf needs Q(0) = 0");
  if (!(table[1] > 0.0)) throw InversionError("progeny pgf needs p_1 > 0");
  std::vector<double> a = table.probs;
  a.resize(n_max + 2, 0.0);
  a[0] = 0.0;
  // Q^{-1}(u) = u V(u), H = 1 / V
  auto invert = [n_max](const std::vector<double>& src, std::vector<double>& h) {
    const Series g = series::revert(src, static_cast<std::size_t>(n_max + 1));
    const std::vector<double> v(g.begin() + 1, g.end());
    h.assign(n_max + 1, 0.0);
    return divide_tracking({1.0}, v, h, 1e-12);
  };
  OffspringSeries out;
  const auto candidates = invert(a, out.coefficients);
  // reversion amplifies input rounding roughly geometrically in n; measure it
  // by repeating with the coefficients perturbed near their own accuracy
  out.noise.assign(n_max + 1, 0.0);
  for (std::uint64_t trial = 1; trial <= 2; ++trial) {
    CounterRng rng(0x5eed, trial);
    std::vector<double> b = a;
    for (std::size_t k = 2; k < b.size(); ++k) b[k] *= 1.0 + (rng.uniform() - 0.5) * 0x1.0p-43;
    std::vector<double> h;
    invert(b, h);
    for (long k = 0; k <= n_max; ++k) {
      out.noise[k] = std::max(out.noise[k], 32.0 * std::abs(h[k] - out.coefficients[k]));
    }
  }
  double top = 0.0;
  for (double v : out.coefficients) top = std::max(top, std::abs(v));
  for (double& e : out.noise) e = std::max(e, top * 0x1.0p-52);
  out.reliable_order = -1;
  for (long k = 0; k <= n_max && out.noise[k] <= 1e-10; ++k) out.reliable_order = k;
  for (long k : candidates) {
    if (out.coefficients[k] < -out.noise[k]) out.negative_indices.push_back(k);
  }
  return out;
}

double extended_offspring(double u, double b, double gamma) {
  check_extended(b, gamma);
  if (u == 0.0) {
    if (gamma == 0.0) return -b / std::log1p(-b);
    return b * gamma / (-std::expm1(gamma * std::log1p(-b)));
  }
  if (gamma == 0.0) return b * u / -std::expm1(u * std::log1p(-b));
  const double c = -std::expm1(gamma * std::log1p(-b));
  return u * b / -std::expm1(std::log1p(-u * c) / gamma);
}

SignDiagnosis progeny_sign_diagnosis(double b, double gamma, long n_max) {
  check_extended(b, gamma);
  if (n_max < 0) throw ParameterError("n_max must be >= 0");
  // 1 - (1 - u c)^{1/gamma} = u E1(u), expanded in v = u s so that the
  // coefficients stay bounded when |c| > 1
  std::vector<double> e1(n_max + 1);
  double s = 1.0;
  if (gamma == 0.0) {
    const double l = std::log1p(-b);
    double t = 1.0;
    for (long n = 1; n <= n_max + 1; ++n) {
      t *= l / n;
      e1[n - 1] = -t;
    }
  } else {
    const double alpha = 1.0 / gamma;
    const double c = -std::expm1(gamma * std::log1p(-b));
    s = std::max(1.0, std::abs(c));
    double t = 1.0;
    for (long n = 1; n <= n_max + 1; ++n) {
      t *= (alpha - (n - 1)) / n * (-c / s);
      e1[n - 1] = -t * s;
    }
  }
  SignDiagnosis d;
  d.coefficients.resize(n_max + 1);
  const auto neg = divide_tracking({b}, e1, d.coefficients, 1e-12);
  double scale = 1.0;
  for (double& v : d.coefficients) {
    v *= scale;
    scale *= s;
  }
  if (!neg.empty()) {
    d.first_negative = neg.front();
    d.is_progeny_evidence = false;
  }
  return d;
}

std::pair<double, double> offspring_moments(double b, double gamma) {
  check_extended(b, gamma);
  if (gamma == 0.0) throw DomainError("offspring moments at gamma = 0 need the logarithmic closed form");
  // D(u) = 1 - (1 - u c)^{1/gamma}, H = u b / D, D(1) = b
  const double x = 1.0 - b;
  const double cx = std::pow(x, 1.0 - gamma) - x;                   // c x^{1-gamma}
  const double root = std::pow(x, 0.5 - gamma) - std::sqrt(x);      // c x^{1/2-gamma}
  const double d1 = cx / gamma;
  const double d2 = -(1.0 - gamma) / (gamma * gamma) * root * root;
  const double mean = 1.0 - d1 / b;
  const double second = -2.0 * d1 / b + 2.0 * d1 * d1 / (b * b) - d2 / b;
  return {mean, second};
}

BranchingModel extended_branching_model(double b, double gamma) {
  check_extended(b, gamma);
  if (gamma < 0.5) {
    std::ostringstream msg;
    msg << "extended Sibuya(" << b << ", " << gamma << ") is not a progeny law";
    throw DomainError(msg.str());
  }
  // coefficients until the cumulative sum leaves less than 1e-12 (or a hard cap)
  long n = 256;
  SignDiagnosis d;
  for (;;) {
    d = progeny_sign_diagnosis(b, gamma, n);
    double total = 0.0;
    for (double v : d.coefficients) total += v;
    if (1.0 - total < 1e-12 || n >= 8192) break;
    n *= 2;
  }
  PmfTable t;
  t.probs = d.coefficients;
  for (double& v : t.probs) v = std::max(v, 0.0);
  double total = 0.0;
  for (double v : t.probs) total += v;
  t.tail_mass = std::max(0.0, 1.0 - total);
  t.provenance = "extended_offspring";
  BranchingModel m = branching_model(std::move(t));
  // the table misses the tail; report the analytic moments
  const auto [mean, second] = offspring_moments(b, gamma);
  m.mean_offspring = mean;
  m.second_factorial = second;
  m.criticality = classify(mean);
  return m;
}

ProgenySimulation simulate_progeny(const BranchingModel& model, long replicas, std::uint64_t seed,
                                   long node_budget) {
  if (replicas <= 0) throw ParameterError("replicas must be positive");
  if (node_budget <= 0) throw ParameterError("node budget must be positive");
  if (model.criticality == Criticality::supercritical) {
    throw DomainError("progeny simulation needs a subcritical or critical offspring law");
  }
  const auto& p = model.offspring.probs;
  std::vector<double> cdf;
  double acc = 0.0;
  for (double v : p) {
    acc += v;
    cdf.push_back(acc);
    if (acc >= 1.0 - 1e-12) break;
  }
  cdf.back() = std::numeric_limits<double>::infinity();
  const long last = static_cast<long>(cdf.size()) - 1;

  std::vector<long> hist(node_budget + 1, 0);
  long hits = 0;
  for (long r = 0; r < replicas; ++r) {
    CounterRng rng(seed, static_cast<std::uint64_t>(r));
    long total = 1, pending = 1;
    bool over = false;
    while (pending > 0) {
      --pending;
      const double u = rng.uniform();
      const long k = std::min<long>(last, std::upper_bound(cdf.begin(), cdf.end(), u) - cdf.begin());
      total += k;
      pending += k;
      if (total > node_budget) {
        over = true;
        break;
      }
    }
    if (over) {
      ++hits;
    } else {
      ++hist[total];
    }
  }
  if (hits > replicas / 5) {
    std::ostringstream msg;
    msg << hits << " of " << replicas << " replicas exceeded the node budget " << node_budget;
    throw BudgetError(msg.str());
  }
  ProgenySimulation out;
  out.replicas = replicas;
  out.budget_hits = hits;
  long top = node_budget;
  while (top > 0 && hist[top] == 0) --top;
  out.progeny.probs.resize(top + 1);
  for (long y = 0; y <= top; ++y) out.progeny.probs[y] = static_cast<double>(hist[y]) / replicas;
  out.progeny.tail_mass = static_cast<double>(hits) / replicas;
  out.progeny.provenance = "progeny_simulation";
  return out;
}

std::string to_json(const SignDiagnosis& d, long shown) {
  nlohmann::json j;
  j["is_progeny_evidence"] = d.is_progeny_evidence;
  j["first_negative"] = d.first_negative ? nlohmann::json(*d.first_negative) : nlohmann::json(nullptr);
  const long m = std::min<long>(shown, static_cast<long>(d.coefficients.size()));
  j["coefficients"] = std::vector<double>(d.coefficients.begin(), d.coefficients.begin() + m);
  return j.dump();
}

}  // namespace sibuya

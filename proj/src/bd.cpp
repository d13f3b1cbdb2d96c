#include "sibuya/bd.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <json.hpp>

#include "sibuya/distributions.hpp"
#include "sibuya/errors.hpp"
#include "sibuya/rng.hpp"

namespace sibuya {
namespace {

double falling_sum(const std::vector<double>& amp, double j) {
  double total = 0.0;
  double ff = 1.0;
  for (std::size_t k = 0; k < amp.size(); ++k) {
    total += amp[k] * ff;
    ff *= (j - static_cast<double>(k));
  }
  return total;
}

/// Roots of a polynomial (lowest degree first) by Durand-Kerner.
std::vector<cdouble> poly_roots(std::vector<double> c) {
  while (c.size() > 1 && c.back() == 0.0) c.pop_back();
  const std::size_t deg = c.size() - 1;
  std::vector<cdouble> roots;
  if (deg == 0) return roots;
  std::vector<double> monic(c.size());
  for (std::size_t i = 0; i < c.size(); ++i) monic[i] = c[i] / c.back();
  double bound = 1.0;
  for (std::size_t i = 0; i < deg; ++i) bound = std::max(bound, 1.0 + std::abs(monic[i]));
  const cdouble seed(0.4, 0.9);
  for (std::size_t i = 0; i < deg; ++i) roots.push_back(bound * std::pow(seed, static_cast<int>(i)));
  for (int iter = 0; iter < 500; ++iter) {
    double change = 0.0;
    for (std::size_t i = 0; i < deg; ++i) {
      cdouble num = series::eval(monic, roots[i]);
      cdouble den = 1.0;
      for (std::size_t k = 0; k < deg; ++k) {
        if (k != i) den *= roots[i] - roots[k];
      }
      if (den == 0.0) den = 1e-300;
      const cdouble step = num / den;
      roots[i] -= step;
      change = std::max(change, std::abs(step));
    }
    if (change < 1e-15 * bound) break;
  }
  for (auto& r : roots) {
    if (std::abs(r.imag()) < 1e-12 * std::max(1.0, std::abs(r.real()))) r = r.real();
  }
  return roots;
}

bool complex_less(const cdouble& x, const cdouble& y) {
  if (x.real() != y.real()) return x.real() < y.real();
  return x.imag() < y.imag();
}

std::vector<cdouble> negated_sorted(std::vector<cdouble> roots) {
  for (auto& r : roots) r = -r;
  std::sort(roots.begin(), roots.end(), complex_less);
  return roots;
}

}  // namespace

double BdModel::birth_rate(long j) const { return falling_sum(alpha, static_cast<double>(j)); }

double BdModel::death_rate(long j) const {
  return static_cast<double>(j) * falling_sum(beta, static_cast<double>(j - 1));
}

GFunction BdModel::g() const { return GFunction::from_amplitudes(alpha, beta); }

long BdModel::support_floor() const {
  if (floor) return *floor;
  const GFunction gf = g();
  double prev = 0.0;
  for (long j = 0; j <= 1000; ++j) {
    const double v = gf(j);
    if (v > 0.0 && (j == 0 || prev <= 0.0)) return j;
    prev = v;
  }
  return 0;
}

void BdModel::validate() const {
  if (alpha.empty() || beta.empty()) throw ParameterError("alpha and beta must be non-empty");
  for (double a : alpha) {
    if (!std::isfinite(a)) throw ParameterError("alpha amplitudes must be finite");
  }
  bool any_beta = false;
  for (double b : beta) {
    if (!std::isfinite(b)) throw ParameterError("beta amplitudes must be finite");
    if (b < 0.0) throw ParameterError("beta amplitudes must be >= 0");
    any_beta = any_beta || b > 0.0;
  }
  if (!any_beta) throw ParameterError("at least one beta amplitude must be > 0");
  if (floor && *floor < 0) throw ParameterError("floor must be >= 0");
}

BdModel bd_model_from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ParameterError(std::string("model JSON: ") + e.what());
  }
  BdModel m;
  try {
    m.alpha = j.at("alpha").get<std::vector<double>>();
    m.beta = j.at("beta").get<std::vector<double>>();
    if (j.contains("floor") && !j["floor"].is_null()) m.floor = j["floor"].get<long>();
  } catch (const nlohmann::json::exception& e) {
    throw ParameterError(std::string("model JSON: ") + e.what());
  }
  m.validate();
  return m;
}

std::string bd_model_to_json(const BdModel& model) {
  nlohmann::json j;
  j["alpha"] = model.alpha;
  j["beta"] = model.beta;
  j["floor"] = model.floor ? nlohmann::json(*model.floor) : nlohmann::json(nullptr);
  return j.dump();
}

// ---------------------------------------------------------------- solver

namespace {

struct WeightWalker {
  const GFunction& g;
  long n;
  double lu = 0.0;  // log u_n
  bool dead = false;

  double value() const { return dead ? 0.0 : std::exp(lu); }
  void step() {
    if (dead) {
      ++n;
      return;
    }
    const double gv = g(n);
    if (!(gv > 0.0)) {
      dead = true;
    } else {
      lu += std::log(gv) - std::log(static_cast<double>(n + 1));
    }
    ++n;
  }
};

double direct_sum(const GFunction& g, long floor, std::string& kind) {
  WeightWalker w{g, floor};
  CompensatedSum s;
  for (long it = 0; it < 100'000'000; ++it) {
    const double u = w.value();
    s.add(u);
    if (w.dead) {
      kind = "finite";
      return s.value();
    }
    const double ratio = g(w.n) / (w.n + 1.0);
    if (u < 1e-18 * s.value() && ratio < 1.0) return s.value();
    w.step();
  }
  throw ConvergenceError("stationary weights did not decay within 1e8 terms");
}

double power_law_sum(const GFunction& g, long floor, double s_exp) {
  constexpr int kLevels = 5;
  const long n0 = 2048 + floor;
  std::vector<double> partial;
  WeightWalker w{g, floor};
  CompensatedSum s;
  long target = n0;
  while (static_cast<int>(partial.size()) < kLevels) {
    while (w.n < target) {
      s.add(w.value());
      w.step();
    }
    partial.push_back(s.value());
    target *= 2;
  }
  for (int level = 1; level < kLevels; ++level) {
    const double f = std::pow(2.0, s_exp - 1.0 + (level - 1));
    for (int k = 0; k + level < kLevels; ++k) {
      partial[k] = (f * partial[k + 1] - partial[k]) / (f - 1.0);
    }
  }
  return partial[0];
}

}  // namespace

StationarySolution stationary_solve(const BdModel& model, long n_max) {
  model.validate();
  if (n_max < 0) throw ParameterError("n_max must be >= 0");
  StationarySolution sol;
  sol.g = model.g();
  sol.floor = model.support_floor();
  const GFunction& g = sol.g;
  const long i = sol.floor;

  for (long j = i; j <= std::max(n_max, i); ++j) {
    const double lam = model.birth_rate(j);
    const double mu = model.death_rate(j + 1);
    if (lam < 0.0 || mu < 0.0) {
      std::ostringstream msg;
      msg << "negative rate at state " << j << " (lambda = " << lam << ", mu_next = " << mu << ")";
      throw RateError(msg.str());
    }
    if (lam > 0.0 && mu == 0.0) {
      std::ostringstream msg;
      msg << "death rate vanishes at state " << j + 1 << " above the floor";
      throw RateError(msg.str());
    }
    if (lam == 0.0) break;  // nothing above j is reachable
  }

  const auto& num = g.numerator();
  const auto& den = g.denominator();
  const long da = static_cast<long>(num.size()) - 1;
  const long db = static_cast<long>(den.size()) - 1;
  const long e = da - db - 1;
  const double z = num.back() / den.back();
  sol.hyper.a = negated_sorted(poly_roots(num));
  sol.hyper.b = negated_sorted(poly_roots(den));
  sol.hyper.z = z;

  double total = 0.0;
  if (z < 0.0 || e < 0 || (e == 0 && z < 1.0 - 1e-12)) {
    sol.tail_kind = z < 0.0 ? "finite" : (e < 0 ? "superexponential" : "geometric");
    total = direct_sum(g, i, sol.tail_kind);
  } else if (e > 0 || z > 1.0 + 1e-12) {
    throw DivergenceError("stationary weights grow: limsup g(n)/(n+1) >= 1");
  } else {
    const double a_sub = da >= 1 ? num[da - 1] / num[da] : 0.0;
    const double c_sub = 1.0 + (db >= 1 ? den[db - 1] / den[db] : 0.0);
    const double s_exp = c_sub - a_sub;
    if (!(s_exp > 1.0 + 1e-12)) {
      std::ostringstream msg;
      msg << "power-law weights n^-" << s_exp << " are not summable";
      throw DivergenceError(msg.str());
    }
    sol.tail_kind = "power_law";
    total = power_law_sum(g, i, s_exp);
  }
  sol.normalizer = total;

  sol.pmf = table_from_g(g, i, 1.0 / total, n_max);
  sol.pmf.provenance = "stationary_solve";
  if (sol.tail_kind == "power_law") {
    const double a_sub = da >= 1 ? num[da - 1] / num[da] : 0.0;
    const double c_sub = 1.0 + (db >= 1 ? den[db - 1] / den[db] : 0.0);
    sol.pmf.tail_exponent = c_sub - a_sub;
  }

  double worst = 0.0;
  for (long j = i; j < n_max; ++j) {
    const double rhs = model.birth_rate(j) * sol.pmf.probs[j];
    const double lhs = model.death_rate(j + 1) * sol.pmf.probs[j + 1];
    worst = std::max(worst, std::abs(lhs - rhs) / std::max(rhs, 1e-300));
  }
  sol.max_balance_residual = worst;
  return sol;
}

// ------------------------------------------------------------ amplitudes

BdModel amplitudes_for(const DistributionSpec& spec) {
  const Params& p = spec.params();
  const double g = p.gamma;
  BdModel m;
  switch (spec.family()) {
    case Family::generalized_sibuya:
      if (p.nu - g < 0.0) {
        throw NegativeAmplitudeError("generalized Sibuya amplitudes give alpha_0 = nu - gamma < 0");
      }
      m.alpha = {p.nu - g, 2.0 + p.nu - g, 1.0};
      m.beta = {p.nu + 1.0, 1.0};
      m.floor = 1;
      break;
    case Family::shifted_generalized_sibuya:
      m.alpha = {1.0 + p.nu - g, 3.0 + p.nu - g, 1.0};
      m.beta = {p.nu + 2.0, 1.0};
      m.floor = 0;
      break;
    case Family::extended_sibuya:
      m.alpha = {0.0, p.b * (1.0 - g), p.b};
      m.beta = {0.0, 1.0};
      m.floor = 1;
      break;
    case Family::shifted_extended_sibuya:
      m.alpha = {p.b * (1.0 - g), p.b * (3.0 - g), p.b};
      m.beta = {2.0, 1.0};
      m.floor = 0;
      break;
    case Family::nbd:
      m.alpha = {p.q * p.k, p.q};
      m.beta = {1.0};
      m.floor = 0;
      break;
    case Family::geometric:
      m.alpha = {0.0, 2.0 * p.q, p.q};
      m.beta = {0.0, 1.0};
      m.floor = 0;
      break;
    case Family::logarithmic:
      m.alpha = {0.0, p.theta, p.theta};
      m.beta = {0.0, 1.0};
      m.floor = 1;
      break;
    case Family::zero_inflated_log:
      m.alpha = {p.theta, 3.0 * p.theta, p.theta};
      m.beta = {2.0, 1.0};
      m.floor = 0;
      break;
    case Family::cmp2:
      m.alpha = {p.theta};
      m.beta = {1.0, 1.0};
      m.floor = 0;
      break;
    default:
      throw UnsupportedError("no birth-death amplitudes for " + spec.describe());
  }
  return m;
}

// ------------------------------------------------------ hypergeometric pgf

Pgf hypergeometric_pgf(const StationarySolution& sol) {
  const long i = sol.floor;
  const double pi = sol.pmf[i];
  std::vector<cdouble> a = sol.hyper.a;
  std::vector<cdouble> b = sol.hyper.b;
  for (auto& x : a) x += static_cast<double>(i);
  for (auto& x : b) x += static_cast<double>(i);
  a.push_back(1.0);
  b.push_back(static_cast<double>(i) + 1.0);
  const double z = sol.hyper.z;
  bool usable = true;
  for (const auto& x : b) {
    if (x.imag() == 0.0 && x.real() <= 0.0 && x.real() == std::round(x.real())) usable = false;
  }
  const bool unit_radius = a.size() == b.size() + 1;
  const GFunction g = sol.g;
  const double radius = unit_radius ? std::min(1.0, 1.0 / std::abs(z)) : 1e300;

  auto fn = [=](cdouble w) -> cdouble {
    if (w == 1.0) return 1.0;
    const cdouble x = z * w;
    if (unit_radius && std::abs(x) > 1.0) {
      std::ostringstream msg;
      msg << "|z w| = " << std::abs(x) << " outside the series radius";
      throw ConvergenceError(msg.str());
    }
    cdouble lead = pi;
    for (long k = 0; k < i; ++k) lead *= w;
    if (usable) return lead * hypergeometric_pfq(a, b, x);
    cdouble term = lead, sum = lead;
    for (long n = i; n < i + 10'000'000; ++n) {
      term *= g(n) / (n + 1.0) * w;
      sum += term;
      if (std::abs(term) < 1e-17 * std::abs(sum)) return sum;
      if (term == 0.0) return sum;
    }
    throw ConvergenceError("hypergeometric pgf series did not converge");
  };
  return Pgf::custom(fn, radius, "hypergeometric_pgf", sol.pmf);
}

// ------------------------------------------------------------- simulator

std::vector<double> TrajectoryStats::probabilities() const {
  std::vector<double> p(occupancy.size(), 0.0);
  double total = 0.0;
  for (double t : occupancy) total += t;
  if (total <= 0.0) return p;
  for (std::size_t j = 0; j < p.size(); ++j) p[j] = occupancy[j] / total;
  return p;
}

void TrajectoryStats::merge(const TrajectoryStats& o) {
  auto grow = [](auto& v, std::size_t n) {
    if (v.size() < n) v.resize(n, 0);
  };
  grow(occupancy, o.occupancy.size());
  grow(up, o.up.size());
  grow(down, o.down.size());
  for (std::size_t j = 0; j < o.occupancy.size(); ++j) occupancy[j] += o.occupancy[j];
  for (std::size_t j = 0; j < o.up.size(); ++j) up[j] += o.up[j];
  for (std::size_t j = 0; j < o.down.size(); ++j) down[j] += o.down[j];
  observed_time += o.observed_time;
  time_at_cap += o.time_at_cap;
  events += o.events;
  n_cap = std::max(n_cap, o.n_cap);
}

namespace {

long default_cap(const BdModel& model) {
  try {
    const StationarySolution sol = stationary_solve(model, 100'000);
    CompensatedSum c;
    for (std::size_t j = 0; j < sol.pmf.size(); ++j) {
      c.add(sol.pmf.probs[j]);
      if (c.value() >= 0.999) return std::max<long>(10, 10 * static_cast<long>(j));
    }
  } catch (const Error&) {
  }
  return 10'000;
}

TrajectoryStats run_one(const BdModel& model, const SimulationOptions& opts, long floor, long cap,
                        std::uint64_t replica) {
  CounterRng rng(opts.seed, replica);
  TrajectoryStats st;
  st.n_cap = cap;
  long j = opts.initial.value_or(floor);
  const double burn = opts.burn_fraction * opts.t_end;
  double t = 0.0;
  auto ensure = [&](long state) {
    const std::size_t need = static_cast<std::size_t>(state) + 2;
    if (st.occupancy.size() < need) {
      st.occupancy.resize(need, 0.0);
      st.up.resize(need, 0);
      st.down.resize(need, 0);
    }
  };
  ensure(j);
  while (true) {
    const double lam = j < cap ? model.birth_rate(j) : 0.0;
    const double mu = j > floor ? model.death_rate(j) : 0.0;
    if (lam < 0.0 || mu < 0.0) {
      std::ostringstream msg;
      msg << "negative rate at simulated state " << j;
      throw RateError(msg.str());
    }
    const double total = lam + mu;
    const double dt = total > 0.0 ? -std::log(rng.uniform()) / total : INFINITY;
    const double t_next = std::min(t + dt, opts.t_end);
    const double lo = std::max(t, burn);
    if (t_next > lo) {
      st.occupancy[j] += t_next - lo;
      if (j >= cap) st.time_at_cap += t_next - lo;
    }
    if (t + dt >= opts.t_end) break;
    t += dt;
    const bool counted = t >= burn;
    if (rng.uniform() * total < lam) {
      if (counted) ++st.up[j];
      ++j;
      ensure(j);
    } else {
      if (counted) ++st.down[j - 1];
      --j;
    }
    ++st.events;
  }
  st.observed_time = opts.t_end - burn;
  return st;
}

}  // namespace

TrajectoryStats simulate_ctmc(const BdModel& model, const SimulationOptions& opts) {
  model.validate();
  if (!(opts.t_end > 0.0)) throw ParameterError("t_end must be > 0");
  if (!(opts.burn_fraction >= 0.0 && opts.burn_fraction < 1.0)) {
    throw ParameterError("burn fraction must be in [0, 1)");
  }
  if (opts.replicas < 1) throw ParameterError("replicas must be >= 1");
  const long floor = model.support_floor();
  const long start = opts.initial.value_or(floor);
  if (start < 0) throw ParameterError("initial state must be >= 0");
  long cap = opts.n_cap.value_or(default_cap(model));
  cap = std::max({cap, start + 1, floor + 1});
  TrajectoryStats total;
  for (int r = 0; r < opts.replicas; ++r) {
    total.merge(run_one(model, opts, floor, cap, static_cast<std::uint64_t>(r)));
  }
  if (total.observed_time > 0.0 && total.time_at_cap / total.observed_time > opts.cap_alarm) {
    std::ostringstream msg;
    msg << "state cap " << cap << " occupied for a fraction "
        << total.time_at_cap / total.observed_time << " of the time";
    throw ExplosionError(msg.str());
  }
  return total;
}

TrajectoryStats simulate_ctmc(const BdModel& model, double t_end, std::uint64_t seed,
                              long initial) {
  SimulationOptions opts;
  opts.t_end = t_end;
  opts.seed = seed;
  opts.initial = initial;
  return simulate_ctmc(model, opts);
}

}  // namespace sibuya

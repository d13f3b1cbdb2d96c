#include "sibuya/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <random>
#include <sstream>
#include <string>

#include "sibuya/distributions.hpp"
#include "sibuya/errors.hpp"

namespace sibuya {

namespace {

constexpr std::int64_t kMaxVariate = std::int64_t{1} << 62;
constexpr long kTrialLimit = 1000;

// log S(n) - log S(m) for S(n) = Gamma(nu+n+1-gamma) Gamma(nu+1) / (Gamma(nu+1-gamma) Gamma(nu+n+1))
double log_survival_ratio(double nu, double gamma, double n, double m) {
  auto log_s = [&](double x) {
    const double z = nu + x + 1.0;
    if (z < 1e7) return std::lgamma(z - gamma) - std::lgamma(z);
    // lgamma differences lose digits at large z; use the expansion
    return -gamma * std::log(z) + gamma * (gamma + 1.0) / (2.0 * z);
  };
  return log_s(n) - log_s(m);
}

bool heavy_tailed(const DistributionSpec& spec) { return tail_index(spec).has_value(); }

std::int64_t saturating_add(std::int64_t a, std::int64_t b) { return b > kMaxVariate - a ? kMaxVariate : a + b; }

bool needs_table(const DistributionSpec& spec) {
  switch (spec.family()) {
    case Family::sibuya:
    case Family::shifted_sibuya:
    case Family::generalized_sibuya:
    case Family::shifted_generalized_sibuya:
    case Family::scaled_sibuya:
    case Family::discrete_stable:
    case Family::mittag_leffler:
      return false;
    case Family::extended_sibuya:
    case Family::shifted_extended_sibuya:
      return spec.params().b < 1.0;
    default:
      return true;
  }
}

// draw() with the table lookup hoisted out of the loop
template <class Body>
void for_each_draw(const DistributionSpec& spec, long n, std::uint64_t seed, Body body) {
  const auto table = needs_table(spec) ? inversion_sampler(spec) : nullptr;
  for (long i = 0; i < n; ++i) {
    CounterRng rng(seed, static_cast<std::uint64_t>(i));
    body(i, table ? (*table)(rng) : draw(spec, rng), rng);
  }
}

}  // namespace

std::int64_t sequential_sibuya(double nu, double gamma, CounterRng& rng) {
  for (long t = 1; t <= kTrialLimit; ++t) {
    if (rng.uniform() < gamma / (nu + t)) return t;
  }
  // N > L: N = min{n > L : S(n)/S(L) < U}
  const double target = std::log(rng.uniform());
  const double l = static_cast<double>(kTrialLimit);
  auto below = [&](double n) { return log_survival_ratio(nu, gamma, n, l) < target; };
  double lo = l, hi = 2.0 * l;
  while (!below(hi)) {
    lo = hi;
    hi *= 2.0;
    if (hi >= static_cast<double>(kMaxVariate)) return kMaxVariate;
  }
  // invariant: !below(lo), below(hi)
  while (hi - lo > 1.0) {
    const double mid = std::floor(0.5 * (lo + hi));
    if (mid <= lo || mid >= hi) break;  // beyond 2^53 integers are not all representable
    if (below(mid)) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return static_cast<std::int64_t>(hi);
}

InversionSampler::InversionSampler(const DistributionSpec& spec) {
  const bool heavy = heavy_tailed(spec);
  const double target = heavy ? 1.0 - 1e-6 : 1.0 - 1e-14;
  const bool series_family = spec.family() == Family::four_param ||
                             spec.family() == Family::discrete_stable ||
                             spec.family() == Family::mittag_leffler;
  const long cap = series_family ? 4096 : (1L << 22);
  long n = 256;
  PmfTable t;
  double total = 0.0;
  for (;;) {
    t = pmf_table(spec, std::min(n, cap));
    total = 0.0;
    for (double v : t.probs) total += v;
    if (total >= target || n >= cap) break;
    n *= 2;
  }
  // trim to the first index where the cumulative sum reaches the target
  cdf_.reserve(t.size());
  double acc = 0.0;
  for (double v : t.probs) {
    acc += v;
    cdf_.push_back(acc);
    if (acc >= target) break;
  }
  const double rest = std::max(0.0, 1.0 - acc);
  if (!heavy || rest <= 1e-14) {
    cdf_.back() = std::numeric_limits<double>::infinity();
    return;
  }
  // Pareto tail fitted on the last decade of the table
  const long top = static_cast<long>(cdf_.size()) - 1;
  const long from = std::max<long>(1, top / 10);
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  long used = 0;
  for (long k = from; k <= top; ++k) {
    const double p = t.probs[k];
    if (!(p > 0.0)) continue;
    const double x = std::log(static_cast<double>(k)), y = std::log(p);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++used;
  }
  if (used < 10) {
    if (rest > 1e-3) {
      std::ostringstream msg;
      msg << spec.describe() << ": tail mass " << rest << " beyond n = " << top << " with only " << used
          << " usable points to fit";
      throw TailModelError(msg.str());
    }
    cdf_.back() = std::numeric_limits<double>::infinity();
    return;
  }
  const double slope = (used * sxy - sx * sy) / (used * sxx - sx * sx);
  if (!(slope < -1.0)) {
    std::ostringstream msg;
    msg << spec.describe() << ": fitted tail slope " << slope << " is not summable";
    throw TailModelError(msg.str());
  }
  tail_exponent_ = -slope;
  tail_mass_ = rest;
}

std::int64_t InversionSampler::operator()(CounterRng& rng) const {
  const double u = rng.uniform();
  if (u < 1.0 - tail_mass_ || tail_mass_ == 0.0) {
    const auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
    return static_cast<std::int64_t>(std::min<std::size_t>(it - cdf_.begin(), cdf_.size() - 1));
  }
  // survival beyond the table ~ (x / N)^{-(exponent - 1)}
  const double n = static_cast<double>(cdf_.size() - 1);
  const double v = rng.uniform();
  const double x = n * std::pow(v, -1.0 / (tail_exponent_ - 1.0));
  if (!(x < static_cast<double>(kMaxVariate))) return kMaxVariate;
  return std::max<std::int64_t>(static_cast<std::int64_t>(cdf_.size()), static_cast<std::int64_t>(std::ceil(x)));
}

std::shared_ptr<const InversionSampler> inversion_sampler(const DistributionSpec& spec) {
  static std::mutex mu;
  static std::map<std::string, std::shared_ptr<const InversionSampler>> cache;
  std::ostringstream key;
  key << static_cast<int>(spec.family());
  for (const auto& [name, value] : spec.as_map()) key << ' ' << name << '=' << std::hexfloat << value;
  {
    std::lock_guard<std::mutex> lock(mu);
    if (auto it = cache.find(key.str()); it != cache.end()) return it->second;
  }
  auto s = std::make_shared<const InversionSampler>(spec);
  std::lock_guard<std::mutex> lock(mu);
  return cache.emplace(key.str(), std::move(s)).first->second;
}

std::int64_t draw(const DistributionSpec& spec, CounterRng& rng) {
  const Params& p = spec.params();
  switch (spec.family()) {
    case Family::sibuya:
      return sequential_sibuya(0.0, p.gamma, rng);
    case Family::shifted_sibuya:
      return sequential_sibuya(0.0, p.gamma, rng) - 1;
    case Family::generalized_sibuya:
      return sequential_sibuya(p.nu, p.gamma, rng);
    case Family::shifted_generalized_sibuya:
      return sequential_sibuya(p.nu, p.gamma, rng) - 1;
    case Family::extended_sibuya:
      if (p.b == 1.0) return sequential_sibuya(0.0, p.gamma, rng);
      break;
    case Family::shifted_extended_sibuya:
      if (p.b == 1.0) return sequential_sibuya(0.0, p.gamma, rng) - 1;
      break;
    case Family::scaled_sibuya:
      return rng.uniform() < p.lambda ? sequential_sibuya(0.0, p.gamma, rng) : 0;
    case Family::discrete_stable: {
      const long count = std::poisson_distribution<long>(p.lambda)(rng);
      std::int64_t total = 0;
      for (long i = 0; i < count; ++i) total = saturating_add(total, sequential_sibuya(0.0, p.gamma, rng));
      return total;
    }
    case Family::mittag_leffler: {
      const long count = std::geometric_distribution<long>(1.0 / (1.0 + p.lambda))(rng);
      std::int64_t total = 0;
      for (long i = 0; i < count; ++i) total = saturating_add(total, sequential_sibuya(0.0, p.gamma, rng));
      return total;
    }
    default:
      break;
  }
  return (*inversion_sampler(spec))(rng);
}

std::vector<std::int64_t> sample(const DistributionSpec& spec, long n, std::uint64_t seed) {
  if (n < 0) throw ParameterError("sample count must be >= 0");
  std::vector<std::int64_t> out(n);
  for_each_draw(spec, n, seed, [&](long i, std::int64_t x, CounterRng&) { out[i] = x; });
  return out;
}

std::vector<std::int64_t> sample_thinned(const DistributionSpec& spec, double a, long n,
                                         std::uint64_t seed) {
  if (!(a > 0.0 && a < 1.0)) throw ParameterError("thinning needs a in (0, 1)");
  if (n < 0) throw ParameterError("sample count must be >= 0");
  std::vector<std::int64_t> out(n);
  for_each_draw(spec, n, seed, [&](long i, std::int64_t x, CounterRng& rng) {
    out[i] = std::binomial_distribution<std::int64_t>(x, a)(rng);
  });
  return out;
}

}  // namespace sibuya

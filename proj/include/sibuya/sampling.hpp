#ifndef SIBUYA_SAMPLING_HPP
#define SIBUYA_SAMPLING_HPP

#include <cstdint>
#include <memory>
#include <vector>

#include "sibuya/rng.hpp"
#include "sibuya/spec.hpp"

namespace sibuya {

/// Draw i of sample(spec, n, seed) uses stream CounterRng(seed, i), so any
/// slice of a sample can be regenerated on its own.
std::vector<std::int64_t> sample(const DistributionSpec& spec, long n, std::uint64_t seed);

/// a (.) X: each draw of X keeps each of its units with probability a.
std::vector<std::int64_t> sample_thinned(const DistributionSpec& spec, double a, long n,
                                         std::uint64_t seed);

/// One variate from the rng.
std::int64_t draw(const DistributionSpec& spec, CounterRng& rng);

/// First success index of trials t = 1, 2, ... succeeding with probability
/// gamma/(nu + t); generalized Sibuya(nu, gamma). Past 1000 failures the rest
/// is drawn by inverting the conditional survival function.
std::int64_t sequential_sibuya(double nu, double gamma, CounterRng& rng);

/// Cumulative-table inversion with an optional power-law tail beyond the table.
class InversionSampler {
 public:
  /// TailModelError when the tail beyond the table holds more than 1e-3 mass
  /// and fewer than 10 positive table entries remain to fit it.
  explicit InversionSampler(const DistributionSpec& spec);
  std::int64_t operator()(CounterRng& rng) const;

  std::size_t table_size() const noexcept { return cdf_.size(); }
  double tail_mass() const noexcept { return tail_mass_; }
  /// Pmf exponent of the fitted tail p_n ~ n^{-exponent}; 0 when no tail is modelled.
  double tail_exponent() const noexcept { return tail_exponent_; }

 private:
  std::vector<double> cdf_;
  std::int64_t offset_ = 0;
  double tail_mass_ = 0.0;
  double tail_exponent_ = 0.0;
};

/// Shared sampler for spec, built once per distinct parameter set.
std::shared_ptr<const InversionSampler> inversion_sampler(const DistributionSpec& spec);

}  // namespace sibuya

#endif  // SIBUYA_SAMPLING_HPP

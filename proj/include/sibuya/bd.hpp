#ifndef SIBUYA_BD_HPP
#define SIBUYA_BD_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "sibuya/gf.hpp"
#include "sibuya/spec.hpp"

namespace sibuya {

/// Birth-death chain with birth rates lambda_j = sum_k alpha_k (j)_k and death
/// rates mu_j = j sum_k beta_k (j-1)_k, (x)_k the falling factorial. An
/// explicit floor acts as a reflecting lower boundary.
struct BdModel {
  std::vector<double> alpha;
  std::vector<double> beta;
  std::optional<long> floor;

  double birth_rate(long j) const;
  double death_rate(long j) const;
  /// g(n) = lambda_n (n+1) / mu_{n+1} as a rational function.
  GFunction g() const;
  /// Explicit floor, or the support rule: smallest j with g(j) > 0 and
  /// (j = 0 or g(j-1) <= 0).
  long support_floor() const;
  /// Throws ParameterError on empty/non-finite amplitudes or all-zero beta.
  void validate() const;
};

BdModel bd_model_from_json(const std::string& text);
std::string bd_model_to_json(const BdModel& model);

struct HyperParams {
  std::vector<cdouble> a;  // numerator parameters, sorted ascending
  std::vector<cdouble> b;  // denominator parameters, sorted ascending
  double z = 0.0;
};

struct StationarySolution {
  PmfTable pmf;
  GFunction g;
  long floor = 0;
  HyperParams hyper;
  /// "finite", "superexponential", "geometric" or "power_law".
  std::string tail_kind;
  /// Sum of the unnormalized weights u_n, u_floor = 1.
  double normalizer = 1.0;
  double max_balance_residual = 0.0;
};

/// Stationary law from detailed balance mu_{j+1} p_{j+1} = lambda_j p_j.
/// Throws DivergenceError when the weights are not summable and RateError on
/// a negative rate inside the tabulated range.
StationarySolution stationary_solve(const BdModel& model, long n_max);

/// Amplitudes whose stationary law is the given family (beta with the highest
/// index normalized to 1).
BdModel amplitudes_for(const DistributionSpec& spec);

/// Q(w) = p_i w^i pFq(a + i, 1; b + i, i + 1; z w).
Pgf hypergeometric_pgf(const StationarySolution& sol);

struct SimulationOptions {
  double t_end = 1e6;
  std::uint64_t seed = 1;
  std::optional<long> initial;
  double burn_fraction = 0.01;
  std::optional<long> n_cap;
  double cap_alarm = 1e-6;
  int replicas = 1;
};

struct TrajectoryStats {
  std::vector<double> occupancy;  // time spent in each state after burn-in
  std::vector<long> up;           // transitions j -> j+1 after burn-in
  std::vector<long> down;         // transitions j+1 -> j after burn-in
  double observed_time = 0.0;
  double time_at_cap = 0.0;
  long events = 0;
  long n_cap = 0;

  std::vector<double> probabilities() const;
  void merge(const TrajectoryStats& other);
};

/// Event-driven simulation; replicas use RNG streams (seed, r) and are merged.
TrajectoryStats simulate_ctmc(const BdModel& model, const SimulationOptions& opts);
TrajectoryStats simulate_ctmc(const BdModel& model, double t_end, std::uint64_t seed,
                              long initial);

}  // namespace sibuya

#endif  // SIBUYA_BD_HPP

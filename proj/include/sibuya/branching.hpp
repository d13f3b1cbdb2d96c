#ifndef SIBUYA_BRANCHING_HPP
#define SIBUYA_BRANCHING_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "sibuya/gf.hpp"

namespace sibuya {

enum class Criticality { subcritical, critical, supercritical };
std::string to_string(Criticality c);

/// Galton-Watson offspring law; mean and second factorial moment are H'(1), H''(1).
struct BranchingModel {
  PmfTable offspring;
  double mean_offspring = 0.0;
  double second_factorial = 0.0;
  Criticality criticality = Criticality::subcritical;
};

/// Validates a nonnegative offspring table and fills the moments.
BranchingModel branching_model(PmfTable offspring);

struct OffspringSeries {
  std::vector<double> coefficients;  // h_0..h_n of H(u) = u / Q^{-1}(u)
  /// Estimated absolute error of each coefficient.
  std::vector<double> noise;
  /// Largest n with every noise estimate up to n at most 1e-10.
  long reliable_order = -1;
  /// Indices whose coefficient is negative beyond its noise estimate.
  std::vector<long> negative_indices;
  /// Series pgf truncated at reliable_order.
  Pgf offspring() const;
};

/// Reverts the progeny pgf Q (Q(0) = 0, p_1 > 0) and divides: H(u) = u / Q^{-1}(u).
/// InversionError when p_1 = 0 or Q(0) != 0.
OffspringSeries offspring_from_progeny(const Pgf& q, long n_max);

/// H(u) = u b / (1 - (1 - u c)^{1/gamma}), c = 1 - (1 - b)^gamma, and
/// H(u) = b u / (1 - (1 - b)^u) at gamma = 0.
double extended_offspring(double u, double b, double gamma);

struct SignDiagnosis {
  bool is_progeny_evidence = true;
  std::optional<long> first_negative;
  std::vector<double> coefficients;
};

/// Power series of the extended-Sibuya offspring pgf to n_max and its sign
/// pattern. b in (0, 1]; b = 1 needs gamma > 0.
SignDiagnosis progeny_sign_diagnosis(double b, double gamma, long n_max);

/// (<k>, <k(k-1)>) of the extended-Sibuya offspring law. b = 1 gives the
/// b -> 1 limits (possibly infinite). DomainError at gamma = 0.
std::pair<double, double> offspring_moments(double b, double gamma);

/// Offspring model for progeny law extended Sibuya(b, gamma), gamma in [1/2, 1).
BranchingModel extended_branching_model(double b, double gamma);

struct ProgenySimulation {
  PmfTable progeny;        // empirical pmf of the total progeny; tail_mass = budget hits
  long replicas = 0;
  long budget_hits = 0;
};

/// Breadth-first growth per replica with stream (seed, replica). BudgetError
/// when more than 20% of the replicas exceed node_budget individuals.
ProgenySimulation simulate_progeny(const BranchingModel& model, long replicas, std::uint64_t seed,
                                   long node_budget = 10000);

std::string to_json(const SignDiagnosis& d, long shown = 20);

}  // namespace sibuya

#endif  // SIBUYA_BRANCHING_HPP

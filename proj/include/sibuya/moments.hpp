#ifndef SIBUYA_MOMENTS_HPP
#define SIBUYA_MOMENTS_HPP

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "sibuya/gf.hpp"
#include "sibuya/spec.hpp"

namespace sibuya {

/// raw[j] = E[N (N-1) ... (N-j+1)], scaled[j] = raw[j] / raw[1]^j, j = 0..j_max.
/// error[j] bounds the truncation error of raw[j] on the numeric route.
struct FactorialMoments {
  std::vector<double> raw;
  std::vector<double> scaled;
  std::vector<double> error;
  std::string method;  // "closed_form" or "numeric"
};

/// Throws InfiniteMomentError when some order j >= 1 up to j_max does not exist.
FactorialMoments factorial_moments(const DistributionSpec& spec, int j_max);
FactorialMoments factorial_moments(const Pgf& p, int j_max);
/// Tail-completed sums over a table; a power-law tail_exponent is honoured.
FactorialMoments factorial_moments(const PmfTable& table, int j_max);

struct ThinningInvarianceRow {
  double a = 1.0;
  std::vector<double> scaled;
  double max_rel_err = 0.0;
  bool pass = false;
};

struct ThinningInvarianceReport {
  std::vector<double> original;
  std::vector<ThinningInvarianceRow> rows;
  double tolerance = 1e-8;
  bool pass = false;
};

/// F_j of a-thinned laws, computed from the thinned coefficient table,
/// against F_j of the original.
ThinningInvarianceReport thinning_invariance_check(const DistributionSpec& spec,
                                                   const std::vector<double>& a_list, int j_max);

struct MomentVerdict {
  double r = 0.0;
  bool finite = false;
  bool low_confidence = false;
  std::optional<double> estimate;
  /// Estimated exponent s of the increments d_k ~ eps_k^s (s > 0 iff finite).
  double exponent = 0.0;
  std::vector<std::pair<double, double>> diagnostics;  // (eps, partial integral)
};

/// 2^{-k}, k = 4..20.
std::vector<double> default_eps_ladder();

/// Classifies E N^r < inf through the integral of (1 - Q(e^{-u})) u^{-1-r}
/// over u > -log(1 - eps), following the partial integrals down the ladder.
MomentVerdict abs_moment_classify(const Pgf& p, double r,
                                  const std::vector<double>& eps_ladder = default_eps_ladder());

std::string to_json(const MomentVerdict& v);

/// F_2 of extended Sibuya with b = 1 - e^{-delta}: ((1-gamma)/gamma)(e^{delta gamma} - 1).
double f2_extended(double delta, double gamma);
/// Location of the interior maximum of F_2 in gamma; NoRootError for delta <= 2.
double f2_extremum(double delta);

}  // namespace sibuya

#endif  // SIBUYA_MOMENTS_HPP

#ifndef SIBUYA_SPEC_HPP
#define SIBUYA_SPEC_HPP

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace sibuya {

enum class Family {
  sibuya,
  scaled_sibuya,
  shifted_sibuya,
  generalized_sibuya,
  shifted_generalized_sibuya,
  extended_sibuya,
  shifted_extended_sibuya,
  discrete_stable,
  mittag_leffler,
  nbd,
  geometric,
  poisson,
  bernoulli,
  logarithmic,
  zero_inflated_log,
  cmp2,
  zero_truncated_nbd,
  four_param,
};

std::string_view family_name(Family f);
/// Throws ParameterError for unknown names.
Family family_from_name(std::string_view name);
const std::vector<Family>& all_families();

/// Raw, unvalidated parameters keyed by their vocabulary name ("gamma",
/// "lambda", "nu", "b", "theta", "q", "k", "mean", "a", "ell", "m").
using ParamMap = std::map<std::string, double, std::less<>>;

/// Validated family + parameter record. Only the fields relevant to the family
/// are meaningful; make_spec fills derived ones (e.g. nbd q from the mean).
struct Params {
  double gamma = 0.0;
  double lambda = 0.0;  // scale / mean-type parameter
  double nu = 0.0;
  double b = 1.0;
  double theta = 0.0;
  double q = 0.0;
  double k = 0.0;      // nbd shape, four_param outer exponent
  double mean = 0.0;   // nbd / geometric mean
  double a = 0.0;      // bernoulli success probability
  int ell = 1;         // four_param inner exponent
  int m = 1;           // four_param, gamma = 1/m
};

class DistributionSpec {
 public:
  Family family() const noexcept { return family_; }
  const Params& params() const noexcept { return params_; }
  /// Set for four_param parameter combinations outside the proven region.
  bool unverified() const noexcept { return unverified_; }
  std::string describe() const;
  /// Parameters in vocabulary form, suitable for JSON output.
  ParamMap as_map() const;

  // Named constructors; each routes through make_spec validation.
  static DistributionSpec sibuya(double gamma);
  static DistributionSpec scaled_sibuya(double lambda, double gamma);
  static DistributionSpec shifted_sibuya(double gamma);
  static DistributionSpec generalized_sibuya(double nu, double gamma);
  static DistributionSpec shifted_generalized_sibuya(double nu, double gamma);
  static DistributionSpec extended_sibuya(double b, double gamma);
  static DistributionSpec shifted_extended_sibuya(double b, double gamma);
  static DistributionSpec discrete_stable(double lambda, double gamma);
  static DistributionSpec mittag_leffler(double lambda, double gamma);
  static DistributionSpec nbd_mean(double mean, double k);
  static DistributionSpec nbd_q(double q, double k);
  static DistributionSpec geometric(double lambda);
  static DistributionSpec poisson(double lambda);
  static DistributionSpec bernoulli(double a);
  static DistributionSpec logarithmic(double theta);
  static DistributionSpec zero_inflated_log(double theta);
  static DistributionSpec cmp2(double theta);
  static DistributionSpec zero_truncated_nbd(double q, double k);
  static DistributionSpec four_param(double b, double gamma, int ell, int k, int m);

 private:
  friend DistributionSpec make_spec(Family, const ParamMap&);
  DistributionSpec(Family f, Params p, bool unverified)
      : family_(f), params_(p), unverified_(unverified) {}

  Family family_;
  Params params_;
  bool unverified_ = false;
};

/// Validation gateway. Throws ParameterError naming the violated constraint.
/// extended_sibuya with gamma == 0 is returned as logarithmic(theta = b).
DistributionSpec make_spec(Family family, const ParamMap& params);

}  // namespace sibuya

#endif  // SIBUYA_SPEC_HPP

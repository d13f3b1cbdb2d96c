#ifndef SIBUYA_SELFDECOMP_HPP
#define SIBUYA_SELFDECOMP_HPP

#include <optional>
#include <string>
#include <vector>

#include "sibuya/gf.hpp"
#include "sibuya/spec.hpp"

namespace sibuya {

struct BondessonViolation {
  long j = 0;
  double lhs = 0.0;
  double rhs = 0.0;
};

/// holds_up_to is the largest j checked without a violation; the check is
/// finite and never claims more.
struct BondessonReport {
  long holds_up_to = -1;
  std::optional<BondessonViolation> first_violation;
};

/// max_{n <= j} r_{n+1}/r_n <= ((j+2)/(j+1)) (r_{j+1} - r_{j+2}) / (r_j - r_{j+1})
/// for j = 0..j_max. Needs j_max + 3 table entries. NotDecreasingError when the
/// pmf is not strictly decreasing, NumericalUnderflowError when it runs into zeros.
BondessonReport bondesson_check(const PmfTable& pmf, long j_max);

struct ResidualPgf {
  PmfTable coefficients;
  /// Running magnitude sum |terms| behind each coefficient, for the negativity test.
  std::vector<double> magnitude;
  std::optional<long> first_negative;
  double min_coefficient = 0.0;
  bool nonnegative = true;
};

/// Coefficients of H_a(w) = G(w) / G(1 - a + a w) up to n_max. A coefficient
/// counts as negative below -1e-10 max(1, magnitude). DivisionInstabilityError
/// when the thinned p_0 is below 1e-12.
ResidualPgf residual_pgf(const Pgf& p, double a, long n_max);
/// Same division on explicit coefficient tables (numerator, thinned denominator).
ResidualPgf residual_from_tables(const std::vector<double>& num, const std::vector<double>& den,
                                 long n_max);

struct ClosureRow {
  double a = 0.0;
  std::optional<long> first_negative;
  double min_coefficient = 0.0;
  bool nonnegative = true;
};

struct ClosureReport {
  double gamma = 1.0;
  std::vector<ClosureRow> rows;
  bool nonnegative = true;
};

/// Residuals of G = Q o S(gamma) for each a, Q analytically self-decomposable.
ClosureReport sibuya_compound_closure(const DistributionSpec& spec, double gamma,
                                      const std::vector<double>& a_list, long n_max);

/// Law of Y in Sibuya(gamma) = Sibuya(gamma2) + Y (independent), gamma < gamma2 < 1:
/// coefficients of S(gamma)/S(gamma2), which equals S_0(gamma/gamma2) o S(gamma2).
ResidualPgf sibuya_decomposition(double gamma, double gamma2, long n_max);

/// R(b, j) from the shifted extended Sibuya Bondesson argument.
double shifted_extended_ratio(double b, double gamma, long j);

std::string to_json(const BondessonReport& r);
std::string to_json(const ResidualPgf& r, long shown = 20);
std::string to_json(const ClosureReport& r);

}  // namespace sibuya

#endif  // SIBUYA_SELFDECOMP_HPP

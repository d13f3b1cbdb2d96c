#include "sibuya/selfdecomp.hpp"

#include <algorithm>
#include <cfloat>
#include <cmath>
#include <sstream>

#include <json.hpp>

#include "sibuya/errors.hpp"

namespace sibuya {

BondessonReport bondesson_check(const PmfTable& pmf, long j_max) {
  if (j_max < 0) throw ParameterError("j_max must be >= 0");
  if (static_cast<long>(pmf.size()) < j_max + 3) {
    std::ostringstream msg;
    msg << "Bondesson check to j = " << j_max << " needs " << j_max + 3 << " pmf entries, got "
        << pmf.size();
    throw ParameterError(msg.str());
  }
  BondessonReport rep;
  double running = 0.0;
  for (long j = 0; j <= j_max; ++j) {
    const double r0 = pmf[j], r1 = pmf[j + 1], r2 = pmf[j + 2];
    if (r2 < DBL_MIN) {
      std::ostringstream msg;
      msg << "pmf underflows at n = " << j + 2;
      throw NumericalUnderflowError(msg.str());
    }
    if (!(r1 < r0) || !(r2 < r1)) {
      std::ostringstream msg;
      msg << "pmf is not strictly decreasing near n = " << j + 1;
      throw NotDecreasingError(msg.str());
    }
    const double rho0 = r1 / r0;
    const double rho1 = r2 / r1;
    running = std::max(running, rho0);
    const double rhs = (j + 2.0) / (j + 1.0) * rho0 * (1.0 - rho1) / (1.0 - rho0);
    if (running > rhs * (1.0 + 1e-12)) {
      rep.first_violation = BondessonViolation{j, running, rhs};
      return rep;
    }
    rep.holds_up_to = j;
  }
  return rep;
}

ResidualPgf residual_from_tables(const std::vector<double>& num, const std::vector<double>& den,
                                 long n_max) {
  if (n_max < 0) throw ParameterError("n_max must be >= 0");
  if (den.empty() || den[0] < 1e-12) {
    std::ostringstream msg;
    msg << "thinned p_0 = " << (den.empty() ? 0.0 : den[0]) << " is too small to divide by";
    throw DivisionInstabilityError(msg.str());
  }
  auto at = [](const std::vector<double>& v, long n) {
    return n < static_cast<long>(v.size()) ? v[n] : 0.0;
  };
  ResidualPgf out;
  out.coefficients.provenance = "residual";
  out.coefficients.probs.resize(n_max + 1);
  out.magnitude.resize(n_max + 1);
  auto& c = out.coefficients.probs;
  for (long n = 0; n <= n_max; ++n) {
    CompensatedSum s;
    s.add(at(num, n));
    for (long k = 1; k <= n; ++k) s.add(-at(den, k) * c[n - k]);
    c[n] = s.value() / den[0];
    out.magnitude[n] = s.magnitude() / den[0];
    if (c[n] < -1e-10 * std::max(1.0, out.magnitude[n])) {
      out.nonnegative = false;
      if (!out.first_negative) out.first_negative = n;
    }
    out.min_coefficient = n == 0 ? c[n] : std::min(out.min_coefficient, c[n]);
  }
  double total = 0.0;
  for (double v : c) total += v;
  out.coefficients.tail_mass = 1.0 - total;
  return out;
}

ResidualPgf residual_pgf(const Pgf& p, double a, long n_max) {
  if (!(a > 0.0 && a < 1.0)) throw ParameterError("residual pgf needs a in (0, 1)");
  const PmfTable num = pgf_coefficients(p, n_max);
  const PmfTable den = pgf_coefficients(pgf_thin(p, a), n_max);
  return residual_from_tables(num.probs, den.probs, n_max);
}

ClosureReport sibuya_compound_closure(const DistributionSpec& spec, double gamma,
                                      const std::vector<double>& a_list, long n_max) {
  if (!(gamma > 0.0 && gamma <= 1.0)) throw ParameterError("gamma must lie in (0, 1]");
  Pgf g = Pgf::closed_form(spec);
  if (gamma < 1.0) g = pgf_compound(g, Pgf::closed_form(DistributionSpec::sibuya(gamma)));
  ClosureReport rep;
  rep.gamma = gamma;
  for (double a : a_list) {
    const ResidualPgf r = residual_pgf(g, a, n_max);
    rep.rows.push_back({a, r.first_negative, r.min_coefficient, r.nonnegative});
    rep.nonnegative = rep.nonnegative && r.nonnegative;
  }
  return rep;
}

ResidualPgf sibuya_decomposition(double gamma, double gamma2, long n_max) {
  if (!(gamma > 0.0 && gamma < gamma2 && gamma2 < 1.0)) {
    throw ParameterError("Sibuya decomposition needs 0 < gamma < gamma2 < 1");
  }
  // both pgfs vanish at 0; divide S(gamma)/w by S(gamma2)/w
  const PmfTable a = pgf_coefficients(Pgf::closed_form(DistributionSpec::sibuya(gamma)), n_max + 1);
  const PmfTable b = pgf_coefficients(Pgf::closed_form(DistributionSpec::sibuya(gamma2)), n_max + 1);
  std::vector<double> num(a.probs.begin() + 1, a.probs.end());
  std::vector<double> den(b.probs.begin() + 1, b.probs.end());
  return residual_from_tables(num, den, n_max);
}

double shifted_extended_ratio(double b, double gamma, long j) {
  const double jj = static_cast<double>(j);
  return (jj + 2.0) * (jj + 2.0) * (jj + 3.0 - b * (jj + 2.0 - gamma)) /
         ((jj + 1.0) * (jj + 3.0) * (jj + 2.0 - b * (jj + 1.0 - gamma)));
}

std::string to_json(const BondessonReport& r) {
  nlohmann::json j;
  j["method"] = "bondesson";
  j["holds_up_to"] = r.holds_up_to;
  if (r.first_violation) {
    j["first_violation"] = {{"j", r.first_violation->j},
                            {"lhs", r.first_violation->lhs},
                            {"rhs", r.first_violation->rhs}};
  } else {
    j["first_violation"] = nullptr;
  }
  return j.dump();
}

std::string to_json(const ResidualPgf& r, long shown) {
  nlohmann::json j;
  j["method"] = "residual";
  j["nonnegative"] = r.nonnegative;
  j["min_coefficient"] = r.min_coefficient;
  j["first_negative"] = r.first_negative ? nlohmann::json(*r.first_negative) : nlohmann::json(nullptr);
  const auto& c = r.coefficients.probs;
  const long m = std::min<long>(shown, static_cast<long>(c.size()));
  j["coefficients"] = std::vector<double>(c.begin(), c.begin() + m);
  return j.dump();
}

std::string to_json(const ClosureReport& r) {
  nlohmann::json j;
  j["gamma"] = r.gamma;
  j["nonnegative"] = r.nonnegative;
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& row : r.rows) {
    rows.push_back({{"a", row.a},
                    {"nonnegative", row.nonnegative},
                    {"min_coefficient", row.min_coefficient},
                    {"first_negative",
                     row.first_negative ? nlohmann::json(*row.first_negative) : nlohmann::json(nullptr)}});
  }
  j["rows"] = rows;
  return j.dump();
}

}  // namespace sibuya

#include "sibuya/spec.hpp"

#include <array>
#include <cmath>
#include <sstream>
#include <utility>

#include "sibuya/errors.hpp"

namespace sibuya {
namespace {

constexpr std::array<std::pair<Family, std::string_view>, 18> kNames{{
    {Family::sibuya, "sibuya"},
    {Family::scaled_sibuya, "scaled_sibuya"},
    {Family::shifted_sibuya, "shifted_sibuya"},
    {Family::generalized_sibuya, "generalized_sibuya"},
    {Family::shifted_generalized_sibuya, "shifted_generalized_sibuya"},
    {Family::extended_sibuya, "extended_sibuya"},
    {Family::shifted_extended_sibuya, "shifted_extended_sibuya"},
    {Family::discrete_stable, "discrete_stable"},
    {Family::mittag_leffler, "mittag_leffler"},
    {Family::nbd, "nbd"},
    {Family::geometric, "geometric"},
    {Family::poisson, "poisson"},
    {Family::bernoulli, "bernoulli"},
    {Family::logarithmic, "logarithmic"},
    {Family::zero_inflated_log, "zero_inflated_log"},
    {Family::cmp2, "cmp2"},
    {Family::zero_truncated_nbd, "zero_truncated_nbd"},
    {Family::four_param, "four_param"},
}};

std::optional<double> lookup(const ParamMap& p, std::string_view key) {
  auto it = p.find(key);
  if (it == p.end()) return std::nullopt;
  return it->second;
}

double need(const ParamMap& p, std::string_view key, Family f) {
  auto v = lookup(p, key);
  if (!v) {
    throw ParameterError(std::string(family_name(f)) + " requires parameter '" +
                         std::string(key) + "'");
  }
  if (!std::isfinite(*v)) throw ParameterError(std::string(key) + " must be finite");
  return *v;
}

void require(bool ok, Family f, const std::string& constraint) {
  if (!ok) throw ParameterError(std::string(family_name(f)) + ": violated " + constraint);
}

int need_int(const ParamMap& p, std::string_view key, Family f) {
  const double v = need(p, key, f);
  require(v == std::floor(v) && v >= 1.0, f, std::string(key) + " positive integer");
  return static_cast<int>(v);
}

}  // namespace

std::string_view family_name(Family f) {
  for (const auto& [fam, name] : kNames) {
    if (fam == f) return name;
  }
  return "unknown";
}

Family family_from_name(std::string_view name) {
  for (const auto& [fam, n] : kNames) {
    if (n == name) return fam;
  }
  throw ParameterError("unknown family '" + std::string(name) + "'");
}

const std::vector<Family>& all_families() {
  static const std::vector<Family> fams = [] {
    std::vector<Family> v;
    for (const auto& entry : kNames) v.push_back(entry.first);
    return v;
  }();
  return fams;
}

DistributionSpec make_spec(Family f, const ParamMap& in) {
  Params p;
  bool unverified = false;
  switch (f) {
    case Family::sibuya:
    case Family::shifted_sibuya:
      p.gamma = need(in, "gamma", f);
      require(p.gamma > 0.0 && p.gamma < 1.0, f, "0 < gamma < 1");
      break;
    case Family::scaled_sibuya:
      p.lambda = need(in, "lambda", f);
      p.gamma = need(in, "gamma", f);
      require(p.gamma > 0.0 && p.gamma < 1.0, f, "0 < gamma < 1");
      require(p.lambda > 0.0 && p.lambda <= 1.0, f, "0 < lambda <= 1");
      break;
    case Family::generalized_sibuya:
    case Family::shifted_generalized_sibuya:
      p.nu = need(in, "nu", f);
      p.gamma = need(in, "gamma", f);
      require(p.nu >= 0.0, f, "nu >= 0");
      require(p.gamma > 0.0 && p.gamma < p.nu + 1.0, f, "0 < gamma < nu + 1");
      break;
    case Family::extended_sibuya:
    case Family::shifted_extended_sibuya:
      p.b = need(in, "b", f);
      p.gamma = need(in, "gamma", f);
      require(p.b > 0.0 && p.b <= 1.0, f, "0 < b <= 1");
      require(p.gamma < 1.0, f, "gamma < 1");
      require(p.b < 1.0 || p.gamma > 0.0, f, "gamma > 0 when b = 1");
      if (p.gamma == 0.0) {
        if (f == Family::extended_sibuya) {
          require(p.b < 1.0, f, "b < 1 for the logarithmic limit");
          return make_spec(Family::logarithmic, ParamMap{{"theta", p.b}});
        }
        require(p.b < 1.0, f, "b < 1 for the logarithmic limit");
        return make_spec(Family::zero_inflated_log, ParamMap{{"theta", p.b}});
      }
      break;
    case Family::discrete_stable:
    case Family::mittag_leffler:
      p.lambda = need(in, "lambda", f);
      p.gamma = need(in, "gamma", f);
      require(p.lambda > 0.0, f, "lambda > 0");
      require(p.gamma > 0.0 && p.gamma <= 1.0, f, "0 < gamma <= 1");
      break;
    case Family::nbd:
    case Family::zero_truncated_nbd: {
      p.k = need(in, "k", f);
      require(p.k > 0.0, f, "k > 0");
      auto mean = lookup(in, "mean");
      auto q = lookup(in, "q");
      require(mean.has_value() != q.has_value(), f, "exactly one of mean or q");
      if (mean) {
        require(*mean > 0.0, f, "mean > 0");
        p.mean = *mean;
        p.q = p.mean / (p.k + p.mean);
      } else {
        require(*q > 0.0 && *q < 1.0, f, "0 < q < 1");
        p.q = *q;
        p.mean = p.k * p.q / (1.0 - p.q);
      }
      break;
    }
    case Family::geometric: {
      auto lam = lookup(in, "lambda");
      auto q = lookup(in, "q");
      if (!q) q = lookup(in, "theta");
      require(lam.has_value() != q.has_value(), f, "exactly one of lambda or q");
      if (lam) {
        require(*lam > 0.0, f, "lambda > 0");
        p.lambda = *lam;
        p.q = p.lambda / (1.0 + p.lambda);
      } else {
        require(*q > 0.0 && *q < 1.0, f, "0 < q < 1");
        p.q = *q;
        p.lambda = p.q / (1.0 - p.q);
      }
      p.k = 1.0;
      p.mean = p.lambda;
      break;
    }
    case Family::poisson:
      p.lambda = need(in, "lambda", f);
      require(p.lambda > 0.0, f, "lambda > 0");
      break;
    case Family::bernoulli: {
      auto a = lookup(in, "a");
      if (!a) a = lookup(in, "p");
      require(a.has_value(), f, "parameter 'a' present");
      p.a = *a;
      require(p.a > 0.0 && p.a < 1.0, f, "0 < a < 1");
      break;
    }
    case Family::logarithmic: {
      auto theta = lookup(in, "theta");
      if (!theta) theta = lookup(in, "b");
      require(theta.has_value(), f, "parameter 'theta' present");
      p.theta = *theta;
      require(p.theta > 0.0 && p.theta < 1.0, f, "0 < theta < 1");
      p.b = p.theta;
      break;
    }
    case Family::zero_inflated_log:
      p.theta = need(in, "theta", f);
      require(p.theta > 0.0 && p.theta < 1.0, f, "0 < theta < 1");
      break;
    case Family::cmp2:
      p.theta = need(in, "theta", f);
      require(p.theta > 0.0, f, "theta > 0");
      break;
    case Family::four_param: {
      p.b = need(in, "b", f);
      require(p.b > 0.0 && p.b <= 1.0, f, "0 < b <= 1");
      p.ell = need_int(in, "ell", f);
      p.k = need_int(in, "k", f);
      p.m = need_int(in, "m", f);
      auto gamma = lookup(in, "gamma");
      p.gamma = gamma ? *gamma : 1.0 / p.m;
      require(p.gamma > 0.0 && p.gamma < 1.0 + 1e-15, f, "0 < gamma <= 1");
      unverified = std::abs(p.gamma - 1.0 / p.m) > 1e-12 || p.k > p.m;
      break;
    }
  }
  return DistributionSpec(f, p, unverified);
}

std::string DistributionSpec::describe() const {
  std::ostringstream os;
  os << family_name(family_) << "(";
  bool first = true;
  for (const auto& [key, value] : as_map()) {
    if (!first) os << ", ";
    os << key << "=" << value;
    first = false;
  }
  os << ")";
  if (unverified_) os << " [unverified pgf]";
  return os.str();
}

ParamMap DistributionSpec::as_map() const {
  const Params& p = params_;
  switch (family_) {
    case Family::sibuya:
    case Family::shifted_sibuya:
      return {{"gamma", p.gamma}};
    case Family::scaled_sibuya:
    case Family::discrete_stable:
    case Family::mittag_leffler:
      return {{"lambda", p.lambda}, {"gamma", p.gamma}};
    case Family::generalized_sibuya:
    case Family::shifted_generalized_sibuya:
      return {{"nu", p.nu}, {"gamma", p.gamma}};
    case Family::extended_sibuya:
    case Family::shifted_extended_sibuya:
      return {{"b", p.b}, {"gamma", p.gamma}};
    case Family::nbd:
    case Family::zero_truncated_nbd:
      return {{"q", p.q}, {"k", p.k}, {"mean", p.mean}};
    case Family::geometric:
      return {{"lambda", p.lambda}, {"q", p.q}};
    case Family::poisson:
      return {{"lambda", p.lambda}};
    case Family::bernoulli:
      return {{"a", p.a}};
    case Family::logarithmic:
    case Family::zero_inflated_log:
    case Family::cmp2:
      return {{"theta", p.theta}};
    case Family::four_param:
      return {{"b", p.b},
              {"gamma", p.gamma},
              {"ell", static_cast<double>(p.ell)},
              {"k", p.k},
              {"m", static_cast<double>(p.m)}};
  }
  return {};
}

DistributionSpec DistributionSpec::sibuya(double gamma) {
  return make_spec(Family::sibuya, {{"gamma", gamma}});
}
DistributionSpec DistributionSpec::scaled_sibuya(double lambda, double gamma) {
  return make_spec(Family::scaled_sibuya, {{"lambda", lambda}, {"gamma", gamma}});
}
DistributionSpec DistributionSpec::shifted_sibuya(double gamma) {
  return make_spec(Family::shifted_sibuya, {{"gamma", gamma}});
}
DistributionSpec DistributionSpec::generalized_sibuya(double nu, double gamma) {
  return make_spec(Family::generalized_sibuya, {{"nu", nu}, {"gamma", gamma}});
}
DistributionSpec DistributionSpec::shifted_generalized_sibuya(double nu, double gamma) {
  return make_spec(Family::shifted_generalized_sibuya, {{"nu", nu}, {"gamma", gamma}});
}
DistributionSpec DistributionSpec::extended_sibuya(double b, double gamma) {
  return make_spec(Family::extended_sibuya, {{"b", b}, {"gamma", gamma}});
}
DistributionSpec DistributionSpec::shifted_extended_sibuya(double b, double gamma) {
  return make_spec(Family::shifted_extended_sibuya, {{"b", b}, {"gamma", gamma}});
}
DistributionSpec DistributionSpec::discrete_stable(double lambda, double gamma) {
  return make_spec(Family::discrete_stable, {{"lambda", lambda}, {"gamma", gamma}});
}
DistributionSpec DistributionSpec::mittag_leffler(double lambda, double gamma) {
  return make_spec(Family::mittag_leffler, {{"lambda", lambda}, {"gamma", gamma}});
}
DistributionSpec DistributionSpec::nbd_mean(double mean, double k) {
  return make_spec(Family::nbd, {{"mean", mean}, {"k", k}});
}
DistributionSpec DistributionSpec::nbd_q(double q, double k) {
  return make_spec(Family::nbd, {{"q", q}, {"k", k}});
}
DistributionSpec DistributionSpec::geometric(double lambda) {
  return make_spec(Family::geometric, {{"lambda", lambda}});
}
DistributionSpec DistributionSpec::poisson(double lambda) {
  return make_spec(Family::poisson, {{"lambda", lambda}});
}
DistributionSpec DistributionSpec::bernoulli(double a) {
  return make_spec(Family::bernoulli, {{"a", a}});
}
DistributionSpec DistributionSpec::logarithmic(double theta) {
  return make_spec(Family::logarithmic, {{"theta", theta}});
}
DistributionSpec DistributionSpec::zero_inflated_log(double theta) {
  return make_spec(Family::zero_inflated_log, {{"theta", theta}});
}
DistributionSpec DistributionSpec::cmp2(double theta) {
  return make_spec(Family::cmp2, {{"theta", theta}});
}
DistributionSpec DistributionSpec::zero_truncated_nbd(double q, double k) {
  return make_spec(Family::zero_truncated_nbd, {{"q", q}, {"k", k}});
}
DistributionSpec DistributionSpec::four_param(double b, double gamma, int ell, int k, int m) {
  return make_spec(Family::four_param, {{"b", b},
                                        {"gamma", gamma},
                                        {"ell", static_cast<double>(ell)},
                                        {"k", static_cast<double>(k)},
                                        {"m", static_cast<double>(m)}});
}

}  // namespace sibuya

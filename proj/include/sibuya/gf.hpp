#ifndef SIBUYA_GF_HPP
#define SIBUYA_GF_HPP

#include <functional>
#include <limits>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "sibuya/numeric.hpp"
#include "sibuya/spec.hpp"

namespace sibuya {

/// Finite prefix p_0..p_N of a pmf. tail_mass is the probability beyond N
/// (1 - sum(probs) for normalized tables).
struct PmfTable {
  std::vector<double> probs;
  double tail_mass = 0.0;
  std::optional<double> tail_exponent;
  std::string provenance;
  bool normalized = true;

  std::size_t size() const noexcept { return probs.size(); }
  double operator[](std::size_t n) const { return n < probs.size() ? probs[n] : 0.0; }
  double sum() const;
};

/// g(n) = (n+1) p_{n+1} / p_n, either as a ratio of polynomials in n
/// (coefficients in the monomial basis, lowest degree first) or as an opaque
/// sequence.
class GFunction {
 public:
  static GFunction rational(std::vector<double> numerator, std::vector<double> denominator);
  /// Numerator sum_k alpha_k (n)_k, denominator sum_k beta_k (n)_k.
  /// A common factor n is cancelled when both constant terms vanish.
  static GFunction from_amplitudes(const std::vector<double>& alpha,
                                   const std::vector<double>& beta);
  static GFunction black_box(std::function<double(long)> g);

  double operator()(long n) const;
  bool is_rational() const noexcept { return !fn_; }
  const std::vector<double>& numerator() const noexcept { return num_; }
  const std::vector<double>& denominator() const noexcept { return den_; }

 private:
  std::vector<double> num_, den_;
  std::function<double(long)> fn_;
};

/// p_floor..p_{n_max} from the recurrence, in log space; entries below the
/// floor are zero, and once g(n) <= 0 every later entry is zero. tail_mass is
/// 1 - sum, so p_floor must be the true normalized value.
PmfTable table_from_g(const GFunction& g, long floor, double p_floor, long n_max);

/// Poisson mixture Q(w) = int_0^inf exp(-(1-w)x) f(x) dx.
struct LaplaceMixture {
  std::function<double(double)> density;
  double x_min = 0.0;
  double x_max = std::numeric_limits<double>::infinity();
  double normalization_tolerance = 1e-8;
};

/// int f(x) dx over the support hint.
double mixture_mass(const LaplaceMixture& m);
/// int exp(-s x) x^n f(x) dx / n!, real s >= 0.
double mixture_moment(const LaplaceMixture& m, int n, double s = 1.0);
/// Ratio int e^{-x} x^{n+1} f / int e^{-x} x^n f, i.e. g(n) of the induced pmf.
double mixture_g(const LaplaceMixture& m, int n);
/// f_b(x) = exp(-(1-b)x/b) f(x/b) / Z(b); induced pgf is Q(bw)/Q(b).
LaplaceMixture mixture_rescale(const LaplaceMixture& m, double b);

class Pgf;

enum class PgfKind { closed_form, composed, thinned, series, mixture, identity, custom };

/// Immutable generating-function expression. Copies share structure.
class Pgf {
 public:
  struct Node;

  static Pgf closed_form(DistributionSpec spec);
  static Pgf identity();
  static Pgf series(PmfTable table);
  static Pgf mixture(LaplaceMixture m);
  /// Opaque evaluator; `table`, when given, is returned by coefficient
  /// extraction instead of contour quadrature.
  static Pgf custom(std::function<cdouble(cdouble)> fn, double radius, std::string name,
                    std::optional<PmfTable> table = std::nullopt);

  PgfKind kind() const noexcept;
  /// Largest rho <= 1 on which evaluation is supported.
  double domain_radius() const noexcept { return 1.0; }
  /// Radius of analyticity estimate used to place extraction contours.
  double analytic_radius() const;
  /// Whether thinning by a > 1 is known to yield a pgf.
  bool laplace_representable() const;

  double operator()(double w) const;
  cdouble operator()(cdouble w) const;
  /// 1 - Q(w), accurate near w = 1 where the family allows it.
  double complement(double w) const;

  const Node& node() const noexcept { return *node_; }
  const std::shared_ptr<const Node>& node_ptr() const noexcept { return node_; }
  std::string describe() const;

  explicit Pgf(std::shared_ptr<const Node> n) : node_(std::move(n)) {}

 private:
  std::shared_ptr<const Node> node_;
};

struct Pgf::Node {
  PgfKind kind = PgfKind::identity;
  std::optional<DistributionSpec> spec;  // closed_form
  std::shared_ptr<const Node> a, b;      // composed: outer, inner; thinned: base
  double scale = 1.0;                    // thinned
  PmfTable table;                        // series
  std::optional<LaplaceMixture> mix;     // mixture
  std::function<cdouble(cdouble)> fn;    // custom
  std::string name;                      // custom
  bool has_table = false;                // custom
};

/// Q(w) for real w in [0, domain_radius]; DomainError otherwise.
double pgf_eval(const Pgf& p, double w);
/// w -> Q(1 - a + a w). a > 1 requires a Laplace-representable base.
Pgf pgf_thin(const Pgf& p, double a);
/// w -> outer(inner(w)).
Pgf pgf_compound(const Pgf& outer, const Pgf& inner);
Pgf mixture_pgf(const LaplaceMixture& m);

enum class CoefficientMethod { automatic, contour };

/// Taylor coefficients p_0..p_{n_max}. The automatic method prefers analytic
/// tables, binomial thinning and exact series composition, and falls back to
/// trapezoidal contour quadrature.
PmfTable pgf_coefficients(const Pgf& p, int n_max,
                          CoefficientMethod method = CoefficientMethod::automatic);

/// Binomial thinning of a pmf prefix: p'_m = sum_n p_n C(n,m) a^m (1-a)^{n-m}.
std::vector<double> binomial_thin(std::span<const double> p, double a, std::size_t n_out);

}  // namespace sibuya

#endif  // SIBUYA_GF_HPP

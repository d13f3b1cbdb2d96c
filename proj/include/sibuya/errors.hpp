#ifndef SIBUYA_ERRORS_HPP
#define SIBUYA_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace sibuya {

/// Coarse error classes; the CLI maps them to exit codes 1, 2 and 3.
enum class ErrorCategory {
  parameter = 1,
  unsupported = 2,
  numeric = 3,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCategory category, const std::string& what)
      : std::runtime_error(what), category_(category) {}

  ErrorCategory category() const noexcept { return category_; }

 private:
  ErrorCategory category_;
};

#define SIBUYA_DEFINE_ERROR(Name, Category)                   \
  class Name : public Error {                                 \
   public:                                                    \
    explicit Name(const std::string& what)                    \
        : Error(ErrorCategory::Category, #Name ": " + what) {} \
  }

// parameter / domain violations
SIBUYA_DEFINE_ERROR(ParameterError, parameter);
SIBUYA_DEFINE_ERROR(DomainError, parameter);
SIBUYA_DEFINE_ERROR(RateError, parameter);
SIBUYA_DEFINE_ERROR(NoRootError, parameter);
SIBUYA_DEFINE_ERROR(NotDecreasingError, parameter);
SIBUYA_DEFINE_ERROR(InversionError, parameter);

// operation not available for the family or model
SIBUYA_DEFINE_ERROR(UnsupportedError, unsupported);
SIBUYA_DEFINE_ERROR(ScalingError, unsupported);
SIBUYA_DEFINE_ERROR(NegativeAmplitudeError, unsupported);
SIBUYA_DEFINE_ERROR(InfiniteMomentError, unsupported);

// numerical non-convergence
SIBUYA_DEFINE_ERROR(ConvergenceError, numeric);
SIBUYA_DEFINE_ERROR(QuadratureError, numeric);
SIBUYA_DEFINE_ERROR(SeriesDivergenceError, numeric);
SIBUYA_DEFINE_ERROR(DivergenceError, numeric);
SIBUYA_DEFINE_ERROR(DivisionInstabilityError, numeric);
SIBUYA_DEFINE_ERROR(NumericalUnderflowError, numeric);
SIBUYA_DEFINE_ERROR(ExplosionError, numeric);
SIBUYA_DEFINE_ERROR(BudgetError, numeric);
SIBUYA_DEFINE_ERROR(TailModelError, numeric);

#undef SIBUYA_DEFINE_ERROR

}  // namespace sibuya

#endif  // SIBUYA_ERRORS_HPP

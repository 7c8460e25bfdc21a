#ifndef LAGFIB_ERRORS_HPP
#define LAGFIB_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace lagfib {

/// Base class for all recoverable numerical failures. The CLI maps these to
/// exit code 2; configuration problems use ConfigError (exit code 1).
struct NumericalError : std::runtime_error {
  explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

/// Internal invariant violated (exit code 3). Indicates a bug, not bad input.
struct InternalError : std::logic_error {
  explicit InternalError(const std::string& what) : std::logic_error(what) {}
};

#define LAGFIB_NUMERICAL_ERROR(NAME)                                        \
  struct NAME : NumericalError {                                            \
    explicit NAME(const std::string& what)                                  \
        : NumericalError(std::string(#NAME) + ": " + what) {}               \
  }

LAGFIB_NUMERICAL_ERROR(NonPositiveDefinite);
LAGFIB_NUMERICAL_ERROR(LimitUndefined);
LAGFIB_NUMERICAL_ERROR(OffHypersurface);
LAGFIB_NUMERICAL_ERROR(NoContraction);
LAGFIB_NUMERICAL_ERROR(DegenerateFrame);
LAGFIB_NUMERICAL_ERROR(SingularPoint);
LAGFIB_NUMERICAL_ERROR(SingularApproach);
LAGFIB_NUMERICAL_ERROR(StepUnderflow);
LAGFIB_NUMERICAL_ERROR(AliasedFrame);
LAGFIB_NUMERICAL_ERROR(PhaseWrapFailure);
LAGFIB_NUMERICAL_ERROR(Diverged);
LAGFIB_NUMERICAL_ERROR(OutOfBall);
LAGFIB_NUMERICAL_ERROR(StallAtU);
LAGFIB_NUMERICAL_ERROR(NoMatch);
LAGFIB_NUMERICAL_ERROR(ContinuationBreak);
LAGFIB_NUMERICAL_ERROR(NonInteger);
LAGFIB_NUMERICAL_ERROR(OpenPath);

#undef LAGFIB_NUMERICAL_ERROR

}  // namespace lagfib

#endif

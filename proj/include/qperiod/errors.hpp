#pragma once

#include <stdexcept>
#include <string>

namespace qperiod {

/// Caller violated a precondition (mismatched caps, bad index, malformed input).
class UsageError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Base class for failures raised by the engine on well-formed input.
class EngineError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class NotUnitError : public EngineError {
public:
    NotUnitError() : EngineError("not a unit: constant term is zero") {}
};

/// A denominator factor (class + m z) has zero constant term.
class SingularFactorError : public EngineError {
public:
    using EngineError::EngineError;
};

/// Twist product upper limit f_s.d + rho.D is negative.
class TwistRangeError : public EngineError {
public:
    using EngineError::EngineError;
};

/// The x-grading does not make each x-degree a finite set of curve classes.
class NonFanoError : public EngineError {
public:
    using EngineError::EngineError;
};

/// Unit coefficients failed the z^(1-d) scaling. Always a bug.
class HomogeneityError : public EngineError {
public:
    using EngineError::EngineError;
};

/// Estimated lattice-point count exceeds the configured work budget.
class BudgetExceededError : public EngineError {
public:
    using EngineError::EngineError;
};

} // namespace qperiod

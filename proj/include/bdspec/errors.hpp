#pragma once

#include <stdexcept>
#include <string>

namespace bdspec {

/// Base class for all library errors.
class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// A model parameter that must be a positive real is not.
class NonPositiveParameter : public Error {
  public:
    using Error::Error;
};

/// Parameters make a pole-formula denominator vanish (or the model reduces
/// to a simpler catalog family); the message names the offending expression.
class DegenerateParameters : public Error {
  public:
    using Error::Error;
};

/// State index or argument outside the operation's domain.
class OutOfDomain : public Error {
  public:
    using Error::Error;
};

/// Stieltjes-transform argument not strictly below the spectral support.
class ZInSupport : public Error {
  public:
    using Error::Error;
};

/// Requested closed form does not exist for this family.
class NoClosedForm : public Error {
  public:
    using Error::Error;
};

/// Node doubling changed a quadrature result by more than the budget.
class NonConvergedQuadrature : public Error {
  public:
    using Error::Error;
};

/// Oracle window required for the tolerance exceeds the configured cap.
class WindowTooLarge : public Error {
  public:
    using Error::Error;
};

}  // namespace bdspec

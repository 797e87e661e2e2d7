#pragma once

#include <stdexcept>
#include <string>

namespace pcp {

// Base class for all library errors so callers can catch pcp failures as one family.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Bad parameters, configuration, or input files (CLI exit code 2).
struct ParameterError : Error { using Error::Error; };
// Numerical failures discovered while computing (CLI exit code 3).
struct NumericalError : Error { using Error::Error; };

struct InvalidThreshold : ParameterError { using ParameterError::ParameterError; };
struct InvalidAlpha     : ParameterError { using ParameterError::ParameterError; };
struct InvalidEps       : ParameterError { using ParameterError::ParameterError; };
struct InvalidArgument  : ParameterError { using ParameterError::ParameterError; };
struct LambdaHalf       : ParameterError { using ParameterError::ParameterError; };
struct NotAPolynomial   : ParameterError { using ParameterError::ParameterError; };
struct OutOfRange       : ParameterError { using ParameterError::ParameterError; };
struct DimensionMismatch: ParameterError { using ParameterError::ParameterError; };
struct ParseError       : ParameterError { using ParameterError::ParameterError; };

struct NonConvergent    : NumericalError { using NumericalError::NumericalError; };
struct ZeroOperator     : NumericalError { using NumericalError::NumericalError; };
struct NotNormalized    : NumericalError { using NumericalError::NumericalError; };
struct ZeroReference    : NumericalError { using NumericalError::NumericalError; };
struct EmptyFeasible    : NumericalError { using NumericalError::NumericalError; };

}  // namespace pcp

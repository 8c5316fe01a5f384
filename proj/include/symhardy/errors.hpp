#pragma once

#include <stdexcept>
#include <string>

namespace symhardy {

/// Invalid argument: out-of-range index, non-unitary matrix, zero-norm input.
class DomainError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Malformed textual input (state specs, settings files, unknown names).
class ParseError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Request exceeds a hard size cap (dense vectors, LHV enumeration).
class ResourceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Numerical breakdown: root finder failure, probability outside [0,1].
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// The analysis does not apply to this input, e.g. a product state has no
/// Hardy test.
class AnalysisError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class SeparableError : public AnalysisError {
public:
    using AnalysisError::AnalysisError;
};

} // namespace symhardy

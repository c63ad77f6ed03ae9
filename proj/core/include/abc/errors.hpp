#ifndef ABC_ERRORS_HPP
#define ABC_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace abc {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Observation and simulator output disagree in dimension or summary flag.
class DimensionMismatchError : public Error {
public:
    using Error::Error;
};

/// A kernel density evaluation exceeded the configured bound c.
class InvalidBoundError : public Error {
public:
    using Error::Error;
};

/// A metric needed to divide by a zero data component.
class DivisionByZeroError : public Error {
public:
    using Error::Error;
};

/// The requested quantity is not defined for this kernel configuration.
class UnsupportedError : public Error {
public:
    using Error::Error;
};

/// No proposal was accepted within the sampler's proposal budget.
class ZeroAcceptanceError : public Error {
public:
    using Error::Error;
};

/// A chain occupies a state from which the acceptance ratio is undefined.
class InvalidStateError : public Error {
public:
    using Error::Error;
};

/// Chain initialization exhausted its rejection budget.
class InitFailureError : public Error {
public:
    using Error::Error;
};

/// Every weight in a sample is zero; no estimator can be formed.
class AllWeightsZeroError : public Error {
public:
    using Error::Error;
};

/// Bayes factor denominator estimate is zero.
class ZeroDenominatorError : public Error {
public:
    using Error::Error;
};

} // namespace abc

#endif // ABC_ERRORS_HPP

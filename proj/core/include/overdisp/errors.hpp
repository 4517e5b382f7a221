#pragma once

#include <stdexcept>
#include <string>

namespace overdisp {

/// Base of every error raised by the library. Each subclass maps onto one
/// failure category so callers (notably the CLI) can translate it into an
/// exit status without string matching.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// u <= c: the exceedance event is not rare.
class RarityViolation : public Error {
public:
    using Error::Error;
};

/// A parameter or argument lies outside the region where the quantity is defined.
class DomainError : public Error {
public:
    using Error::Error;
};

/// The service tail is not a valid tail function on [0, 1].
class TailError : public Error {
public:
    using Error::Error;
};

class QuadratureFailure : public Error {
public:
    using Error::Error;
};

/// No sign change of the residual inside the admissible interval.
class BracketFailure : public Error {
public:
    using Error::Error;
};

/// The requested operation has no implementation for this model class.
class Unsupported : public Error {
public:
    using Error::Error;
};

/// The regime needs expansion coefficients beyond the available ones.
class UnsupportedOrder : public Error {
public:
    UnsupportedOrder(const std::string& what, int order) : Error(what), order_(order) {}
    int order() const noexcept { return order_; }

private:
    int order_;
};

}  // namespace overdisp

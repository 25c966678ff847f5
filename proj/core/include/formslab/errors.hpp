#pragma once

#include <stdexcept>
#include <string>

namespace formslab {

// Base of every error thrown by the library. The CLI maps the concrete
// subclasses onto exit codes.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Bad arguments: dimension mismatch, invalid domain, malformed text.
class InputError : public Error {
public:
    using Error::Error;
};

// Inconsistent experiment configuration (e.g. sampler cannot satisfy bounds).
class ConfigError : public Error {
public:
    using Error::Error;
};

// A 64-bit count or exact rational left its representable range.
class OverflowError : public Error {
public:
    using Error::Error;
};

// Work requested exceeds a hard search budget.
class BudgetError : public Error {
public:
    using Error::Error;
};

// Too few usable points survived filtering for a regression.
class InsufficientDataError : public Error {
public:
    using Error::Error;
};

// Numerical target not met (e.g. Monte Carlo relative error).
class NumericalError : public Error {
public:
    using Error::Error;
};

}  // namespace formslab

#pragma once

#include <stdexcept>
#include <string>

namespace openulam {

// Base class for everything thrown by this library.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Argument outside the domain of a map or operation.
struct DomainError : Error {
    using Error::Error;
};

// Requested value outside the range of a branch.
struct RangeError : Error {
    using Error::Error;
};

// Construction parameters violate a precondition.
struct ValidationError : Error {
    using Error::Error;
};

// A configured resource cap (branch count, interval components) was exceeded.
struct ResourceError : Error {
    using Error::Error;
};

// Root finding or measure accounting failed numerically.
struct NumericalError : Error {
    using Error::Error;
};

// The requested diagnostic does not apply to this system.
struct NotApplicableError : Error {
    using Error::Error;
};

// Iterative solver ran out of iterations; carries the last residuals.
struct ConvergenceError : Error {
    double left_residual;
    double right_residual;
    ConvergenceError(const std::string& msg, double lres, double rres)
        : Error(msg), left_residual(lres), right_residual(rres) {}
};

// Too few samples/survivors to produce an estimate.
struct StatisticsError : Error {
    using Error::Error;
};

// An eigenvector is identically zero where it must not be.
struct DegenerateSolutionError : Error {
    using Error::Error;
};

// Config file rejected; message names the offending field.
struct ConfigError : Error {
    using Error::Error;
};

}  // namespace openulam

#ifndef VCH_ERROR_HPP
#define VCH_ERROR_HPP

#include <stdexcept>
#include <string>

namespace vch {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Function evaluated outside its domain (e.g. the entropy at u <= 0).
class DomainError : public Error {
public:
    using Error::Error;
};

/// Caller violated a documented precondition.
class PreconditionError : public Error {
public:
    using Error::Error;
};

/// Non-finite or runaway values appeared in a field.
class NumericalBlowUp : public Error {
public:
    using Error::Error;
};

/// Conjugate gradients failed to reach the requested tolerance.
class LinearSolveError : public Error {
public:
    LinearSolveError(const std::string& what, double residual, int iterations)
        : Error(what), residual_(residual), iterations_(iterations) {}

    double residual() const { return residual_; }
    int iterations() const { return iterations_; }

private:
    double residual_;
    int iterations_;
};

/// The fixed-point iteration of an implicit step did not converge; retry with a smaller dt.
class StepRejected : public Error {
public:
    using Error::Error;
};

/// Invalid or unreadable run configuration.
class ConfigError : public Error {
public:
    using Error::Error;
};

/// Malformed snapshot or report file.
class FormatError : public Error {
public:
    using Error::Error;
};

}  // namespace vch

#endif  // VCH_ERROR_HPP

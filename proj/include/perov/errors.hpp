#pragma once

#include <stdexcept>
#include <string>

namespace perov {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class DimensionMismatch : public Error {
public:
    using Error::Error;
};

/// Raised when an operator needs r(A) < 1 (or r(bA) < 1) and it does not hold.
class SpectralRadiusTooLarge : public Error {
public:
    SpectralRadiusTooLarge(const std::string& what, double radius)
        : Error(what), radius_(radius) {}
    double radius() const noexcept { return radius_; }

private:
    double radius_;
};

class SingularSystem : public Error {
public:
    using Error::Error;
};

/// The four zero-convergence criteria gave different answers outside the
/// near-critical band. They are equivalent for nonnegative matrices, so this
/// always means a numerical problem.
class CriteriaDisagreement : public Error {
public:
    using Error::Error;
};

class InvalidArgument : public Error {
public:
    using Error::Error;
};

/// Malformed problem document (not JSON, wrong JSON types, unknown keys).
class SyntaxError : public Error {
public:
    SyntaxError(std::string path, const std::string& what)
        : Error(path.empty() ? what : path + ": " + what), path_(std::move(path)) {}
    const std::string& path() const noexcept { return path_; }

private:
    std::string path_;
};

/// Well-formed document whose content violates a mathematical precondition.
class ValidationError : public Error {
public:
    ValidationError(std::string path, const std::string& what)
        : Error(path + ": " + what), path_(std::move(path)) {}
    const std::string& path() const noexcept { return path_; }

private:
    std::string path_;
};

class UnknownExample : public Error {
public:
    using Error::Error;
};

/// A Picard iterate left the declared domain.
class IterateEscapedDomain : public Error {
public:
    using Error::Error;
};

}  // namespace perov

#pragma once

#include <stdexcept>
#include <string>

namespace qkgp {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Bad argument: wrong shape, out-of-range parameter, malformed label.
class InvalidArgument : public Error {
public:
    using Error::Error;
};

/// Truncation level not allowed for the requested operation.
class InvalidTruncation : public InvalidArgument {
public:
    using InvalidArgument::InvalidArgument;
};

class DimensionMismatch : public InvalidArgument {
public:
    using InvalidArgument::InvalidArgument;
};

/// Non-finite input or a failed decomposition.
class NumericError : public Error {
public:
    using Error::Error;
};

/// Fock-space truncation too small for the requested state.
class TruncationLeakage : public NumericError {
public:
    TruncationLeakage(const std::string& what, double leakage)
        : NumericError(what), leakage_(leakage) {}
    double leakage() const noexcept { return leakage_; }

private:
    double leakage_;
};

/// Cholesky failed after all jitter escalations.
class NotPositiveDefinite : public NumericError {
public:
    NotPositiveDefinite(const std::string& what, double min_eigenvalue)
        : NumericError(what), min_eigenvalue_(min_eigenvalue) {}
    double min_eigenvalue() const noexcept { return min_eigenvalue_; }

private:
    double min_eigenvalue_;
};

class OptimizationError : public NumericError {
public:
    using NumericError::NumericError;
};

/// Value iteration blew up.
class InstabilityError : public NumericError {
public:
    using NumericError::NumericError;
};

class IoError : public Error {
public:
    using Error::Error;
};

}  // namespace qkgp

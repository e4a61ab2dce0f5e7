#pragma once

#include <stdexcept>
#include <string>

namespace kepseries {

/// Root of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Input outside an operation's domain. The CLI maps these to exit code 1.
class DomainError : public Error {
public:
    using Error::Error;
};

/// A numerical procedure ran out of budget or lost accuracy. CLI exit code 2.
class NumericFailure : public Error {
public:
    using Error::Error;
};

class ConvergenceError : public NumericFailure {
public:
    using NumericFailure::NumericFailure;
};

/// Root finder called without a sign change on the bracket.
class BracketError : public NumericFailure {
public:
    using NumericFailure::NumericFailure;
};

class DivergenceError : public NumericFailure {
public:
    using NumericFailure::NumericFailure;
};

class DegenerateFitError : public NumericFailure {
public:
    using NumericFailure::NumericFailure;
};

class BranchNotFoundError : public NumericFailure {
public:
    using NumericFailure::NumericFailure;
};

class IncompleteTableError : public DomainError {
public:
    using DomainError::DomainError;
};

class NoRealRootError : public DomainError {
public:
    using DomainError::DomainError;
};

class OutOfRadiusError : public DomainError {
public:
    using DomainError::DomainError;
};

class OverflowError : public DomainError {
public:
    using DomainError::DomainError;
};

namespace detail {

inline void require(bool ok, const std::string& what) {
    if (!ok) throw DomainError(what);
}

}  // namespace detail
}  // namespace kepseries

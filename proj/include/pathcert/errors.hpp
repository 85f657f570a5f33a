#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace pathcert {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Errors caused by malformed or inconsistent input (CLI exit code 2).
class InputError : public Error {
public:
    using Error::Error;
};

/// Errors where the input is well formed but an analysis cannot be certified
/// (CLI exit code 1).
class RefusalError : public Error {
public:
    using Error::Error;
};

class SyntaxError : public InputError {
public:
    SyntaxError(const std::string& msg, std::size_t line, std::size_t column)
        : InputError(std::to_string(line) + ":" + std::to_string(column) + ": " + msg),
          line_(line), column_(column) {}
    std::size_t line() const { return line_; }
    std::size_t column() const { return column_; }

private:
    std::size_t line_;
    std::size_t column_;
};

class ResolutionError : public InputError {
public:
    using InputError::InputError;
};

class DuplicateIdError : public InputError {
public:
    using InputError::InputError;
};

class InvalidGraph : public InputError {
public:
    using InputError::InputError;
};

class UnknownVertex : public InputError {
public:
    using InputError::InputError;
};

class BoundsError : public InputError {
public:
    using InputError::InputError;
};

class CompositionMismatch : public InputError {
public:
    using InputError::InputError;
};

class IndexBelowMin : public InputError {
public:
    using InputError::InputError;
};

class NotUnique : public InputError {
public:
    using InputError::InputError;
};

class NoPath : public InputError {
public:
    using InputError::InputError;
};

class NotEquivalent : public InputError {
public:
    using InputError::InputError;
};

class NotComposable : public InputError {
public:
    using InputError::InputError;
};

class SliceTooSmall : public InputError {
public:
    using InputError::InputError;
};

class NotPrincipal : public RefusalError {
public:
    using RefusalError::RefusalError;
};

class DenominatorNotExact : public RefusalError {
public:
    using RefusalError::RefusalError;
};

class NonExactCount : public RefusalError {
public:
    using RefusalError::RefusalError;
};

class StrengthNotCertified : public RefusalError {
public:
    using RefusalError::RefusalError;
};

class EmpiricalOnly : public RefusalError {
public:
    using RefusalError::RefusalError;
};

class NoOrbitConvergence : public RefusalError {
public:
    using RefusalError::RefusalError;
};

class NonUniformFamily : public RefusalError {
public:
    using RefusalError::RefusalError;
};

}  // namespace pathcert

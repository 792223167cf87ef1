#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace bigref {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Interfaces of a composition do not agree.
class CompositionError : public Error {
public:
    using Error::Error;
};

/// Tensor (or parallel) product of bigraphs whose names clash.
class TensorError : public Error {
public:
    using Error::Error;
};

/// Source text position, 1-based.
struct SourcePos {
    std::size_t line = 1;
    std::size_t column = 1;
};

class ParseError : public Error {
public:
    ParseError(SourcePos pos, const std::string& what)
        : Error(std::to_string(pos.line) + ":" + std::to_string(pos.column) + ": " + what), pos_(pos) {}

    SourcePos pos() const { return pos_; }

private:
    SourcePos pos_;
};

/// A term or rule could not be turned into a bigraph over a signature.
class ElaborationError : public Error {
public:
    using Error::Error;
};

/// The bigraph cannot be written in the term language.
class NotTermExpressible : public Error {
public:
    using Error::Error;
};

/// Caller broke an operation's precondition (foreign controls, bad functor, ...).
class InvalidArgument : public Error {
public:
    using Error::Error;
};

/// Recomposing a match did not reproduce the agent it was taken from.
class StaleMatch : public Error {
public:
    using Error::Error;
};

/// State exploration hit its configured cap.
class BoundExceeded : public Error {
public:
    explicit BoundExceeded(std::size_t cap)
        : Error("exploration exceeded the state cap of " + std::to_string(cap)), cap_(cap) {}

    std::size_t cap() const { return cap_; }

private:
    std::size_t cap_;
};

} // namespace bigref

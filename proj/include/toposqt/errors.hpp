#pragma once

#include <stdexcept>
#include <string>

namespace toposqt {

// All validation failures raised by the library derive from Error so callers
// (and the CLI exit-code mapping) can catch one type.
struct Error : std::runtime_error {
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

struct InvalidOperator : Error {
    using Error::Error;
};

struct InvalidFamily : Error {
    using Error::Error;
};

struct DimensionMismatch : Error {
    using Error::Error;
};

struct NotCommuting : Error {
    using Error::Error;
};

struct NotASubcontext : Error {
    using Error::Error;
};

struct EmptyFilterBase : Error {
    using Error::Error;
};

struct InvalidSubObject : Error {
    using Error::Error;
};

// Raised when a k-value square is requested outside the monoid image.
struct NotEmbedded : Error {
    using Error::Error;
};

// Raised when an enumeration exceeds its configured node budget.
struct SizeLimit : Error {
    using Error::Error;
};

struct ParseError : Error {
    using Error::Error;
};

}  // namespace toposqt

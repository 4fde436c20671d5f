#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace capres {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed input text. `row()` is the 1-based line number, 0 when unknown.
class ParseError : public Error {
public:
    ParseError(std::size_t row, const std::string& reason)
        : Error(row ? "row " + std::to_string(row) + ": " + reason : reason), row_(row) {}

    std::size_t row() const noexcept { return row_; }

private:
    std::size_t row_;
};

/// The network is not a connected radial tree rooted at bus 0.
class StructureError : public Error {
public:
    StructureError(std::size_t row, const std::string& reason)
        : Error(row ? "row " + std::to_string(row) + ": " + reason : reason), row_(row) {}

    std::size_t row() const noexcept { return row_; }

private:
    std::size_t row_;
};

/// A precondition on an argument was violated (unknown bus, bad placement, bad config).
class InvalidArgument : public Error {
public:
    using Error::Error;
};

/// Raised when the short-circuit power of the substation bus is requested; the
/// source is modelled as an infinite bus, so there is no finite value.
class InfiniteShortCircuit : public Error {
public:
    InfiniteShortCircuit() : Error("short-circuit power at the substation root is infinite") {}
};

} // namespace capres

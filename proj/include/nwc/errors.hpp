#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace nwc {

// Syntax error in a polynomial expression; `position` is a 0-based byte
// offset into the input text.
struct ParseError : std::runtime_error {
    std::size_t position;
    ParseError(std::size_t pos, const std::string& msg)
        : std::runtime_error(msg + " (at position " + std::to_string(pos) + ")"),
          position(pos) {}
};

// Violated precondition on an operation's input (zero polynomial where a
// nonzero one is required, vanishing coordinate, index out of range, ...).
struct DomainError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Input exceeds the scale this implementation is designed for (too many
// variables, too many support points, oversized enumeration boxes).  The
// exact algorithms here are exponential in those parameters by design, so
// we refuse loudly instead of running forever.
struct ScaleLimitError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace nwc

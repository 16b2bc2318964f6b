#pragma once

#include <stdexcept>
#include <string>

namespace parsol {

// Base class for everything thrown by the library.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Bad user input: malformed files, out-of-range arguments, unknown ids.
struct InputError : Error {
    using Error::Error;
};

// Malformed input file; carries the 1-based line number when known.
struct ParseError : InputError {
    ParseError(const std::string& msg, int line_no = 0)
        : InputError(line_no > 0 ? msg + " (line " + std::to_string(line_no) + ")" : msg),
          line(line_no) {}
    int line;
};

// Invalid geometry (self-intersecting footprint, degenerate mesh, ...).
struct GeometryError : Error {
    using Error::Error;
};

// A computation could not produce a defined result (constant series in a
// rank correlation, zero-day averaging period, ...).
struct ComputeError : Error {
    using Error::Error;
};

} // namespace parsol

#pragma once

#include <stdexcept>
#include <string>

namespace paramex {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Malformed problem text. Carries 1-based line/column of the offending token.
struct ParseError : Error {
    int line = 0;
    int col = 0;
    ParseError(const std::string& msg, int line_, int col_)
        : Error(msg + " (line " + std::to_string(line_) + ", col " + std::to_string(col_) + ")"),
          line(line_), col(col_) {}
    explicit ParseError(const std::string& msg) : Error(msg) {}
};

// Division by an interval containing zero, sqrt of a negative number,
// or an operation that requires a nonempty interval.
struct DomainError : Error {
    using Error::Error;
};

struct ShapeError : Error {
    using Error::Error;
};

struct SingularMatrixError : Error {
    using Error::Error;
};

// D_j <= 0 in a radius computation: no region certifiable with the given scaling.
struct NonpositiveDiscriminantError : Error {
    int component = -1;
    NonpositiveDiscriminantError(const std::string& msg, int j)
        : Error(msg + " (component " + std::to_string(j + 1) + ")"), component(j) {}
};

struct LambdaOrderError : Error {
    using Error::Error;
};

// A required region or approximation range leaves the search box.
struct RegionDomainError : Error {
    using Error::Error;
};

}  // namespace paramex

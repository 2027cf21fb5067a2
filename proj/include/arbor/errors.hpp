#pragma once

#include <stdexcept>
#include <string>

namespace arbor {

/// Base class for all workbench errors.
struct error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Malformed tree shape, level map, or serialized document.
struct shape_error : error {
    using error::error;
};

/// A requested level exceeds the stored truncation depth or the depth budget.
struct depth_error : error {
    using error::error;
};

/// An operation precondition does not hold (non-minimal base, bad residue, ...).
struct domain_error : error {
    using error::error;
};

/// A recursive definition cannot be evaluated level by level.
struct recursion_error : error {
    using error::error;
};

/// Syntax error in a definitions file; carries a 1-based source position.
struct parse_error : error {
    int line;
    int column;
    parse_error(const std::string& msg, int line_, int column_)
        : error(msg + " (line " + std::to_string(line_) + ", column " +
                std::to_string(column_) + ")"),
          line(line_),
          column(column_) {}
};

}  // namespace arbor

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "arbor/expr.hpp"

namespace arbor {

/// Definition file grammar:
///
///   def   := name "=" expr
///   expr  := term { "*" term }
///   term  := "id" | "eta" | "perm(" cycles ")" | "(" expr { "," expr } ")"
///          | name | term "^" int
///
/// Whitespace (including newlines) is insignificant; a name followed by "="
/// starts the next definition.  "#" comments run to end of line.  "eta" swaps
/// the letters 0 and 1; "perm" takes cycles of letters below the arity, e.g.
/// perm(0 1 2) or perm((0 1)(2 3)).  In a product the rightmost factor is
/// applied to a point first, so "a = (a, id) * eta" is the adding machine.
struct ParsedDefinition {
    std::string name;
    ExprPtr expr;
    int line = 1;
};

/// Syntax pass only; no binding or contraction checks.
std::vector<ParsedDefinition> parse_definition_list(const std::string& source,
                                                    std::uint32_t arity);

/// Parses and binds every definition in order.  Contraction or resolution
/// failures are rethrown as parse_error at the offending definition.
RecursionEnv parse_definitions(const std::string& source, std::uint32_t arity);

/// A single expression (no "name =" prefix), for command-line arguments.
ExprPtr parse_expression(const std::string& source, std::uint32_t arity);

}  // namespace arbor

#pragma once

#include <set>
#include <string>
#include <string_view>

#include "ndho/expr.hpp"

namespace ndho {

// Recursive-descent reader for the published expression grammar:
//
//   expr   := ('+' | '-')? term (('+' | '-') term)*
//   term   := factor (('*' | '/') factor)*
//   factor := base ('^' exponent)?
//   base   := integer | symbol | '(' expr ')' | func '(' expr ')'
//   func   := exp | sin | cos | sinh | cosh | sqrt
//
// An exponent is a signed integer, or a half-integer written n/2 with odd n
// (an even numerator over 2 is an integer and parses as a division instead).
// Reserved symbols are t, u, u1, m, c, k; anything else must be declared.
// Whitespace-insensitive. Throws ParseError / UnknownSymbolError.
Expr parse_expr(std::string_view text, const std::set<std::string>& declared = {});

}  // namespace ndho

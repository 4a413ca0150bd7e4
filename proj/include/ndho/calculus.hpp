#pragma once

#include <map>
#include <optional>
#include <string_view>
#include <utility>

#include "ndho/expr.hpp"

namespace ndho {

// Coefficients of e as a polynomial in sym: power -> coefficient expression.
// Throws UnsupportedExpressionError when sym occurs inside a function
// argument or an opaque denominator (e is then not polynomial in sym).
std::map<long long, Expr> collect_powers(const Expr& e, std::string_view sym);

// Bivariate version keyed by (power of s1, power of s2).
std::map<std::pair<long long, long long>, Expr> collect_powers2(const Expr& e,
                                                                std::string_view s1,
                                                                std::string_view s2);

// Highest power of sym; 0 when absent. Same restrictions as collect_powers.
long long degree_in(const Expr& e, std::string_view sym);

bool polynomial_in(const Expr& e, std::string_view sym);

// Exact inverse of a constant expression: a single term, or an element
// a + b*sqrt(r) of a quadratic extension (rationalized recursively).
std::optional<Expr> invert_constant(const Expr& e);

// Exact quotient a/b when b is a single term or an invertible constant.
std::optional<Expr> divide_exact(const Expr& a, const Expr& b);

// Closed-form antiderivative in t for sums of terms
//   const * t^n * exp(a*t + p) * {sin,cos,sinh,cosh}(b*t + q),
// with a, b, p, q free of t. Returns nullopt outside that span.
std::optional<Expr> antiderivative_t(const Expr& e);

}  // namespace ndho

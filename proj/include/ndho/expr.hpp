#pragma once

#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "ndho/rational.hpp"

namespace ndho {

// Function heads admitted by the expression class.
enum class Fn { Exp, Sin, Cos, Sinh, Cosh, Sqrt };
const char* fn_name(Fn fn);

class Expr;
using Assignment = std::map<std::string, double, std::less<>>;

namespace detail {

struct Term;
using TermList = std::vector<Term>;
using TermListPtr = std::shared_ptr<const TermList>;

// A multiplicative atom: a symbol, a function applied to an expression, or
// an opaque parenthesized sum (only ever carried with negative exponents).
struct Atom {
    enum class Kind { Symbol, Function, Composite };
    Kind kind = Kind::Symbol;
    std::string sym;   // Kind::Symbol
    Fn fn = Fn::Exp;   // Kind::Function
    TermListPtr arg;   // Function argument / Composite base (canonical)
};

struct Factor {
    Atom atom;
    long long exp = 1;  // never 0
};

// coeff * product of factors; factors sorted by atom order, atoms unique.
struct Term {
    Rational coeff;
    std::vector<Factor> factors;
};

int cmp(const Atom& a, const Atom& b);
int cmp_monomial(const std::vector<Factor>& a, const std::vector<Factor>& b);
int cmp(const TermList& a, const TermList& b);

}  // namespace detail

// Immutable symbolic expression over exact rationals, kept in a canonical
// flattened sum-of-products form so that structural equality is decidable.
// The function basis is deliberately closed: monomials in declared symbols
// times at most one exponential and trig/hyperbolic factors, with sqrt as
// an opaque radical. Products of trig (resp. hyperbolic) factors rewrite to
// sums of single factors during construction, and a hyperbolic factor
// sharing a term with an exponential is expanded into exponentials.
class Expr {
public:
    Expr();  // zero
    Expr(const Rational& r);  // NOLINT: implicit by design
    Expr(long long n) : Expr(Rational(n)) {}  // NOLINT
    Expr(int n) : Expr(Rational(n)) {}        // NOLINT

    static Expr symbol(std::string name);
    static Expr t() { return symbol("t"); }
    static Expr u() { return symbol("u"); }
    static Expr u1() { return symbol("u1"); }
    static Expr u2() { return symbol("u2"); }  // formal u'' (internal use)
    static Expr m() { return symbol("m"); }
    static Expr c() { return symbol("c"); }
    static Expr k() { return symbol("k"); }

    static Expr exp(const Expr& x);
    static Expr sin(const Expr& x);
    static Expr cos(const Expr& x);
    static Expr sinh(const Expr& x);
    static Expr cosh(const Expr& x);
    static Expr sqrt(const Expr& x);
    static Expr apply(Fn fn, const Expr& x);

    // Integer or half-integer exponent; anything else is out of class.
    Expr pow(const Rational& e) const;

    friend Expr operator+(const Expr& a, const Expr& b);
    friend Expr operator-(const Expr& a, const Expr& b);
    friend Expr operator*(const Expr& a, const Expr& b);
    friend Expr operator/(const Expr& a, const Expr& b);
    Expr operator-() const;

    bool operator==(const Expr& o) const;
    bool operator!=(const Expr& o) const { return !(*this == o); }

    bool is_zero_literal() const;
    bool is_one_literal() const;
    std::optional<Rational> as_rational() const;

    bool depends_on(std::string_view name) const;
    std::set<std::string> free_symbols() const;

    // Exact partial derivative; every other symbol is held constant.
    Expr diff(std::string_view name) const;
    Expr diff(std::string_view name, int order) const;

    // Simultaneous substitution followed by canonicalization.
    Expr substitute(const std::map<std::string, Expr>& bindings) const;

    double eval(const Assignment& a) const;
    // Sum of term magnitudes at the same point; scale for the zero test.
    double eval_magnitude(const Assignment& a) const;

    std::string str() const;

    std::size_t term_count() const;
    // Leading coefficient in canonical term order (0 for the zero expr).
    Rational leading_coeff() const;

    const detail::TermList& terms() const { return *terms_; }
    static Expr from_terms(detail::TermList terms);

private:
    explicit Expr(detail::TermListPtr terms) : terms_(std::move(terms)) {}
    detail::TermListPtr terms_;
    friend struct detail::Term;
};

struct ZeroTestOptions {
    int points = 12;        // random samples per decision
    double tol = 1e-9;      // |value| < tol * (1 + magnitude)
    int max_redraws = 40;   // per point, on domain errors
    unsigned seed = 0xD1CE5EED;
};

// True when the canonical form is literally zero, otherwise an evaluation
// at random points in [-2,-0.1] u [0.1,2] per free symbol. One-sided: a
// "false" answer is exact, a "true" answer is correct with overwhelming
// probability for this expression class.
bool is_zero(const Expr& e, const ZeroTestOptions& opt = {});

}  // namespace ndho

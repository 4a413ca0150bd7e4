#include "ndho/parse.hpp"

#include <cctype>
#include <optional>

namespace ndho {

namespace {

const std::set<std::string>& reserved_symbols() {
    static const std::set<std::string> r = {"t", "u", "u1", "m", "c", "k"};
    return r;
}

struct Parser {
    std::string_view text;
    std::size_t pos = 0;
    const std::set<std::string>& declared;

    void skip_ws() {
        while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
    }

    bool peek_char(char c) {
        skip_ws();
        return pos < text.size() && text[pos] == c;
    }

    bool consume(char c) {
        if (peek_char(c)) {
            ++pos;
            return true;
        }
        return false;
    }

    [[noreturn]] void fail(const std::string& msg) { throw ParseError(msg, pos); }

    long long read_digits() {
        skip_ws();
        std::size_t start = pos;
        if (pos >= text.size() || !std::isdigit(static_cast<unsigned char>(text[pos])))
            fail("expected a number");
        __int128 v = 0;
        while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) {
            v = v * 10 + (text[pos] - '0');
            if (v > static_cast<__int128>(1'000'000'000'000'000'000LL))
                throw ParseError("integer literal too large", start);
            ++pos;
        }
        if (pos < text.size() && text[pos] == '.')
            fail("decimal literals are not part of the grammar; use exact rationals like 1/2");
        return static_cast<long long>(v);
    }

    std::string read_identifier() {
        skip_ws();
        std::size_t start = pos;
        if (pos >= text.size() ||
            !(std::isalpha(static_cast<unsigned char>(text[pos])) || text[pos] == '_'))
            fail("expected a symbol");
        while (pos < text.size() && (std::isalnum(static_cast<unsigned char>(text[pos])) ||
                                     text[pos] == '_'))
            ++pos;
        return std::string(text.substr(start, pos - start));
    }

    std::optional<Fn> as_function(const std::string& name) {
        if (name == "exp") return Fn::Exp;
        if (name == "sin") return Fn::Sin;
        if (name == "cos") return Fn::Cos;
        if (name == "sinh") return Fn::Sinh;
        if (name == "cosh") return Fn::Cosh;
        if (name == "sqrt") return Fn::Sqrt;
        return std::nullopt;
    }

    Expr parse_base() {
        skip_ws();
        if (pos >= text.size()) fail("unexpected end of input");
        char ch = text[pos];
        if (std::isdigit(static_cast<unsigned char>(ch))) return Expr(Rational(read_digits()));
        if (ch == '(') {
            ++pos;
            Expr inner = parse_sum();
            if (!consume(')')) fail("expected ')'");
            return inner;
        }
        std::size_t start = pos;
        std::string name = read_identifier();
        if (auto fn = as_function(name)) {
            if (!consume('(')) fail("expected '(' after function name");
            Expr arg = parse_sum();
            if (!consume(')')) fail("expected ')'");
            return Expr::apply(*fn, arg);
        }
        if (!reserved_symbols().count(name) && !declared.count(name))
            throw UnknownSymbolError(name, start);
        return Expr::symbol(name);
    }

    // Signed integer or true half-integer (odd numerator over a literal 2).
    // "u^2/4" keeps the '/' as a division; "u^3/2" is a half-integer power.
    Rational parse_exponent() {
        skip_ws();
        bool neg = false;
        if (pos < text.size() && (text[pos] == '+' || text[pos] == '-')) {
            neg = text[pos] == '-';
            ++pos;
        }
        long long n = read_digits();
        long long den = 1;
        if (n % 2 != 0 && pos + 1 < text.size() && text[pos] == '/' && text[pos + 1] == '2' &&
            (pos + 2 >= text.size() || !std::isdigit(static_cast<unsigned char>(text[pos + 2])))) {
            pos += 2;
            den = 2;
        }
        return Rational(neg ? -n : n, den);
    }

    Expr parse_factor() {
        Expr base = parse_base();
        skip_ws();
        if (pos < text.size() && text[pos] == '^') {
            ++pos;
            Rational e = parse_exponent();
            if (base.is_zero_literal() && e.is_negative())
                throw ParseError("zero raised to a negative power", pos);
            return base.pow(e);
        }
        return base;
    }

    Expr parse_term() {
        Expr acc = parse_factor();
        for (;;) {
            skip_ws();
            if (pos < text.size() && text[pos] == '*') {
                ++pos;
                acc = acc * parse_factor();
            } else if (pos < text.size() && text[pos] == '/') {
                ++pos;
                std::size_t at = pos;
                Expr rhs = parse_factor();
                if (rhs.is_zero_literal()) throw ParseError("division by zero", at);
                acc = acc / rhs;
            } else {
                return acc;
            }
        }
    }

    Expr parse_sum() {
        skip_ws();
        bool neg = false;
        if (pos < text.size() && (text[pos] == '+' || text[pos] == '-')) {
            neg = text[pos] == '-';
            ++pos;
        }
        Expr acc = parse_term();
        if (neg) acc = -acc;
        for (;;) {
            skip_ws();
            if (pos < text.size() && text[pos] == '+') {
                ++pos;
                acc = acc + parse_term();
            } else if (pos < text.size() && text[pos] == '-') {
                ++pos;
                acc = acc - parse_term();
            } else {
                return acc;
            }
        }
    }
};

}  // namespace

Expr parse_expr(std::string_view text, const std::set<std::string>& declared) {
    Parser p{text, 0, declared};
    Expr e = p.parse_sum();
    p.skip_ws();
    if (p.pos != text.size()) p.fail("unexpected trailing input");
    return e;
}

}  // namespace ndho

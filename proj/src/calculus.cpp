#include "ndho/calculus.hpp"

#include <algorithm>

namespace ndho {

using detail::Atom;
using detail::Factor;
using detail::Term;
using detail::TermList;

namespace {

bool atom_is_symbol(const Atom& a, std::string_view sym) {
    return a.kind == Atom::Kind::Symbol && a.sym == sym;
}

bool atom_hides_symbol(const Atom& a, std::string_view sym) {
    if (a.kind == Atom::Kind::Symbol) return false;
    for (const Term& t : *a.arg)
        for (const Factor& f : t.factors)
            if (atom_is_symbol(f.atom, sym) || atom_hides_symbol(f.atom, sym)) return true;
    return false;
}

long long term_power(const Term& t, std::string_view sym, std::vector<Factor>& rest) {
    long long power = 0;
    rest.clear();
    for (const Factor& f : t.factors) {
        if (atom_is_symbol(f.atom, sym)) {
            power = f.exp;
            continue;
        }
        if (atom_hides_symbol(f.atom, sym))
            throw UnsupportedExpressionError(
                "expression is not polynomial in '" + std::string(sym) + "'");
        rest.push_back(f);
    }
    return power;
}

}  // namespace

std::map<long long, Expr> collect_powers(const Expr& e, std::string_view sym) {
    std::map<long long, TermList> buckets;
    std::vector<Factor> rest;
    for (const Term& t : e.terms()) {
        long long p = term_power(t, sym, rest);
        buckets[p].push_back(Term{t.coeff, rest});
    }
    std::map<long long, Expr> out;
    for (auto& [p, tl] : buckets) out.emplace(p, Expr::from_terms(std::move(tl)));
    return out;
}

std::map<std::pair<long long, long long>, Expr> collect_powers2(const Expr& e,
                                                                std::string_view s1,
                                                                std::string_view s2) {
    std::map<std::pair<long long, long long>, TermList> buckets;
    for (const Term& t : e.terms()) {
        long long p1 = 0, p2 = 0;
        std::vector<Factor> rest;
        for (const Factor& f : t.factors) {
            if (atom_is_symbol(f.atom, s1)) {
                p1 = f.exp;
                continue;
            }
            if (atom_is_symbol(f.atom, s2)) {
                p2 = f.exp;
                continue;
            }
            if (atom_hides_symbol(f.atom, s1) || atom_hides_symbol(f.atom, s2))
                throw UnsupportedExpressionError("expression is not polynomial in the requested symbols");
            rest.push_back(f);
        }
        buckets[{p1, p2}].push_back(Term{t.coeff, std::move(rest)});
    }
    std::map<std::pair<long long, long long>, Expr> out;
    for (auto& [key, tl] : buckets) out.emplace(key, Expr::from_terms(std::move(tl)));
    return out;
}

long long degree_in(const Expr& e, std::string_view sym) {
    long long deg = 0;
    std::vector<Factor> rest;
    for (const Term& t : e.terms()) deg = std::max(deg, term_power(t, sym, rest));
    return deg;
}

bool polynomial_in(const Expr& e, std::string_view sym) {
    std::vector<Factor> rest;
    try {
        for (const Term& t : e.terms()) {
            if (term_power(t, sym, rest) < 0) return false;
        }
    } catch (const UnsupportedExpressionError&) {
        return false;
    }
    return true;
}

std::optional<Expr> invert_constant(const Expr& e) {
    if (e.is_zero_literal()) return std::nullopt;
    if (e.term_count() == 1) return e.pow(Rational(-1));
    // Rationalize against the first radical present: terms with an odd power
    // of that radical flip sign, the product is free of it.
    const Atom* radical = nullptr;
    for (const Term& t : e.terms()) {
        for (const Factor& f : t.factors) {
            if (f.atom.kind == Atom::Kind::Function && f.atom.fn == Fn::Sqrt) {
                radical = &f.atom;
                break;
            }
        }
        if (radical) break;
    }
    if (!radical) return std::nullopt;
    TermList conj_terms;
    for (const Term& t : e.terms()) {
        Term copy = t;
        for (const Factor& f : t.factors) {
            if (detail::cmp(f.atom, *radical) == 0 && f.exp % 2 != 0) {
                copy.coeff = -copy.coeff;
                break;
            }
        }
        conj_terms.push_back(std::move(copy));
    }
    Expr conj = Expr::from_terms(std::move(conj_terms));
    Expr norm = e * conj;
    // the radical must be gone from the norm, or we made no progress
    for (const Term& t : norm.terms())
        for (const Factor& f : t.factors)
            if (detail::cmp(f.atom, *radical) == 0) return std::nullopt;
    auto inv_norm = invert_constant(norm);
    if (!inv_norm) return std::nullopt;
    return conj * *inv_norm;
}

std::optional<Expr> divide_exact(const Expr& a, const Expr& b) {
    if (b.is_zero_literal()) return std::nullopt;
    if (b.term_count() == 1) return a * b.pow(Rational(-1));
    if (auto inv = invert_constant(b)) return a * *inv;
    return std::nullopt;
}

namespace {

// antiderivatives of t^n * exp(a t) * trig(b t); everything here assumes the
// constants were already checked t-free by the caller.

Expr tpow(long long n) { return Expr::t().pow(Rational(n)); }

// integral of t^n e^{a t}, a != 0
std::optional<Expr> int_poly_exp(long long n, const Expr& a) {
    auto ia = invert_constant(a);
    if (!ia) return std::nullopt;
    Expr eat = Expr::exp(a * Expr::t());
    if (n == 0) return *ia * eat;
    auto rec = int_poly_exp(n - 1, a);
    if (!rec) return std::nullopt;
    return *ia * tpow(n) * eat - Expr(Rational(n)) * *ia * *rec;
}

// integral of t^n e^{a t} sin(w) (or cos), where w = b t + q, b != 0, a may
// be 0. The phase rides along: the closed forms hold for the full argument.
std::optional<Expr> int_poly_exp_circ(long long n, const Expr& a, const Expr& b, const Expr& w,
                                      bool sine) {
    auto denom_inv = invert_constant(a * a + b * b);
    if (!denom_inv) return std::nullopt;
    Expr eat = a.is_zero_literal() ? Expr(Rational(1)) : Expr::exp(a * Expr::t());
    Expr sn = Expr::sin(w);
    Expr cn = Expr::cos(w);
    Expr f0 = sine ? *denom_inv * eat * (a * sn - b * cn)
                   : *denom_inv * eat * (a * cn + b * sn);
    if (n == 0) return f0;
    // by parts: integral t^n g = t^n G - n integral t^(n-1) G, with G = f0
    // expanded linearly into sin and cos pieces.
    auto rec_sin = int_poly_exp_circ(n - 1, a, b, w, true);
    auto rec_cos = int_poly_exp_circ(n - 1, a, b, w, false);
    if (!rec_sin || !rec_cos) return std::nullopt;
    Expr gs = sine ? *denom_inv * a : *denom_inv * b;          // sin coefficient of G
    Expr gc = sine ? -(*denom_inv * b) : *denom_inv * a;       // cos coefficient of G
    return tpow(n) * f0 - Expr(Rational(n)) * (gs * *rec_sin + gc * *rec_cos);
}

// integral of t^n sinh(w) (or cosh), w = b t + q, b != 0, no exponential
std::optional<Expr> int_poly_hyp(long long n, const Expr& b, const Expr& w, bool sh) {
    auto ib = invert_constant(b);
    if (!ib) return std::nullopt;
    Expr shb = Expr::sinh(w);
    Expr chb = Expr::cosh(w);
    Expr f0 = sh ? *ib * chb : *ib * shb;
    if (n == 0) return f0;
    auto rec = int_poly_hyp(n - 1, b, w, !sh);
    if (!rec) return std::nullopt;
    return tpow(n) * f0 - Expr(Rational(n)) * *ib * *rec;
}

struct TermShape {
    long long n = 0;  // power of t
    Expr rest;        // t-free multiplier
    std::optional<std::pair<Fn, Expr>> fn1;  // exp factor (arg)
    std::optional<std::pair<Fn, Expr>> fn2;  // trig/hyp factor (arg)
    bool ok = true;
};

TermShape shape_of(const Term& term) {
    TermShape s;
    Term rest{term.coeff, {}};
    for (const Factor& f : term.factors) {
        if (atom_is_symbol(f.atom, "t")) {
            s.n = f.exp;
            if (s.n < 0) s.ok = false;
            continue;
        }
        if (f.atom.kind == Atom::Kind::Function && f.exp == 1) {
            Expr arg = Expr::from_terms(TermList(*f.atom.arg));
            if (arg.depends_on("t")) {
                if (f.atom.fn == Fn::Exp && !s.fn1) {
                    s.fn1 = {Fn::Exp, arg};
                    continue;
                }
                if ((f.atom.fn == Fn::Sin || f.atom.fn == Fn::Cos || f.atom.fn == Fn::Sinh ||
                     f.atom.fn == Fn::Cosh) &&
                    !s.fn2) {
                    s.fn2 = {f.atom.fn, arg};
                    continue;
                }
                s.ok = false;
            }
        }
        if (atom_hides_symbol(f.atom, "t")) s.ok = false;
        rest.factors.push_back(f);
    }
    TermList tl;
    tl.push_back(std::move(rest));
    s.rest = Expr::from_terms(std::move(tl));
    return s;
}

// Splits arg = slope * t + offset; nullopt when arg is not affine in t.
std::optional<std::pair<Expr, Expr>> affine_in_t(const Expr& arg) {
    Expr slope = arg.diff("t");
    if (slope.depends_on("t")) return std::nullopt;
    Expr offset = arg - slope * Expr::t();
    if (offset.depends_on("t")) return std::nullopt;
    return std::make_pair(slope, offset);
}

}  // namespace

std::optional<Expr> antiderivative_t(const Expr& e) {
    Expr total;
    for (const Term& term : e.terms()) {
        TermShape s = shape_of(term);
        if (!s.ok) return std::nullopt;

        Expr slope_e, offset_e;  // exponential part
        bool has_exp = false;
        if (s.fn1) {
            auto aff = affine_in_t(s.fn1->second);
            if (!aff) return std::nullopt;
            slope_e = aff->first;
            offset_e = aff->second;
            has_exp = !slope_e.is_zero_literal();
            // constant exponential offset moves into the multiplier
            s.rest = s.rest * Expr::exp(offset_e);
        }

        std::optional<Expr> piece;
        if (!s.fn2) {
            if (has_exp) {
                piece = int_poly_exp(s.n, slope_e);
            } else {
                piece = tpow(s.n + 1) * Expr(Rational(1, s.n + 1));
            }
        } else {
            auto aff = affine_in_t(s.fn2->second);
            if (!aff) return std::nullopt;
            Expr b = aff->first;
            const Expr& w = s.fn2->second;
            if (b.is_zero_literal()) return std::nullopt;  // constructor should have folded this
            switch (s.fn2->first) {
                case Fn::Sin: piece = int_poly_exp_circ(s.n, slope_e, b, w, true); break;
                case Fn::Cos: piece = int_poly_exp_circ(s.n, slope_e, b, w, false); break;
                case Fn::Sinh:
                    if (has_exp) return std::nullopt;  // canonical form fuses hyp with exp
                    piece = int_poly_hyp(s.n, b, w, true);
                    break;
                case Fn::Cosh:
                    if (has_exp) return std::nullopt;
                    piece = int_poly_hyp(s.n, b, w, false);
                    break;
                default: return std::nullopt;
            }
        }
        if (!piece) return std::nullopt;
        total = total + s.rest * *piece;
    }
    return total;
}

}  // namespace ndho

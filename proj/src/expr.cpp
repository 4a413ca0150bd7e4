#include "ndho/expr.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>
#include <utility>

namespace ndho {

const char* fn_name(Fn fn) {
    switch (fn) {
        case Fn::Exp: return "exp";
        case Fn::Sin: return "sin";
        case Fn::Cos: return "cos";
        case Fn::Sinh: return "sinh";
        case Fn::Cosh: return "cosh";
        case Fn::Sqrt: return "sqrt";
    }
    return "?";
}

namespace detail {

namespace {

int symbol_priority(const std::string& name) {
    if (name == "m") return 0;
    if (name == "c") return 1;
    if (name == "k") return 2;
    if (name == "t") return 100;
    if (name == "u") return 101;
    if (name == "u1") return 102;
    if (name == "u2") return 103;
    return 50;  // user symbols, ordered lexicographically among themselves
}

int cmp_ll(long long a, long long b) { return a < b ? -1 : (a > b ? 1 : 0); }

}  // namespace

int cmp(const Atom& a, const Atom& b) {
    auto kind_rank = [](Atom::Kind k) {
        switch (k) {
            case Atom::Kind::Symbol: return 0;
            case Atom::Kind::Function: return 1;
            case Atom::Kind::Composite: return 2;
        }
        return 3;
    };
    if (int c = cmp_ll(kind_rank(a.kind), kind_rank(b.kind))) return c;
    switch (a.kind) {
        case Atom::Kind::Symbol: {
            if (int c = cmp_ll(symbol_priority(a.sym), symbol_priority(b.sym))) return c;
            return a.sym.compare(b.sym) < 0 ? -1 : (a.sym == b.sym ? 0 : 1);
        }
        case Atom::Kind::Function:
            if (int c = cmp_ll(static_cast<int>(a.fn), static_cast<int>(b.fn))) return c;
            return cmp(*a.arg, *b.arg);
        case Atom::Kind::Composite:
            return cmp(*a.arg, *b.arg);
    }
    return 0;
}

int cmp_monomial(const std::vector<Factor>& a, const std::vector<Factor>& b) {
    std::size_t n = std::min(a.size(), b.size());
    for (std::size_t i = 0; i < n; ++i) {
        if (int c = cmp(a[i].atom, b[i].atom)) return c;
        if (a[i].exp != b[i].exp) return a[i].exp > b[i].exp ? -1 : 1;  // higher power first
    }
    if (a.size() == b.size()) return 0;
    return a.size() > b.size() ? -1 : 1;  // constants sort last
}

namespace {

int cmp_term(const Term& a, const Term& b) {
    if (int c = cmp_monomial(a.factors, b.factors)) return c;
    auto o = a.coeff <=> b.coeff;
    return o == std::strong_ordering::less ? -1 : (o == std::strong_ordering::greater ? 1 : 0);
}

}  // namespace

int cmp(const TermList& a, const TermList& b) {
    std::size_t n = std::min(a.size(), b.size());
    for (std::size_t i = 0; i < n; ++i)
        if (int c = cmp_term(a[i], b[i])) return c;
    return cmp_ll(static_cast<long long>(a.size()), static_cast<long long>(b.size()));
}

}  // namespace detail

using detail::Atom;
using detail::Factor;
using detail::Term;
using detail::TermList;
using detail::TermListPtr;

namespace {

const TermListPtr& empty_terms() {
    static const TermListPtr empty = std::make_shared<const TermList>();
    return empty;
}

TermListPtr share(TermList tl) { return std::make_shared<const TermList>(std::move(tl)); }

bool is_trig(Fn f) { return f == Fn::Sin || f == Fn::Cos; }
bool is_hyp(Fn f) { return f == Fn::Sinh || f == Fn::Cosh; }

Expr expr_of(const TermListPtr& tl) { return Expr::from_terms(*tl); }

Expr normalize_term(const Rational& coeff, std::vector<Factor> fs);

// sin/cos and sinh/cosh products rewrite to sums with a single factor.
Expr rewrite_pair(Fn f1, const Expr& x, Fn f2, const Expr& y) {
    Rational half(1, 2);
    if (f1 == Fn::Sin && f2 == Fn::Sin)
        return Expr(half) * Expr::cos(x - y) - Expr(half) * Expr::cos(x + y);
    if (f1 == Fn::Sin && f2 == Fn::Cos)
        return Expr(half) * Expr::sin(x + y) + Expr(half) * Expr::sin(x - y);
    if (f1 == Fn::Cos && f2 == Fn::Sin) return rewrite_pair(Fn::Sin, y, Fn::Cos, x);
    if (f1 == Fn::Cos && f2 == Fn::Cos)
        return Expr(half) * Expr::cos(x - y) + Expr(half) * Expr::cos(x + y);
    if (f1 == Fn::Sinh && f2 == Fn::Sinh)
        return Expr(half) * Expr::cosh(x + y) - Expr(half) * Expr::cosh(x - y);
    if (f1 == Fn::Sinh && f2 == Fn::Cosh)
        return Expr(half) * Expr::sinh(x + y) + Expr(half) * Expr::sinh(x - y);
    if (f1 == Fn::Cosh && f2 == Fn::Sinh) return rewrite_pair(Fn::Sinh, y, Fn::Cosh, x);
    return Expr(half) * Expr::cosh(x - y) + Expr(half) * Expr::cosh(x + y);  // cosh*cosh
}

Expr expand_hyp(Fn f, const Expr& x) {
    Rational half(1, 2);
    Expr pos = Expr(half) * Expr::exp(x);
    Expr neg = Expr(half) * Expr::exp(-x);
    return f == Fn::Sinh ? pos - neg : pos + neg;
}

// Canonicalizes one raw term (unsorted factors, arbitrary exponents) into a
// full expression. Rewrites that leave the single-term world recurse through
// the arithmetic constructors.
Expr normalize_term(const Rational& coeff, std::vector<Factor> fs) {
    if (coeff.is_zero()) return Expr();

    std::sort(fs.begin(), fs.end(),
              [](const Factor& a, const Factor& b) { return detail::cmp(a.atom, b.atom) < 0; });
    std::vector<Factor> merged;
    merged.reserve(fs.size());
    for (auto& f : fs) {
        if (!merged.empty() && detail::cmp(merged.back().atom, f.atom) == 0)
            merged.back().exp += f.exp;
        else
            merged.push_back(std::move(f));
    }
    std::erase_if(merged, [](const Factor& f) { return f.exp == 0; });
    fs = std::move(merged);

    // Merge every exponential factor into a single exp of a combined argument.
    {
        Expr arg_sum;
        bool saw_exp = false;
        std::vector<Factor> rest;
        rest.reserve(fs.size());
        for (auto& f : fs) {
            if (f.atom.kind == Atom::Kind::Function && f.atom.fn == Fn::Exp) {
                saw_exp = true;
                arg_sum = arg_sum + Expr(Rational(f.exp)) * expr_of(f.atom.arg);
            } else {
                rest.push_back(std::move(f));
            }
        }
        fs = std::move(rest);
        if (saw_exp && !arg_sum.is_zero_literal()) {
            Atom e;
            e.kind = Atom::Kind::Function;
            e.fn = Fn::Exp;
            e.arg = share(TermList(arg_sum.terms()));
            // insert keeping sort order
            auto it = std::lower_bound(fs.begin(), fs.end(), e, [](const Factor& f, const Atom& a) {
                return detail::cmp(f.atom, a) < 0;
            });
            fs.insert(it, Factor{std::move(e), 1});
        }
    }

    bool has_exp = std::any_of(fs.begin(), fs.end(), [](const Factor& f) {
        return f.atom.kind == Atom::Kind::Function && f.atom.fn == Fn::Exp;
    });

    // A positive power of an opaque sum expands back into the sum.
    for (std::size_t i = 0; i < fs.size(); ++i) {
        if (fs[i].atom.kind == Atom::Kind::Composite && fs[i].exp > 0) {
            Expr base = expr_of(fs[i].atom.arg);
            long long e = fs[i].exp;
            fs.erase(fs.begin() + static_cast<long>(i));
            return normalize_term(coeff, std::move(fs)) * base.pow(Rational(e));
        }
    }

    // Radical exponents normalize into {0, 1}: sqrt(x)^e = x^floor(e/2) * sqrt(x)^(e mod 2).
    for (std::size_t i = 0; i < fs.size(); ++i) {
        if (fs[i].atom.kind == Atom::Kind::Function && fs[i].atom.fn == Fn::Sqrt &&
            fs[i].exp != 1) {
            long long e = fs[i].exp;
            long long q = e >= 0 ? e / 2 : -((-e + 1) / 2);  // floor(e/2)
            long long r = e - 2 * q;                         // 0 or 1
            Expr base = expr_of(fs[i].atom.arg);
            if (r == 0)
                fs.erase(fs.begin() + static_cast<long>(i));
            else
                fs[i].exp = r;
            return normalize_term(coeff, std::move(fs)) * base.pow(Rational(q));
        }
    }

    // Product-to-sum for pairs in the same trigonometric family.
    auto find_pair = [&](bool hyp_family) -> std::optional<std::pair<std::size_t, std::size_t>> {
        std::optional<std::size_t> first;
        for (std::size_t i = 0; i < fs.size(); ++i) {
            const auto& f = fs[i];
            if (f.atom.kind != Atom::Kind::Function || f.exp < 1) continue;
            bool in_family = hyp_family ? is_hyp(f.atom.fn) : is_trig(f.atom.fn);
            if (!in_family) continue;
            if (f.exp >= 2) return std::make_pair(i, i);
            if (first) return std::make_pair(*first, i);
            first = i;
        }
        return std::nullopt;
    };
    for (bool hyp_family : {false, true}) {
        if (auto pair = find_pair(hyp_family)) {
            auto [i, j] = *pair;
            Fn f1 = fs[i].atom.fn, f2 = fs[j].atom.fn;
            Expr x = expr_of(fs[i].atom.arg), y = expr_of(fs[j].atom.arg);
            fs[i].exp -= 1;
            fs[j].exp -= 1;
            std::erase_if(fs, [](const Factor& f) { return f.exp == 0; });
            return normalize_term(coeff, std::move(fs)) * rewrite_pair(f1, x, f2, y);
        }
    }

    // A hyperbolic factor sharing a term with an exponential merges into it.
    if (has_exp) {
        for (std::size_t i = 0; i < fs.size(); ++i) {
            const auto& f = fs[i];
            if (f.atom.kind == Atom::Kind::Function && is_hyp(f.atom.fn) && f.exp >= 1) {
                Fn fn = f.atom.fn;
                Expr x = expr_of(f.atom.arg);
                fs[i].exp -= 1;
                std::erase_if(fs, [](const Factor& g) { return g.exp == 0; });
                return normalize_term(coeff, std::move(fs)) * expand_hyp(fn, x);
            }
        }
    }

    TermList out;
    out.push_back(Term{coeff, std::move(fs)});
    return Expr::from_terms(std::move(out));
}

Expr sqrt_of_rational(const Rational& r) {
    if (r.is_zero()) return Expr();
    if (r.is_negative()) {
        Atom a;
        a.kind = Atom::Kind::Function;
        a.fn = Fn::Sqrt;
        a.arg = share(TermList(Expr(r).terms()));
        return normalize_term(Rational(1), {Factor{std::move(a), 1}});
    }
    // sqrt(p/q) = sqrt(p*q)/q
    __int128 pq = static_cast<__int128>(r.num()) * r.den();
    if (pq > static_cast<__int128>(1'000'000'000'000LL)) {
        Atom a;
        a.kind = Atom::Kind::Function;
        a.fn = Fn::Sqrt;
        a.arg = share(TermList(Expr(r).terms()));
        return normalize_term(Rational(1), {Factor{std::move(a), 1}});
    }
    long long s = 1, f = 1;
    square_split(static_cast<long long>(pq), s, f);
    Expr scale(Rational(s, r.den()));
    if (f == 1) return scale;
    Atom a;
    a.kind = Atom::Kind::Function;
    a.fn = Fn::Sqrt;
    a.arg = share(TermList(Expr(Rational(f)).terms()));
    return scale * normalize_term(Rational(1), {Factor{std::move(a), 1}});
}

Expr sqrt_expr(const Expr& x) {
    const TermList& tl = x.terms();
    if (tl.empty()) return Expr();
    if (auto r = x.as_rational()) return sqrt_of_rational(*r);
    if (tl.size() == 1) {
        const Term& term = tl[0];
        // sqrt(c * E) with c = sign*p/q: pull out the positive square part of
        // p*q and every exponential factor (always positive); the rest stays
        // under one radical.
        Rational mag = term.coeff.abs();
        __int128 pq = static_cast<__int128>(mag.num()) * mag.den();
        long long s = 1, f = 1;
        if (pq <= static_cast<__int128>(1'000'000'000'000LL))
            square_split(static_cast<long long>(pq), s, f);
        else
            f = 0;  // sentinel: keep coefficient inside
        Rational outside = f == 0 ? Rational(1) : Rational(s, mag.den());
        Rational inside_coeff = f == 0 ? term.coeff : Rational(term.coeff.sign() * f);

        Expr exp_out(Rational(1));
        TermList inner_terms;
        Term inner{inside_coeff, {}};
        for (const auto& fac : term.factors) {
            if (fac.atom.kind == Atom::Kind::Function && fac.atom.fn == Fn::Exp) {
                Expr half_arg = Expr(Rational(fac.exp, 2)) * expr_of(fac.atom.arg);
                exp_out = exp_out * Expr::exp(half_arg);
            } else {
                inner.factors.push_back(fac);
            }
        }
        Expr result = Expr(outside) * exp_out;
        if (inner.coeff.is_one() && inner.factors.empty()) return result;
        inner_terms.push_back(std::move(inner));
        Atom a;
        a.kind = Atom::Kind::Function;
        a.fn = Fn::Sqrt;
        a.arg = share(Expr::from_terms(std::move(inner_terms)).terms());
        return result * normalize_term(Rational(1), {Factor{std::move(a), 1}});
    }
    // Multi-term radicand: normalize content by |leading coefficient|.
    Rational lc = tl[0].coeff.abs();
    Expr base = x * Expr(lc.reciprocal());
    Atom a;
    a.kind = Atom::Kind::Function;
    a.fn = Fn::Sqrt;
    a.arg = share(TermList(base.terms()));
    return sqrt_of_rational(lc) * normalize_term(Rational(1), {Factor{std::move(a), 1}});
}

}  // namespace

Expr::Expr() : terms_(empty_terms()) {}

Expr::Expr(const Rational& r) {
    if (r.is_zero()) {
        terms_ = empty_terms();
    } else {
        TermList tl;
        tl.push_back(Term{r, {}});
        terms_ = share(std::move(tl));
    }
}

Expr Expr::from_terms(TermList terms) {
    std::stable_sort(terms.begin(), terms.end(), [](const Term& a, const Term& b) {
        return detail::cmp_monomial(a.factors, b.factors) < 0;
    });
    TermList out;
    out.reserve(terms.size());
    for (auto& t : terms) {
        if (t.coeff.is_zero()) continue;
        if (!out.empty() && detail::cmp_monomial(out.back().factors, t.factors) == 0) {
            out.back().coeff += t.coeff;
            if (out.back().coeff.is_zero()) out.pop_back();
        } else {
            out.push_back(std::move(t));
        }
    }
    Expr e;
    e.terms_ = out.empty() ? empty_terms() : share(std::move(out));
    return e;
}

Expr Expr::symbol(std::string name) {
    if (name.empty()) throw Error("empty symbol name");
    Atom a;
    a.kind = Atom::Kind::Symbol;
    a.sym = std::move(name);
    return normalize_term(Rational(1), {Factor{std::move(a), 1}});
}

Expr Expr::apply(Fn fn, const Expr& x) {
    switch (fn) {
        case Fn::Exp: return exp(x);
        case Fn::Sin: return sin(x);
        case Fn::Cos: return cos(x);
        case Fn::Sinh: return sinh(x);
        case Fn::Cosh: return cosh(x);
        case Fn::Sqrt: return sqrt(x);
    }
    throw Error("unknown function");
}

Expr Expr::exp(const Expr& x) {
    if (x.is_zero_literal()) return Expr(Rational(1));
    Atom a;
    a.kind = Atom::Kind::Function;
    a.fn = Fn::Exp;
    a.arg = x.terms_;
    return normalize_term(Rational(1), {Factor{std::move(a), 1}});
}

namespace {

// Odd functions pull a negated argument out front; even ones absorb it.
bool leading_negative(const Expr& x) {
    return !x.terms().empty() && x.terms().front().coeff.is_negative();
}

Expr make_fn(Fn fn, const Expr& x) {
    Atom a;
    a.kind = Atom::Kind::Function;
    a.fn = fn;
    a.arg = share(TermList(x.terms()));
    return normalize_term(Rational(1), {Factor{std::move(a), 1}});
}

}  // namespace

Expr Expr::sin(const Expr& x) {
    if (x.is_zero_literal()) return Expr();
    if (leading_negative(x)) return -make_fn(Fn::Sin, -x);
    return make_fn(Fn::Sin, x);
}

Expr Expr::cos(const Expr& x) {
    if (x.is_zero_literal()) return Expr(Rational(1));
    if (leading_negative(x)) return make_fn(Fn::Cos, -x);
    return make_fn(Fn::Cos, x);
}

Expr Expr::sinh(const Expr& x) {
    if (x.is_zero_literal()) return Expr();
    if (leading_negative(x)) return -make_fn(Fn::Sinh, -x);
    return make_fn(Fn::Sinh, x);
}

Expr Expr::cosh(const Expr& x) {
    if (x.is_zero_literal()) return Expr(Rational(1));
    if (leading_negative(x)) return make_fn(Fn::Cosh, -x);
    return make_fn(Fn::Cosh, x);
}

Expr Expr::sqrt(const Expr& x) { return sqrt_expr(x); }

Expr operator+(const Expr& a, const Expr& b) {
    TermList tl;
    tl.reserve(a.terms().size() + b.terms().size());
    tl.insert(tl.end(), a.terms().begin(), a.terms().end());
    tl.insert(tl.end(), b.terms().begin(), b.terms().end());
    return Expr::from_terms(std::move(tl));
}

Expr Expr::operator-() const {
    TermList tl(*terms_);
    for (auto& t : tl) t.coeff = -t.coeff;
    Expr e;
    e.terms_ = share(std::move(tl));
    return e;
}

Expr operator-(const Expr& a, const Expr& b) { return a + (-b); }

Expr operator*(const Expr& a, const Expr& b) {
    Expr acc;
    for (const Term& ta : a.terms()) {
        for (const Term& tb : b.terms()) {
            std::vector<Factor> fs;
            fs.reserve(ta.factors.size() + tb.factors.size());
            fs.insert(fs.end(), ta.factors.begin(), ta.factors.end());
            fs.insert(fs.end(), tb.factors.begin(), tb.factors.end());
            acc = acc + normalize_term(ta.coeff * tb.coeff, std::move(fs));
        }
    }
    return acc;
}

Expr operator/(const Expr& a, const Expr& b) { return a * b.pow(Rational(-1)); }

Expr Expr::pow(const Rational& e) const {
    if (e.den() != 1 && e.den() != 2)
        throw UnsupportedExpressionError("only integer or half-integer powers are representable");
    if (e.den() == 2) {
        long long j = (e.num() - 1) / 2;  // e = j + 1/2 (num is odd)
        return pow(Rational(j)) * sqrt_expr(*this);
    }
    long long n = e.num();
    if (n == 0) return Expr(Rational(1));
    if (terms_->empty()) {
        if (n < 0) throw DomainError("zero raised to a negative power");
        return Expr();
    }
    if (terms_->size() == 1) {
        const Term& t = terms_->front();
        std::vector<Factor> fs = t.factors;
        for (auto& f : fs) {
            __int128 v = static_cast<__int128>(f.exp) * n;
            if (v > 1'000'000 || v < -1'000'000) throw OverflowError("exponent overflow");
            f.exp = static_cast<long long>(v);
        }
        return normalize_term(t.coeff.pow(n), std::move(fs));
    }
    if (n > 0) {
        if (n > 64) throw UnsupportedExpressionError("sum raised to a power larger than 64");
        Expr acc(Rational(1));
        for (long long i = 0; i < n; ++i) acc = acc * *this;
        return acc;
    }
    // Negative power of a sum: opaque composite base, content-normalized so
    // equal values built along different routes agree structurally.
    Rational lc = terms_->front().coeff;
    Expr base = *this * Expr(lc.reciprocal());
    Atom a;
    a.kind = Atom::Kind::Composite;
    a.arg = base.terms_;
    return Expr(lc.pow(n)) * normalize_term(Rational(1), {Factor{std::move(a), n}});
}

bool Expr::operator==(const Expr& o) const { return detail::cmp(*terms_, *o.terms_) == 0; }

bool Expr::is_zero_literal() const { return terms_->empty(); }

bool Expr::is_one_literal() const {
    return terms_->size() == 1 && terms_->front().factors.empty() && terms_->front().coeff.is_one();
}

std::optional<Rational> Expr::as_rational() const {
    if (terms_->empty()) return Rational(0);
    if (terms_->size() == 1 && terms_->front().factors.empty()) return terms_->front().coeff;
    return std::nullopt;
}

std::size_t Expr::term_count() const { return terms_->size(); }

Rational Expr::leading_coeff() const {
    return terms_->empty() ? Rational(0) : terms_->front().coeff;
}

namespace {

bool atom_depends(const Atom& a, std::string_view name);

bool terms_depend(const TermList& tl, std::string_view name) {
    for (const auto& t : tl)
        for (const auto& f : t.factors)
            if (atom_depends(f.atom, name)) return true;
    return false;
}

bool atom_depends(const Atom& a, std::string_view name) {
    switch (a.kind) {
        case Atom::Kind::Symbol: return a.sym == name;
        case Atom::Kind::Function:
        case Atom::Kind::Composite: return terms_depend(*a.arg, name);
    }
    return false;
}

void atom_symbols(const Atom& a, std::set<std::string>& out) {
    switch (a.kind) {
        case Atom::Kind::Symbol: out.insert(a.sym); break;
        case Atom::Kind::Function:
        case Atom::Kind::Composite:
            for (const auto& t : *a.arg)
                for (const auto& f : t.factors) atom_symbols(f.atom, out);
            break;
    }
}

}  // namespace

bool Expr::depends_on(std::string_view name) const { return terms_depend(*terms_, name); }

std::set<std::string> Expr::free_symbols() const {
    std::set<std::string> out;
    for (const auto& t : *terms_)
        for (const auto& f : t.factors) atom_symbols(f.atom, out);
    return out;
}

Expr Expr::diff(std::string_view name) const {
    Expr total;
    for (const Term& term : *terms_) {
        for (std::size_t i = 0; i < term.factors.size(); ++i) {
            const Factor& f = term.factors[i];
            Expr datom;
            Expr arg = f.atom.kind == Atom::Kind::Symbol ? Expr() : expr_of(f.atom.arg);
            switch (f.atom.kind) {
                case Atom::Kind::Symbol:
                    if (f.atom.sym != name) continue;
                    datom = Expr(Rational(1));
                    break;
                case Atom::Kind::Function: {
                    Expr darg = arg.diff(name);
                    if (darg.is_zero_literal()) continue;
                    switch (f.atom.fn) {
                        case Fn::Exp: datom = darg * Expr::exp(arg); break;
                        case Fn::Sin: datom = darg * Expr::cos(arg); break;
                        case Fn::Cos: datom = -(darg * Expr::sin(arg)); break;
                        case Fn::Sinh: datom = darg * Expr::cosh(arg); break;
                        case Fn::Cosh: datom = darg * Expr::sinh(arg); break;
                        case Fn::Sqrt:
                            datom = Expr(Rational(1, 2)) * darg * Expr::sqrt(arg).pow(Rational(-1));
                            break;
                    }
                    break;
                }
                case Atom::Kind::Composite: {
                    Expr darg = arg.diff(name);
                    if (darg.is_zero_literal()) continue;
                    datom = darg;
                    break;
                }
            }
            // d(A^n)/dx = n A^(n-1) dA; remaining factors ride along.
            std::vector<Factor> rest;
            rest.reserve(term.factors.size());
            for (std::size_t j = 0; j < term.factors.size(); ++j) {
                if (j == i) continue;
                rest.push_back(term.factors[j]);
            }
            Expr rest_expr = normalize_term(term.coeff * Rational(f.exp), std::move(rest));
            Expr base_pow(Rational(1));
            if (f.exp != 1) {
                Atom a = f.atom;
                base_pow = normalize_term(Rational(1), {Factor{std::move(a), f.exp - 1}});
            }
            total = total + rest_expr * base_pow * datom;
        }
    }
    return total;
}

Expr Expr::diff(std::string_view name, int order) const {
    Expr e = *this;
    for (int i = 0; i < order; ++i) e = e.diff(name);
    return e;
}

Expr Expr::substitute(const std::map<std::string, Expr>& bindings) const {
    Expr total;
    for (const Term& term : *terms_) {
        Expr acc{term.coeff};
        for (const Factor& f : term.factors) {
            Expr base;
            switch (f.atom.kind) {
                case Atom::Kind::Symbol: {
                    auto it = bindings.find(f.atom.sym);
                    base = it != bindings.end() ? it->second : Expr::symbol(f.atom.sym);
                    break;
                }
                case Atom::Kind::Function:
                    base = Expr::apply(f.atom.fn, expr_of(f.atom.arg).substitute(bindings));
                    break;
                case Atom::Kind::Composite:
                    base = expr_of(f.atom.arg).substitute(bindings);
                    break;
            }
            acc = acc * base.pow(Rational(f.exp));
        }
        total = total + acc;
    }
    return total;
}

namespace {

double powi(double base, long long e) {
    if (e < 0) {
        if (base == 0.0) throw DomainError("evaluation: zero to a negative power");
        return 1.0 / powi(base, -e);
    }
    double acc = 1.0, b = base;
    while (e > 0) {
        if (e & 1) acc *= b;
        b *= b;
        e >>= 1;
    }
    return acc;
}

double eval_terms(const TermList& tl, const Assignment& a, bool magnitude);

double eval_atom(const Atom& atom, const Assignment& a) {
    switch (atom.kind) {
        case Atom::Kind::Symbol: {
            auto it = a.find(atom.sym);
            if (it == a.end()) throw UnboundSymbolError(atom.sym);
            return it->second;
        }
        case Atom::Kind::Function: {
            double v = eval_terms(*atom.arg, a, false);
            switch (atom.fn) {
                case Fn::Exp: return std::exp(v);
                case Fn::Sin: return std::sin(v);
                case Fn::Cos: return std::cos(v);
                case Fn::Sinh: return std::sinh(v);
                case Fn::Cosh: return std::cosh(v);
                case Fn::Sqrt:
                    if (v < 0.0) throw DomainError("evaluation: square root of a negative value");
                    return std::sqrt(v);
            }
            throw Error("unknown function");
        }
        case Atom::Kind::Composite: return eval_terms(*atom.arg, a, false);
    }
    throw Error("unknown atom");
}

double eval_terms(const TermList& tl, const Assignment& a, bool magnitude) {
    double sum = 0.0;
    for (const Term& t : tl) {
        double v = t.coeff.to_double();
        for (const Factor& f : t.factors) v *= powi(eval_atom(f.atom, a), f.exp);
        sum += magnitude ? std::abs(v) : v;
    }
    return sum;
}

}  // namespace

double Expr::eval(const Assignment& a) const { return eval_terms(*terms_, a, false); }

double Expr::eval_magnitude(const Assignment& a) const { return eval_terms(*terms_, a, true); }

namespace {

std::string terms_str(const TermList& tl);

std::string atom_str(const Atom& a) {
    switch (a.kind) {
        case Atom::Kind::Symbol: return a.sym;
        case Atom::Kind::Function:
            return std::string(fn_name(a.fn)) + "(" + terms_str(*a.arg) + ")";
        case Atom::Kind::Composite: return "(" + terms_str(*a.arg) + ")";
    }
    return "?";
}

std::string factor_str(const Atom& a, long long exp) {
    std::string s = atom_str(a);
    if (exp != 1) s += "^" + std::to_string(exp);
    return s;
}

std::string term_str(const Term& t) {
    Rational mag = t.coeff.abs();
    std::vector<std::string> num, den;
    if (mag.num() != 1 || t.factors.empty()) num.push_back(std::to_string(mag.num()));
    if (mag.den() != 1) den.push_back(std::to_string(mag.den()));
    for (const Factor& f : t.factors) {
        if (f.exp > 0)
            num.push_back(factor_str(f.atom, f.exp));
        else
            den.push_back(factor_str(f.atom, -f.exp));
    }
    std::string s;
    if (num.empty()) {
        s = "1";
    } else {
        for (std::size_t i = 0; i < num.size(); ++i) s += (i ? "*" : "") + num[i];
    }
    if (!den.empty()) {
        if (den.size() == 1) {
            s += "/" + den[0];
        } else {
            s += "/(";
            for (std::size_t i = 0; i < den.size(); ++i) s += (i ? "*" : "") + den[i];
            s += ")";
        }
    }
    return s;
}

std::string terms_str(const TermList& tl) {
    if (tl.empty()) return "0";
    std::string s;
    for (std::size_t i = 0; i < tl.size(); ++i) {
        bool neg = tl[i].coeff.is_negative();
        if (i == 0)
            s += neg ? "-" : "";
        else
            s += neg ? " - " : " + ";
        s += term_str(tl[i]);
    }
    return s;
}

}  // namespace

std::string Expr::str() const { return terms_str(*terms_); }

bool is_zero(const Expr& e, const ZeroTestOptions& opt) {
    if (e.is_zero_literal()) return true;
    auto syms = e.free_symbols();
    std::mt19937 rng(opt.seed);
    std::uniform_real_distribution<double> mag(0.1, 2.0);
    std::uniform_int_distribution<int> flip(0, 1);

    if (syms.empty()) {
        double v = e.eval({});
        double scale = e.eval_magnitude({});
        return std::abs(v) < opt.tol * (1.0 + scale);
    }

    for (int p = 0; p < opt.points; ++p) {
        int attempts = 0;
        for (;;) {
            Assignment a;
            for (const auto& s : syms) a[s] = (flip(rng) ? 1.0 : -1.0) * mag(rng);
            try {
                double v = e.eval(a);
                double scale = e.eval_magnitude(a);
                if (!(std::abs(v) < opt.tol * (1.0 + scale))) return false;
                break;
            } catch (const DomainError&) {
                if (++attempts > opt.max_redraws)
                    throw DomainError("zero test: no valid sample point after bounded redraws");
            }
        }
    }
    return true;
}

}  // namespace ndho

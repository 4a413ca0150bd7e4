#pragma once

#include <map>
#include <string>

#include "ndho/expr.hpp"

namespace ndho {

// Oscillator parameters as exact rationals: m u'' + c u' + k u = 0.
struct Params {
    Rational m, c, k;

    Params(Rational m_, Rational c_, Rational k_) : m(m_), c(c_), k(k_) {
        if (!(m > Rational(0))) throw Error("mass m must be positive");
        if (!(k > Rational(0))) throw Error("spring constant k must be positive");
        if (c < Rational(0)) throw Error("damping coefficient c must be non-negative");
    }

    Rational discriminant() const { return c * c - Rational(4) * k * m; }

    std::map<std::string, Expr> binding() const {
        return {{"m", Expr(m)}, {"c", Expr(c)}, {"k", Expr(k)}};
    }

    Assignment numeric() const {
        return {{"m", m.to_double()}, {"c", c.to_double()}, {"k", k.to_double()}};
    }
};

enum class Damping { Over, Under, Critical };

struct DampingRegime {
    Damping kind;
    Rational discriminant;  // c^2 - 4 k m, exact

    const char* name() const {
        switch (kind) {
            case Damping::Over: return "over-damped";
            case Damping::Under: return "under-damped";
            case Damping::Critical: return "critical";
        }
        return "?";
    }
};

// Exact sign decision on c^2 - 4km.
DampingRegime classify(const Params& p);

// Classification from a discriminant expression; throws RegimeResolutionError
// when the expression is not an exact rational constant.
DampingRegime classify_discriminant(const Expr& disc);

// sqrt(|c^2 - 4km|) as an exact expression (a radical atom when irrational);
// literal zero in the critical regime.
Expr regime_radical(const Params& p);

// sqrt(k/m) exactly; rational in the critical regime since c^2 = 4km.
Expr natural_frequency(const Params& p);

bool is_zero(const Expr& e, const Params& p, const ZeroTestOptions& opt = {});

}  // namespace ndho

#include "ndho/params.hpp"

namespace ndho {

DampingRegime classify(const Params& p) {
    Rational d = p.discriminant();
    if (d > Rational(0)) return {Damping::Over, d};
    if (d < Rational(0)) return {Damping::Under, d};
    return {Damping::Critical, d};
}

DampingRegime classify_discriminant(const Expr& disc) {
    auto r = disc.as_rational();
    if (!r)
        throw RegimeResolutionError(
            "cannot decide the sign of c^2 - 4km: discriminant is not an exact rational");
    if (*r > Rational(0)) return {Damping::Over, *r};
    if (*r < Rational(0)) return {Damping::Under, *r};
    return {Damping::Critical, *r};
}

Expr regime_radical(const Params& p) {
    Rational d = p.discriminant();
    return Expr::sqrt(Expr(d.is_negative() ? -d : d));
}

Expr natural_frequency(const Params& p) { return Expr::sqrt(Expr(p.k / p.m)); }

bool is_zero(const Expr& e, const Params& p, const ZeroTestOptions& opt) {
    return is_zero(e.substitute(p.binding()), opt);
}

}  // namespace ndho

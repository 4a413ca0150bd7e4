#include "ndho/variational.hpp"

#include "ndho/calculus.hpp"

namespace ndho {

Expr total_derivative(const Expr& e) {
    if (e.depends_on("u2"))
        throw UnsupportedExpressionError("total derivative input already contains u2");
    return e.diff("t") + Expr::u1() * e.diff("u") + Expr::u2() * e.diff("u1");
}

Expr total_derivative(const Expr& e, const EquationOfMotion& eom) {
    return e.diff("t") + Expr::u1() * e.diff("u") + eom.w * e.diff("u1");
}

EquationOfMotion euler_lagrange(const Lagrangian& L) {
    // EL = A(t,u,u1) u'' + rest with A = d2L/du1^2; solve A w = -rest.
    Expr el = total_derivative(L.expr.diff("u1")) - L.expr.diff("u");
    auto by_u2 = collect_powers(el, "u2");
    if (by_u2.size() > 2 || (by_u2.size() == 2 && by_u2.rbegin()->first != 1))
        throw UnsupportedExpressionError("Euler-Lagrange expression is not linear in u''");
    Expr a = by_u2.count(1) ? by_u2.at(1) : Expr();
    Expr rest = by_u2.count(0) ? by_u2.at(0) : Expr();
    if (is_zero(a)) throw DegenerateLagrangianError("Lagrangian is degenerate: d2L/du1^2 vanishes");
    if (auto w = divide_exact(-rest, a)) return {*w};
    return {-rest * a.pow(Rational(-1))};
}

ProlongedField prolong(const VectorField& Z) {
    Expr u1 = Expr::u1();
    Expr eta1 = Z.eta.diff("t") + (Z.eta.diff("u") - Z.xi.diff("t")) * u1 -
                Z.xi.diff("u") * u1 * u1;
    return {Z, eta1};
}

Expr apply_field(const VectorField& Z, const Expr& f) {
    return Z.xi * f.diff("t") + Z.eta * f.diff("u");
}

Lagrangian bateman_lagrangian() {
    Expr e = Expr::exp(Expr::c() * Expr::t() / Expr::m());
    Expr u = Expr::u(), u1 = Expr::u1();
    return Lagrangian(Expr(Rational(1, 2)) * e * (Expr::m() * u1 * u1 - Expr::k() * u * u));
}

Lagrangian alternative_lagrangian() {
    Expr m = Expr::m(), c = Expr::c(), k = Expr::k();
    Expr e = Expr::exp(c * Expr::t() / m);
    Expr u = Expr::u(), u1 = Expr::u1();
    Expr quad = Expr(2) * m * m * u1 * u1 + Expr(2) * c * m * u * u1 +
                (c * c - Expr(2) * k * m) * u * u;
    return Lagrangian(e / (Expr(4) * m * m) * quad);
}

}  // namespace ndho

#pragma once

#include <optional>

#include "ndho/expr.hpp"

namespace ndho {

// First-order Lagrangian L(t, u, u1). Regularity (d^2L/du1^2 not identically
// zero) is enforced so the Euler-Lagrange equation is genuinely second order.
struct Lagrangian {
    Expr expr;

    explicit Lagrangian(Expr e) : expr(std::move(e)) {
        for (const char* v : {"u2"})
            if (expr.depends_on(v)) throw Error("a Lagrangian may depend on t, u, u1 only");
        Expr l11 = expr.diff("u1").diff("u1");
        if (is_zero(l11))
            throw DegenerateLagrangianError("Lagrangian is degenerate: d2L/du1^2 vanishes");
    }
};

// Equation of motion in solved form u'' = w(t, u, u').
struct EquationOfMotion {
    Expr w;
};

// Point vector field xi(t,u) d/dt + eta(t,u) d/du.
struct VectorField {
    Expr xi, eta;

    VectorField() = default;
    VectorField(Expr xi_, Expr eta_) : xi(std::move(xi_)), eta(std::move(eta_)) {
        for (const char* v : {"u1", "u2"})
            if (xi.depends_on(v) || eta.depends_on(v))
                throw Error("point vector field components must depend on (t, u) only");
    }

    bool operator==(const VectorField& o) const { return xi == o.xi && eta == o.eta; }
};

inline VectorField operator+(const VectorField& a, const VectorField& b) {
    return {a.xi + b.xi, a.eta + b.eta};
}
inline VectorField operator*(const Expr& s, const VectorField& z) {
    return {s * z.xi, s * z.eta};
}
inline VectorField operator-(const VectorField& z) { return {-z.xi, -z.eta}; }

// Field prolonged to the u' coordinate:
// eta1 = eta_t + (eta_u - xi_t) u' - xi_u u'^2.
struct ProlongedField {
    VectorField base;
    Expr eta1;
};

// Total time derivative along solutions. Without an equation of motion the
// formal second-derivative symbol u2 stands in for u''; with one supplied,
// w(t,u,u1) is substituted ("on-shell").
Expr total_derivative(const Expr& e);
Expr total_derivative(const Expr& e, const EquationOfMotion& eom);

// Solves d/dt(dL/du1) - dL/du = 0 for u''.
EquationOfMotion euler_lagrange(const Lagrangian& L);

ProlongedField prolong(const VectorField& Z);

// The action of Z = xi d/dt + eta d/du on a function of (t, u).
Expr apply_field(const VectorField& Z, const Expr& f);

// Standard Lagrangians for m u'' + c u' + k u = 0 with symbolic parameters:
// the exponential-in-time quadratic form and its gauge-equivalent variant.
Lagrangian bateman_lagrangian();
Lagrangian alternative_lagrangian();

}  // namespace ndho

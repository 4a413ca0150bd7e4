#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ndho/params.hpp"
#include "ndho/variational.hpp"

namespace ndho {

// Gauge term B(t, u) on the right-hand side of the symmetry condition
// Z^[1](L) + D(xi) L = D(B).
struct GaugeFunction {
    Expr B;

    GaugeFunction() = default;
    explicit GaugeFunction(Expr b) : B(std::move(b)) {
        for (const char* v : {"u1", "u2"})
            if (B.depends_on(v)) throw Error("a gauge function depends on (t, u) only");
    }
};

struct NoetherSymmetry {
    VectorField field;
    GaugeFunction gauge;
};

// Structured template for the determining equations. For a Lagrangian that
// is quadratic in u1 with a u1^2 coefficient free of u, the u1^3 and u1^2
// coefficients of the symmetry-condition residual force xi_u = 0 and
// eta_uu = 0, so this shape is complete for the supported class:
//
//   xi = alpha(t),  eta = beta(t) u + gamma(t),
//   B  = delta(t) u^2 + eps(t) u + zeta(t).
//
// Unknown functions appear as jet symbols (alpha, dalpha, ...) with the
// first time derivative spelled with a 'd' prefix.
struct Ansatz {
    static const std::vector<std::string>& unknown_functions();
    static std::string derivative_symbol(const std::string& fn);

    Expr xi() const;
    Expr eta() const;
    Expr gauge() const;
};

// Total time derivative that threads through jet symbols: unknown functions
// of t differentiate to their 'd'-prefixed counterparts.
Expr jet_total_derivative(const Expr& e, const Ansatz& ansatz = {});

struct CoefficientEquation {
    long long u1_power = 0;
    long long u_power = 0;
    Expr lhs;  // vanishes identically in t for a symmetry
};

// Expands the symmetry-condition residual for the ansatz and collects the
// coefficients of u1^2, u1*u, u1, u^2, u, 1. Each nonzero coefficient is an
// ODE in the unknown functions of t. Throws AnsatzMismatchError when the
// residual has monomials outside that set (Lagrangian outside the class).
std::vector<CoefficientEquation> determining_equations(const Lagrangian& L,
                                                       const Ansatz& ansatz = {});

// Left-minus-right side of the symmetry condition.
Expr noether_residual(const VectorField& Z, const GaugeFunction& B, const Lagrangian& L);

bool check_noether(const VectorField& Z, const GaugeFunction& B, const Lagrangian& L,
                   const ZeroTestOptions& opt = {});

// Recovers the gauge function for Z when the residual R = Z^[1](L) + D(xi) L
// is a total derivative: R must be linear in u1 with an exact u-part.
// Returns the B with B(0,0) = 0, or nullopt when Z is not a symmetry of L.
std::optional<GaugeFunction> solve_gauge(const VectorField& Z, const Lagrangian& L);

// Solves the determining system for the damped-oscillator family at exact
// rational parameters via the characteristic roots (-c +- sqrt(c^2-4km))/2m.
// Returns 5 independent symmetries in the catalog order for the regime:
// hyperbolic, trigonometric, or polynomial basis according to the sign of
// the discriminant; complex pairs are returned as their real splittings.
std::vector<NoetherSymmetry> solve_dho(const Lagrangian& L, const Params& p);

// Basis names in catalog order ("G4"/"G5" for the real under-damped pair).
std::vector<std::string> generator_names(const DampingRegime& regime);

// Numeric independence rank of fields sampled at random (t, u) points.
int span_rank(const std::vector<VectorField>& fields, unsigned seed = 7u);

// True when two generator sets span the same space pointwise.
bool same_span(const std::vector<VectorField>& a, const std::vector<VectorField>& b);

}  // namespace ndho

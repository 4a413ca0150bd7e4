#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "ndho/noether.hpp"

namespace ndho {

// Conserved quantity I(t, u, u1) with D(I) = 0 along solutions.
struct FirstIntegral {
    Expr expr;
    std::string provenance;  // name of the generator it came from, if any
};

struct InitialCondition {
    double t0 = 0.0, u0 = 0.0, v0 = 0.0;
};

// Fixed-step RK4 samples of the oscillator flow.
struct Trajectory {
    std::vector<double> t, u, u1;
    double h = 0.0;
    Params params;
    InitialCondition ic;
};

// I = xi L + (eta - u1 xi) dL/du1 - B. Requires the symmetry condition to
// hold (NotASymmetryError otherwise); the result is conserved on-shell by
// construction and that is re-verified before returning.
FirstIntegral first_integral(const NoetherSymmetry& ns, const Lagrangian& L);

bool verify_symbolic(const FirstIntegral& I, const EquationOfMotion& eom,
                     const ZeroTestOptions& opt = {});

Trajectory integrate_rk4(const Params& p, const InitialCondition& ic, double t_end, double h,
                         long long max_steps = 20'000'000);

// max_i |I(t_i) - I(t_0)| / (|I(t_0)| + eps_abs)
double conservation_drift(const FirstIntegral& I, const Trajectory& traj, double eps_abs = 1e-12);

// CSV with header t,u,u1 at full double precision.
std::string trajectory_csv(const Trajectory& traj);

struct ClosedFormSolution {
    Expr u_of_t;  // in t and the two constant symbols
    DampingRegime regime;
    std::array<std::string, 2> constants;
};

// Solves the pair {I_a = const_a, I_b = const_b} as a linear system in
// (u, u1) and eliminates u1. Both integrals must be affine in (u, u1) with
// an everywhere-invertible coefficient matrix.
ClosedFormSolution reconstruct_solution(const FirstIntegral& a, const FirstIntegral& b,
                                        const DampingRegime& regime,
                                        const std::array<std::string, 2>& constants = {"C1",
                                                                                       "C2"});

// Scale r with a == r * b (optionally plus a constant); nullopt when the two
// expressions are not related that way. Used wherever the generator scaling
// convention leaves integrals defined up to a constant multiple.
std::optional<Expr> proportionality(const Expr& a, const Expr& b,
                                    bool allow_additive_constant = false);

// The (u0, v0) suite spanning the solution space: (1,0), (0,1), (1,-1) at t0=0.
const std::vector<InitialCondition>& standard_initial_conditions();

}  // namespace ndho

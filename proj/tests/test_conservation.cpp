#include <doctest.h>

#include <cmath>

#include "ndho/conservation.hpp"
#include "ndho/parse.hpp"
#include "ndho/smallmat.hpp"
#include "testutil.hpp"

using namespace ndho;

namespace {

Expr P(const std::string& s) { return parse_expr(s); }

NoetherSymmetry symmetry_of(const VectorField& z, const Lagrangian& L) {
    auto g = solve_gauge(z, L);
    REQUIRE(g.has_value());
    return {z, *g};
}

}  // namespace

TEST_SUITE("conservation") {

TEST_CASE("first integral from time translation of the autonomous oscillator") {
    Lagrangian L(P("1/2*u1^2 - 1/2*u^2"));
    NoetherSymmetry ns{VectorField(Expr(1), Expr()), GaugeFunction(Expr())};
    FirstIntegral I = first_integral(ns, L);
    CHECK(I.expr == P("-1/2*u1^2 - 1/2*u^2"));
}

TEST_CASE("first integral of X1 is proportional to the published I1") {
    Lagrangian L = bateman_lagrangian();
    VectorField x1(Expr(1), P("-c*u/(2*m)"));
    FirstIntegral derived = first_integral(symmetry_of(x1, L), L);
    Expr printed = P("-exp(c*t/m)*(m*u1^2 + c*u*u1 + k*u^2)");
    auto ratio = proportionality(printed, derived.expr);
    REQUIRE(ratio.has_value());
    CHECK(*ratio == Expr(2));
}

TEST_CASE("real translation pair reproduces the published under-damped integrals") {
    Params p(1, 1, 1);
    Lagrangian L(bateman_lagrangian().expr.substitute(p.binding()));
    Expr s3 = Expr::sqrt(Expr(3)), t = Expr::t(), u = Expr::u(), u1 = Expr::u1();
    Expr half(Rational(1, 2));
    Expr theta = half * s3 * t;

    VectorField g4(Expr(), Expr::exp(-half * t) * Expr::cos(theta));
    FirstIntegral i4 = first_integral(symmetry_of(g4, L), L);
    Expr printed_i4 =
        Expr::exp(half * t) * ((u1 + half * u) * Expr::cos(theta) + half * s3 * u * Expr::sin(theta));
    CHECK(i4.expr == printed_i4);

    VectorField g5(Expr(), Expr::exp(-half * t) * Expr::sin(theta));
    FirstIntegral i5 = first_integral(symmetry_of(g5, L), L);
    Expr printed_i5 =
        Expr::exp(half * t) * ((u1 + half * u) * Expr::sin(theta) - half * s3 * u * Expr::cos(theta));
    CHECK(i5.expr == printed_i5);
}

TEST_CASE("first_integral requires an actual symmetry") {
    Lagrangian L = bateman_lagrangian();
    NoetherSymmetry bogus{VectorField(Expr(), Expr::u()), GaugeFunction(Expr())};
    CHECK_THROWS_AS(first_integral(bogus, L), NotASymmetryError);
}

TEST_CASE("verify_symbolic") {
    // critical published I5 at (1,2,1)
    Params p(1, 2, 1);
    EquationOfMotion eom{P("-2*u1 - u")};
    Expr i5 = P("1/4*u^2*exp(2*t) + t/4*(2*u*(t*u1 - u) + t*u1^2 + t*u^2 - 2*u*u1)*exp(2*t)");
    CHECK(verify_symbolic({i5, ""}, eom));

    CHECK(!verify_symbolic({Expr::u(), ""}, eom));

    // over-damped published I2 at (1,3,2) with the verbatim prefactor
    EquationOfMotion over{P("-3*u1 - 2*u")};
    Expr disc = P("c^2 - 4*k*m").substitute({{"c", Expr(3)}, {"k", Expr(2)}, {"m", Expr(1)}});
    REQUIRE(disc == Expr(1));
    Expr e3t = P("exp(3*t)");
    Expr quad = P("2*u1^2 + 2*(3*u*u1 - 2*u^2) + 9*u^2");
    Expr odd = Expr(9) * Expr::sqrt(disc) - disc.pow(Rational(3, 2));
    Expr i2 = (Expr(-4) * Expr(2) * e3t * quad * Expr::sinh(Expr::t()) +
               e3t * (Expr(3) * P("u^2") + Expr(2) * P("u*u1")) * odd * Expr::cosh(Expr::t())) /
              Expr(32);
    CHECK(verify_symbolic({i2, ""}, over));
}

TEST_CASE("rk4 against closed forms") {
    // undamped cosine over one period
    Trajectory tu = integrate_rk4(Params(1, 0, 1), {0.0, 1.0, 0.0}, 2.0 * M_PI, 1e-3);
    double tf = tu.t.back();
    CHECK(std::abs(tu.u.back() - std::cos(tf)) < 1e-9);
    // the grid cannot land exactly on 2*pi with h = 1e-3; the quantization
    // dominates the comparison against u = 1
    CHECK(std::abs(tu.u.back() - 1.0) < 2e-8);

    // critical: u = (1 + t) e^{-t}
    Trajectory tc = integrate_rk4(Params(1, 2, 1), {0.0, 1.0, 0.0}, 5.0, 1e-3);
    CHECK(tc.t.back() == doctest::Approx(5.0));
    CHECK(std::abs(tc.u.back() - 6.0 * std::exp(-5.0)) < 1e-8);

    // under-damped: u = (2/sqrt(3)) e^{-t/2} sin(sqrt(3) t / 2) for ic (0,0,1)
    Trajectory td = integrate_rk4(Params(1, 1, 1), {0.0, 0.0, 1.0}, 10.0, 1e-3);
    for (std::size_t i = 0; i < td.t.size(); i += 500) {
        double t = td.t[i];
        double exact = 2.0 / std::sqrt(3.0) * std::exp(-t / 2) * std::sin(std::sqrt(3.0) * t / 2);
        CHECK(std::abs(td.u[i] - exact) < 1e-7);
    }

    CHECK_THROWS_AS(integrate_rk4(Params(1, 1, 1), {0.0, 1.0, 0.0}, 10.0, 1e-3, 1000),
                    StepOverflowError);
    CHECK_THROWS_AS(integrate_rk4(Params(1, 1, 1), {0.0, 1.0, 0.0}, -1.0, 1e-3), Error);
}

TEST_CASE("fixed-step grid and csv export") {
    Trajectory traj = integrate_rk4(Params(1, 2, 1), {0.0, 1.0, 0.0}, 0.01, 1e-3);
    REQUIRE(traj.t.size() == 11);
    for (std::size_t i = 1; i < traj.t.size(); ++i)
        CHECK(traj.t[i] - traj.t[i - 1] == doctest::Approx(1e-3).epsilon(1e-12));

    std::string csv = trajectory_csv(traj);
    CHECK(csv.substr(0, 7) == "t,u,u1\n");
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 12);
}

TEST_CASE("conservation drift") {
    // published I1 at (1,3,2)
    Expr i1 = P("-exp(3*t)*(u1^2 + 3*u*u1 + 2*u^2)");
    Trajectory traj = integrate_rk4(Params(1, 3, 2), {0.0, 1.0, 0.0}, 10.0, 1e-3);
    CHECK(conservation_drift({i1, ""}, traj) < 1e-8);

    // single-sample trajectory: vacuously zero
    Trajectory single{{0.0}, {1.0}, {0.0}, 1e-3, Params(1, 1, 1), {0.0, 1.0, 0.0}};
    CHECK(conservation_drift({Expr::t(), ""}, single) == 0.0);

    // under-damped translation integral at (1,1,1)
    Params p(1, 1, 1);
    Lagrangian L(bateman_lagrangian().expr.substitute(p.binding()));
    Expr half(Rational(1, 2));
    VectorField g4(Expr(), Expr::exp(-half * Expr::t()) *
                               Expr::cos(half * Expr::sqrt(Expr(3)) * Expr::t()));
    FirstIntegral i4 = first_integral(symmetry_of(g4, L), L);
    Trajectory tu = integrate_rk4(p, {0.0, 0.0, 1.0}, 10.0, 1e-3);
    CHECK(conservation_drift(i4, tu) < 1e-8);
}

TEST_CASE("euler-lagrange equation holds along numeric trajectories") {
    // d/dt(dL/du1) - dL/du along RK4 samples, with a five-point stencil for
    // the time derivative of the momentum
    for (Params p : {Params(1, 3, 2), Params(1, 1, 1), Params(1, 2, 1)}) {
        Lagrangian L(bateman_lagrangian().expr.substitute(p.binding()));
        Expr momentum = L.expr.diff("u1");
        Expr force = L.expr.diff("u");
        Trajectory traj = integrate_rk4(p, {0.0, 1.0, -1.0}, 5.0, 1e-3);

        Assignment a = p.numeric();
        auto eval_at = [&](const Expr& e, std::size_t i) {
            a["t"] = traj.t[i];
            a["u"] = traj.u[i];
            a["u1"] = traj.u1[i];
            return e.eval(a);
        };
        double h = traj.h;
        double worst = 0.0;
        for (std::size_t i = 2; i + 2 < traj.t.size(); i += 50) {
            double dp = (-eval_at(momentum, i + 2) + 8 * eval_at(momentum, i + 1) -
                         8 * eval_at(momentum, i - 1) + eval_at(momentum, i - 2)) /
                        (12 * h);
            worst = std::max(worst, std::abs(dp - eval_at(force, i)));
        }
        CHECK(worst < 1e-9);
    }
}

TEST_CASE("reconstruct_solution: critical pair gives the published closed form") {
    Params p(1, 2, 1);
    FirstIntegral i1{P("exp(t)*(u + u1)"), "X1"};
    FirstIntegral i2{P("exp(t)*(t*u + t*u1 - u)"), "X2"};
    ClosedFormSolution sol = reconstruct_solution(i1, i2, classify(p));
    Expr expected = parse_expr("exp(-t)*(C1*t - C2)", {"C1", "C2"});
    CHECK(sol.u_of_t == expected);
}

TEST_CASE("reconstruct_solution: under-damped pair matches the published form") {
    Params p(1, 1, 1);
    Lagrangian L(bateman_lagrangian().expr.substitute(p.binding()));
    Expr half(Rational(1, 2)), t = Expr::t();
    Expr s3 = Expr::sqrt(Expr(3));
    Expr theta = half * s3 * t;
    VectorField g4(Expr(), Expr::exp(-half * t) * Expr::cos(theta));
    VectorField g5(Expr(), Expr::exp(-half * t) * Expr::sin(theta));
    FirstIntegral i4 = first_integral(symmetry_of(g4, L), L);
    FirstIntegral i5 = first_integral(symmetry_of(g5, L), L);

    ClosedFormSolution sol = reconstruct_solution(i4, i5, classify(p));

    // published template with free constants, then the derived map C -> 2C
    Expr c1 = Expr::symbol("C1"), c2 = Expr::symbol("C2");
    Expr published = Expr::exp(-half * t) * (c1 * Expr::sin(theta) - c2 * Expr::cos(theta)) / s3;
    Expr mapped = published.substitute({{"C1", Expr(2) * c1}, {"C2", Expr(2) * c2}});
    CHECK(sol.u_of_t == mapped);
}

TEST_CASE("reconstruct_solution: numeric agreement after fitting constants") {
    for (Params p : {Params(1, 3, 2), Params(1, 1, 1), Params(1, 2, 1)}) {
        Lagrangian L(bateman_lagrangian().expr.substitute(p.binding()));
        auto syms = solve_dho(bateman_lagrangian(), p);
        // the two u-translation generators sit at fixed positions per regime
        std::size_t ia = classify(p).kind == Damping::Critical ? 0 : 3;
        std::size_t ib = classify(p).kind == Damping::Critical ? 1 : 4;
        FirstIntegral a = first_integral(syms[ia], L);
        FirstIntegral b = first_integral(syms[ib], L);
        ClosedFormSolution sol = reconstruct_solution(a, b, classify(p));

        Trajectory traj = integrate_rk4(p, {0.0, 1.0, -1.0}, 10.0, 1e-3);
        Assignment at = p.numeric();
        at["t"] = 0.0;
        at["u"] = 1.0;
        at["u1"] = -1.0;
        double c1 = a.expr.eval(at), c2 = b.expr.eval(at);

        Assignment pt = p.numeric();
        pt["C1"] = c1;
        pt["C2"] = c2;
        double worst = 0.0;
        for (std::size_t i = 0; i < traj.t.size(); i += 10) {
            pt["t"] = traj.t[i];
            worst = std::max(worst, std::abs(sol.u_of_t.eval(pt) - traj.u[i]));
        }
        CHECK(worst < 1e-7);
    }
}

TEST_CASE("reconstruct_solution guards") {
    Params p(1, 2, 1);
    FirstIntegral quadratic{P("exp(2*t)*(u^2/2 + u*u1 + u1^2/2)"), "X3"};
    FirstIntegral i1{P("exp(t)*(u + u1)"), "X1"};
    CHECK_THROWS_AS(reconstruct_solution(quadratic, i1, classify(p)), NonAffineIntegralError);
    CHECK_THROWS_AS(reconstruct_solution(i1, i1, classify(p)), SingularSystemError);
}

TEST_CASE("translation-pair integrals are functionally independent") {
    for (Params p : {Params(1, 3, 2), Params(1, 1, 1), Params(1, 2, 1)}) {
        Lagrangian L(bateman_lagrangian().expr.substitute(p.binding()));
        auto syms = solve_dho(bateman_lagrangian(), p);
        std::size_t ia = classify(p).kind == Damping::Critical ? 0 : 3;
        std::size_t ib = classify(p).kind == Damping::Critical ? 1 : 4;
        FirstIntegral a = first_integral(syms[ia], L);
        FirstIntegral b = first_integral(syms[ib], L);

        testutil::TreeGen gen(31337u);
        for (int trial = 0; trial < 5; ++trial) {
            Assignment pt = gen.random_point();
            smallmat::Matrix jac = {
                {a.expr.diff("u").eval(pt), a.expr.diff("u1").eval(pt)},
                {b.expr.diff("u").eval(pt), b.expr.diff("u1").eval(pt)},
            };
            CHECK(smallmat::rank(jac) == 2);
        }
    }
}

TEST_CASE("rk4 halving the step shrinks the error about sixteenfold") {
    Params p(1, 2, 1);
    auto max_err = [&](double h) {
        Trajectory traj = integrate_rk4(p, {0.0, 1.0, 0.0}, 5.0, h);
        double worst = 0.0;
        for (std::size_t i = 0; i < traj.t.size(); ++i) {
            double exact = (1.0 + traj.t[i]) * std::exp(-traj.t[i]);
            worst = std::max(worst, std::abs(traj.u[i] - exact));
        }
        return worst;
    };
    double ratio = max_err(0.05) / max_err(0.025);
    CHECK(ratio > 12.0);
    CHECK(ratio < 20.0);
}

TEST_CASE("proportionality comparator") {
    Expr e = P("exp(t)*(u + u1)");
    CHECK(proportionality(Expr(2) * e, e).value() == Expr(2));
    CHECK(proportionality(e + Expr(5), e, true).value() == Expr(1));
    CHECK(proportionality(e + Expr(5), e, false) == std::nullopt);
    CHECK(proportionality(P("u"), P("t")) == std::nullopt);
    Expr sym = P("m*u");  // parameter-dependent scale is fine
    CHECK(proportionality(sym, P("u")).value() == Expr::m());
}

}  // TEST_SUITE

#include "ndho/conservation.hpp"

#include <cmath>
#include <cstdio>

#include "ndho/calculus.hpp"

namespace ndho {

FirstIntegral first_integral(const NoetherSymmetry& ns, const Lagrangian& L) {
    if (!check_noether(ns.field, ns.gauge, L))
        throw NotASymmetryError("first_integral: the field does not satisfy the symmetry condition");
    Expr u1 = Expr::u1();
    Expr I = ns.field.xi * L.expr + (ns.field.eta - u1 * ns.field.xi) * L.expr.diff("u1") -
             ns.gauge.B;
    EquationOfMotion eom = euler_lagrange(L);
    FirstIntegral out{I, ""};
    internal_check(verify_symbolic(out, eom), "integral from the symmetry theorem is not conserved");
    return out;
}

bool verify_symbolic(const FirstIntegral& I, const EquationOfMotion& eom,
                     const ZeroTestOptions& opt) {
    return is_zero(total_derivative(I.expr, eom), opt);
}

Trajectory integrate_rk4(const Params& p, const InitialCondition& ic, double t_end, double h,
                         long long max_steps) {
    if (!(h > 0.0)) throw Error("step size must be positive");
    if (!(t_end > ic.t0)) throw Error("t_end must exceed t0");
    double span = t_end - ic.t0;
    long long n = static_cast<long long>(std::llround(span / h));
    if (n < 1) n = 1;
    if (n > max_steps) throw StepOverflowError("trajectory would need " + std::to_string(n) +
                                               " steps (limit " + std::to_string(max_steps) + ")");

    double cm = (p.c / p.m).to_double();
    double km = (p.k / p.m).to_double();
    auto acc = [cm, km](double u, double v) { return -cm * v - km * u; };

    Trajectory traj{{}, {}, {}, h, p, ic};
    traj.t.reserve(n + 1);
    traj.u.reserve(n + 1);
    traj.u1.reserve(n + 1);

    double u = ic.u0, v = ic.v0;
    for (long long i = 0; i <= n; ++i) {
        traj.t.push_back(ic.t0 + static_cast<double>(i) * h);
        traj.u.push_back(u);
        traj.u1.push_back(v);
        if (i == n) break;
        double k1u = v, k1v = acc(u, v);
        double k2u = v + 0.5 * h * k1v, k2v = acc(u + 0.5 * h * k1u, v + 0.5 * h * k1v);
        double k3u = v + 0.5 * h * k2v, k3v = acc(u + 0.5 * h * k2u, v + 0.5 * h * k2v);
        double k4u = v + h * k3v, k4v = acc(u + h * k3u, v + h * k3v);
        u += h / 6.0 * (k1u + 2.0 * k2u + 2.0 * k3u + k4u);
        v += h / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v);
    }
    return traj;
}

double conservation_drift(const FirstIntegral& I, const Trajectory& traj, double eps_abs) {
    Assignment a = traj.params.numeric();
    auto value_at = [&](std::size_t i) {
        a["t"] = traj.t[i];
        a["u"] = traj.u[i];
        a["u1"] = traj.u1[i];
        return I.expr.eval(a);
    };
    double i0 = value_at(0);
    double denom = std::abs(i0) + eps_abs;
    double worst = 0.0;
    for (std::size_t i = 1; i < traj.t.size(); ++i)
        worst = std::max(worst, std::abs(value_at(i) - i0) / denom);
    return worst;
}

std::string trajectory_csv(const Trajectory& traj) {
    std::string out = "t,u,u1\n";
    char buf[128];
    for (std::size_t i = 0; i < traj.t.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g\n", traj.t[i], traj.u[i], traj.u1[i]);
        out += buf;
    }
    return out;
}

namespace {

struct AffineParts {
    Expr a;  // coefficient of u
    Expr b;  // coefficient of u1
    Expr c;  // inhomogeneous part
};

AffineParts affine_parts(const FirstIntegral& I) {
    std::map<std::pair<long long, long long>, Expr> coeffs;
    try {
        coeffs = collect_powers2(I.expr, "u", "u1");
    } catch (const UnsupportedExpressionError&) {
        throw NonAffineIntegralError("integral has u or u1 inside a function argument");
    }
    AffineParts parts;
    for (const auto& [key, expr] : coeffs) {
        if (key == std::make_pair(1LL, 0LL))
            parts.a = expr;
        else if (key == std::make_pair(0LL, 1LL))
            parts.b = expr;
        else if (key == std::make_pair(0LL, 0LL))
            parts.c = expr;
        else if (!expr.is_zero_literal())
            throw NonAffineIntegralError("integral is not affine in (u, u1)");
    }
    return parts;
}

}  // namespace

ClosedFormSolution reconstruct_solution(const FirstIntegral& ia, const FirstIntegral& ib,
                                        const DampingRegime& regime,
                                        const std::array<std::string, 2>& constants) {
    AffineParts pa = affine_parts(ia);
    AffineParts pb = affine_parts(ib);
    Expr det = pa.a * pb.b - pb.a * pa.b;
    if (is_zero(det)) throw SingularSystemError("the (u, u1) coefficient matrix is singular");

    Expr ca = Expr::symbol(constants[0]) - pa.c;
    Expr cb = Expr::symbol(constants[1]) - pb.c;
    Expr numer = ca * pb.b - cb * pa.b;
    Expr u_of_t;
    if (auto q = divide_exact(numer, det))
        u_of_t = *q;
    else
        u_of_t = numer * det.pow(Rational(-1));

    ClosedFormSolution sol{u_of_t, regime, constants};

    // The equation of motion is recoverable from either integral: along
    // solutions A'u + (A + B')u1 + B u'' + C' = 0. Check the reconstruction
    // against it.
    const AffineParts& pr = pa.b.is_zero_literal() ? pb : pa;
    if (!pr.b.is_zero_literal()) {
        Expr w_num = -(pr.a.diff("t") * Expr::u() + (pr.a + pr.b.diff("t")) * Expr::u1() +
                       pr.c.diff("t"));
        Expr w;
        if (auto q = divide_exact(w_num, pr.b))
            w = *q;
        else
            w = w_num * pr.b.pow(Rational(-1));
        Expr du = u_of_t.diff("t");
        Expr residual = u_of_t.diff("t", 2) -
                        w.substitute({{"u", u_of_t}, {"u1", du}});
        internal_check(is_zero(residual), "reconstructed solution fails the equation of motion");
    }
    return sol;
}

std::optional<Expr> proportionality(const Expr& a, const Expr& b, bool allow_additive_constant) {
    auto is_param_constant = [](const Expr& e) {
        return !e.depends_on("t") && !e.depends_on("u") && !e.depends_on("u1");
    };
    if (b.is_zero_literal()) return std::nullopt;
    if (a.is_zero_literal()) return std::nullopt;

    // ratio of the leading non-constant terms
    auto leading_nonconstant = [&](const Expr& e) -> std::optional<Expr> {
        for (const auto& term : e.terms()) {
            detail::TermList single{term};
            Expr t = Expr::from_terms(std::move(single));
            if (!is_param_constant(t)) return t;
        }
        return std::nullopt;
    };
    auto la = leading_nonconstant(a), lb = leading_nonconstant(b);
    if (!la || !lb) return std::nullopt;
    Expr ratio = *la * lb->pow(Rational(-1));
    if (!is_param_constant(ratio)) return std::nullopt;

    Expr diff = a - ratio * b;
    if (allow_additive_constant) {
        if (!is_param_constant(diff) && !is_zero(diff)) return std::nullopt;
    } else if (!is_zero(diff)) {
        return std::nullopt;
    }
    return ratio;
}

const std::vector<InitialCondition>& standard_initial_conditions() {
    static const std::vector<InitialCondition> suite = {
        {0.0, 1.0, 0.0}, {0.0, 0.0, 1.0}, {0.0, 1.0, -1.0}};
    return suite;
}

}  // namespace ndho

#include "ndho/noether.hpp"

#include <random>

#include "ndho/calculus.hpp"
#include "ndho/smallmat.hpp"

namespace ndho {

const std::vector<std::string>& Ansatz::unknown_functions() {
    static const std::vector<std::string> fns = {"alpha", "beta", "gamma", "delta", "eps", "zeta"};
    return fns;
}

std::string Ansatz::derivative_symbol(const std::string& fn) { return "d" + fn; }

Expr Ansatz::xi() const { return Expr::symbol("alpha"); }

Expr Ansatz::eta() const {
    return Expr::symbol("beta") * Expr::u() + Expr::symbol("gamma");
}

Expr Ansatz::gauge() const {
    Expr u = Expr::u();
    return Expr::symbol("delta") * u * u + Expr::symbol("eps") * u + Expr::symbol("zeta");
}

Expr jet_total_derivative(const Expr& e, const Ansatz&) {
    Expr out = e.diff("t") + Expr::u1() * e.diff("u");
    for (const auto& fn : Ansatz::unknown_functions())
        out = out + e.diff(fn) * Expr::symbol(Ansatz::derivative_symbol(fn));
    return out;
}

std::vector<CoefficientEquation> determining_equations(const Lagrangian& L, const Ansatz& ansatz) {
    Expr xi = ansatz.xi(), eta = ansatz.eta(), B = ansatz.gauge();
    Expr u1 = Expr::u1();

    Expr Dxi = jet_total_derivative(xi, ansatz);
    Expr eta1 = jet_total_derivative(eta, ansatz) - u1 * Dxi;
    Expr residual = xi * L.expr.diff("t") + eta * L.expr.diff("u") + eta1 * L.expr.diff("u1") +
                    Dxi * L.expr - jet_total_derivative(B, ansatz);

    std::map<std::pair<long long, long long>, Expr> coeffs;
    try {
        coeffs = collect_powers2(residual, "u1", "u");
    } catch (const UnsupportedExpressionError& e) {
        throw AnsatzMismatchError(std::string("Lagrangian outside the supported class: ") +
                                  e.what());
    }

    static const std::vector<std::pair<long long, long long>> allowed = {
        {2, 0}, {1, 1}, {1, 0}, {0, 2}, {0, 1}, {0, 0}};
    std::vector<CoefficientEquation> out;
    for (const auto& key : allowed) {
        auto it = coeffs.find(key);
        if (it == coeffs.end() || it->second.is_zero_literal()) continue;
        out.push_back({key.first, key.second, it->second});
        coeffs.erase(it);
    }
    for (const auto& [key, expr] : coeffs) {
        if (!expr.is_zero_literal())
            throw AnsatzMismatchError("residual monomial u1^" + std::to_string(key.first) +
                                      " u^" + std::to_string(key.second) +
                                      " falls outside the structured ansatz");
    }
    return out;
}

namespace {

// R = Z^[1](L) + D(xi) L, the part of the condition that must equal D(B).
Expr condition_left(const VectorField& Z, const Lagrangian& L) {
    Expr u1 = Expr::u1();
    ProlongedField P = prolong(Z);
    Expr zl = Z.xi * L.expr.diff("t") + Z.eta * L.expr.diff("u") + P.eta1 * L.expr.diff("u1");
    Expr Dxi = Z.xi.diff("t") + u1 * Z.xi.diff("u");
    return zl + Dxi * L.expr;
}

}  // namespace

Expr noether_residual(const VectorField& Z, const GaugeFunction& B, const Lagrangian& L) {
    Expr DB = B.B.diff("t") + Expr::u1() * B.B.diff("u");
    return condition_left(Z, L) - DB;
}

bool check_noether(const VectorField& Z, const GaugeFunction& B, const Lagrangian& L,
                   const ZeroTestOptions& opt) {
    return is_zero(noether_residual(Z, B, L), opt);
}

std::optional<GaugeFunction> solve_gauge(const VectorField& Z, const Lagrangian& L) {
    Expr R = condition_left(Z, L);
    std::map<long long, Expr> by_u1;
    try {
        by_u1 = collect_powers(R, "u1");
    } catch (const UnsupportedExpressionError&) {
        return std::nullopt;  // u1 tangled in function arguments: not a total derivative
    }
    for (const auto& [p, coeff] : by_u1)
        if (p >= 2 && !is_zero(coeff)) return std::nullopt;  // quadratic in u1: not exact

    Expr V = by_u1.count(1) ? by_u1.at(1) : Expr();   // must equal B_u
    Expr R0 = by_u1.count(0) ? by_u1.at(0) : Expr();  // must equal B_t

    // u-antiderivative of V, monomial by monomial.
    Expr Bu_int;
    for (const auto& [n, coeff] : collect_powers(V, "u")) {
        if (n < 0) throw UnsupportedExpressionError("gauge recovery needs a log term in u");
        Bu_int = Bu_int + Expr(Rational(1, n + 1)) * coeff * Expr::u().pow(Rational(n + 1));
    }

    Expr g = R0 - Bu_int.diff("t");
    if (g.depends_on("u")) {
        Expr g0 = g.substitute({{"u", Expr()}});
        if (!is_zero(g - g0)) return std::nullopt;  // integrability condition fails
        g = g0;
    }

    Expr B = Bu_int;
    if (!g.is_zero_literal() && !is_zero(g)) {
        auto phi = antiderivative_t(g);
        if (!phi)
            throw UnsupportedExpressionError(
                "gauge recovery: residual t-part has no closed-form antiderivative in this class");
        B = B + *phi;
    }

    Expr b00 = B.substitute({{"t", Expr()}, {"u", Expr()}});
    B = B - b00;

    GaugeFunction gauge(B);
    internal_check(is_zero(noether_residual(Z, gauge, L)),
                   "recovered gauge does not satisfy the symmetry condition");
    return gauge;
}

std::vector<std::string> generator_names(const DampingRegime& regime) {
    if (regime.kind == Damping::Under) return {"X1", "X2", "X3", "G4", "G5"};
    return {"X1", "X2", "X3", "X4", "X5"};
}

int span_rank(const std::vector<VectorField>& fields, unsigned seed) {
    if (fields.empty()) return 0;
    std::set<std::string> syms;
    for (const auto& f : fields) {
        auto sx = f.xi.free_symbols();
        auto se = f.eta.free_symbols();
        syms.insert(sx.begin(), sx.end());
        syms.insert(se.begin(), se.end());
    }
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> mag(0.1, 2.0);
    std::uniform_int_distribution<int> flip(0, 1);

    const int points = 12;
    smallmat::Matrix mat(fields.size());
    for (int pidx = 0; pidx < points; ++pidx) {
        for (int attempt = 0;; ++attempt) {
            Assignment a;
            for (const auto& s : syms) a[s] = (flip(rng) ? 1.0 : -1.0) * mag(rng);
            try {
                std::vector<std::pair<double, double>> vals;
                vals.reserve(fields.size());
                for (const auto& f : fields) vals.emplace_back(f.xi.eval(a), f.eta.eval(a));
                for (std::size_t i = 0; i < fields.size(); ++i) {
                    mat[i].push_back(vals[i].first);
                    mat[i].push_back(vals[i].second);
                }
                break;
            } catch (const DomainError&) {
                if (attempt > 40) throw;
            }
        }
    }
    return smallmat::rank(std::move(mat));
}

bool same_span(const std::vector<VectorField>& a, const std::vector<VectorField>& b) {
    std::vector<VectorField> joint = a;
    joint.insert(joint.end(), b.begin(), b.end());
    int ra = span_rank(a), rb = span_rank(b), rj = span_rank(joint);
    return ra == rb && rb == rj;
}

std::vector<NoetherSymmetry> solve_dho(const Lagrangian& L, const Params& p) {
    Lagrangian Lp(L.expr.substitute(p.binding()));
    EquationOfMotion eom = euler_lagrange(Lp);
    Expr expected_w = -(Expr(p.c / p.m) * Expr::u1()) - Expr(p.k / p.m) * Expr::u();
    if (!(eom.w == expected_w) && !is_zero(eom.w - expected_w))
        throw Error("Lagrangian does not yield the damped harmonic oscillator equation");

    DampingRegime regime = classify(p);
    Expr t = Expr::t(), u = Expr::u();
    Rational two_m = Rational(2) * p.m;
    Rational half_com = p.c / two_m;

    auto alpha_field = [&](const Expr& alpha) {
        Expr beta = Expr(Rational(1, 2)) * alpha.diff("t") - Expr(half_com) * alpha;
        return VectorField(alpha, beta * u);
    };
    auto gamma_field = [&](const Expr& gamma) { return VectorField(Expr(), gamma); };

    Expr s = regime_radical(p);  // sqrt(|c^2 - 4km|)
    std::vector<VectorField> fields;
    switch (regime.kind) {
        case Damping::Over: {
            Expr omega = s * Expr(p.m.reciprocal());
            Expr r_minus = (Expr(-p.c) - s) * Expr(two_m.reciprocal());
            Expr r_plus = (Expr(-p.c) + s) * Expr(two_m.reciprocal());
            fields = {alpha_field(Expr(1)), alpha_field(Expr::sinh(omega * t)),
                      alpha_field(Expr::cosh(omega * t)), gamma_field(Expr::exp(r_minus * t)),
                      gamma_field(Expr::exp(r_plus * t))};
            break;
        }
        case Damping::Under: {
            Expr omega = s * Expr(p.m.reciprocal());
            Expr omega_half = s * Expr(two_m.reciprocal());
            Expr decay = Expr::exp(Expr(-half_com) * t);
            fields = {alpha_field(Expr(1)), alpha_field(Expr::sin(omega * t)),
                      alpha_field(Expr::cos(omega * t)),
                      gamma_field(decay * Expr::cos(omega_half * t)),
                      gamma_field(decay * Expr::sin(omega_half * t))};
            break;
        }
        case Damping::Critical: {
            // c/2m equals sqrt(k/m) exactly on the critical set
            Expr decay = Expr::exp(Expr(-half_com) * t);
            fields = {gamma_field(decay), gamma_field(t * decay), alpha_field(Expr(1)),
                      alpha_field(t), alpha_field(Expr(Rational(1, 2)) * t * t)};
            break;
        }
    }

    std::vector<NoetherSymmetry> out;
    out.reserve(fields.size());
    for (const auto& f : fields) {
        auto gauge = solve_gauge(f, Lp);
        internal_check(gauge.has_value(), "constructed generator failed gauge recovery");
        internal_check(check_noether(f, *gauge, Lp),
                       "constructed generator fails the symmetry condition");
        out.push_back({f, *gauge});
    }
    internal_check(span_rank(fields) == 5, "solved symmetry space is not 5-dimensional");
    return out;
}

}  // namespace ndho

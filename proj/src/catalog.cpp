#include "ndho/catalog.hpp"

#include <cmath>
#include <cstdio>

#include "ndho/calculus.hpp"

namespace ndho {

namespace {

std::string fmt_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.3g", v);
    return buf;
}

struct Builder {
    Params p;
    DampingRegime regime;
    Expr t = Expr::t();
    Expr u = Expr::u();
    Expr u1 = Expr::u1();
    Expr m, c, k;
    Expr e_full;   // exp(c t / m)
    Expr e_half;   // exp(c t / 2m)
    Expr s;        // sqrt(|c^2 - 4km|)

    explicit Builder(const Params& params)
        : p(params),
          regime(classify(params)),
          m(params.m),
          c(params.c),
          k(params.k),
          e_full(Expr::exp(Expr(params.c / params.m) * Expr::t())),
          e_half(Expr::exp(Expr(params.c / (Rational(2) * params.m)) * Expr::t())),
          s(regime_radical(params)) {}

    Expr over_wave_arg() const { return s * Expr(p.m.reciprocal()) * t; }      // sqrt(d) t / m
    Expr half_wave_arg() const {                                               // sqrt(d) t / 2m
        return s * Expr((Rational(2) * p.m).reciprocal()) * t;
    }
    Rational q() const { return p.c / (Rational(2) * p.m); }  // sqrt(k/m) on the critical set

    VectorField x1() const {
        return VectorField(Expr(1), Expr(-(p.c / (Rational(2) * p.m))) * u);
    }

    // shared quadratic block of the wave-type integrals:
    // 2 m^2 u1^2 + 2 m (c u u1 - k u^2) + c^2 u^2
    Expr wave_quad() const {
        return Expr(2) * m * m * u1 * u1 + Expr(2) * m * (c * u * u1 - k * u * u) +
               c * c * u * u;
    }

    Expr i1() const { return -(e_full * (m * u1 * u1 + c * u * u1 + k * u * u)); }
};

RegimeCatalog build_over(const Builder& b) {
    RegimeCatalog cat{b.regime, b.p, bateman_lagrangian().expr.substitute(b.p.binding()),
                      {},       {}, {},
                      Expr(),   {"C1", "C2"}, "",
                      {},       {}};
    cat.names = {"X1", "X2", "X3", "X4", "X5"};

    Expr arg = b.over_wave_arg();
    Expr sh = Expr::sinh(arg), ch = Expr::cosh(arg);
    Rational inv2m = (Rational(2) * b.p.m).reciprocal();
    Expr s_2m = b.s * Expr(inv2m);
    Expr c_2m(b.p.c * inv2m);

    std::vector<VectorField> fields;
    fields.push_back(b.x1());
    // the published X2 carries a stray imaginary unit; the real generator is stored
    fields.emplace_back(sh, b.u * (s_2m * ch - c_2m * sh));
    // published X3 has "-(sqrt(d)/2m) sinh" in eta; that sign violates the
    // symmetry condition (and disagrees with the published I3 and table row),
    // so the corrected "+" form is stored.
    fields.emplace_back(ch, b.u * (s_2m * sh - c_2m * ch));
    Expr r_minus = (Expr(-b.p.c) - b.s) * Expr(inv2m);
    Expr r_plus = (Expr(-b.p.c) + b.s) * Expr(inv2m);
    fields.emplace_back(Expr(), Expr::exp(r_minus * b.t));
    fields.emplace_back(Expr(), Expr::exp(r_plus * b.t));

    cat.corrections.push_back({"X2", "published over-damped X2 carries a factor iota; the real "
                                     "generator sinh()*d/dt + (...)*d/du is stored"});
    cat.corrections.push_back({"X3", "published eta has -(sqrt(d)/2m) sinh(.) u; the symmetry "
                                     "condition forces +(sqrt(d)/2m) sinh(.) u, which also matches "
                                     "the published I3 and commutator table"});

    Lagrangian L(cat.lagrangian_expr);
    for (std::size_t i = 0; i < fields.size(); ++i) {
        auto g = solve_gauge(fields[i], L);
        internal_check(g.has_value(), "catalog generator failed gauge recovery");
        cat.generators.push_back({fields[i], *g});
    }

    // published integrals, instantiated verbatim
    Expr disc(b.regime.discriminant);
    Expr pref = Expr(Rational(1)) / (Expr(16) * b.k * b.m * b.m);
    Expr odd_factor = b.c * b.c * Expr::sqrt(disc) - disc.pow(Rational(3, 2));
    Expr quad = b.wave_quad();
    Expr pair_part = (b.c * b.u * b.u + Expr(2) * b.m * b.u * b.u1) * odd_factor;
    cat.integrals.push_back({b.i1(), "X1"});
    cat.integrals.push_back(
        {pref * (Expr(-4) * b.k * b.m * b.e_full * quad * sh + b.e_full * pair_part * ch), "X2"});
    cat.integrals.push_back(
        {pref * (Expr(-4) * b.k * b.m * b.e_full * quad * ch + b.e_full * pair_part * sh), "X3"});
    Expr half(Rational(1, 2));
    cat.integrals.push_back({b.e_full * Expr::exp(-(b.c + b.s) * Expr(inv2m) * b.t) * b.m * b.u1 +
                                 half * (b.c + b.s) * b.u * Expr::exp((b.c - b.s) * Expr(inv2m) * b.t),
                             "X4"});
    cat.integrals.push_back({b.e_full * Expr::exp((Expr(-b.p.c) + b.s) * Expr(inv2m) * b.t) * b.m * b.u1 +
                                 half * (b.c - b.s) * b.u * Expr::exp((b.c + b.s) * Expr(inv2m) * b.t),
                             "X5"});

    // solution derived from I4 and I5; the published form omits t in the
    // exponents and carries a prefactor inconsistent with the published pair
    Expr C1 = Expr::symbol("C1"), C2 = Expr::symbol("C2");
    cat.solution = (C1 * Expr::exp(r_plus * b.t) - C2 * Expr::exp(r_minus * b.t)) / b.s;
    cat.constant_map = "C1 = value of I4, C2 = value of I5";
    cat.corrections.push_back(
        {"solution", "published closed form omits t in the exponents and its prefactor "
                     "2m/(c^2-4km) does not reproduce the published I4, I5; the derived "
                     "prefactor is 1/sqrt(c^2-4km)"});

    // published commutator table
    Expr f1 = b.s * Expr(b.p.m.reciprocal());
    Expr f2 = b.s * Expr(inv2m);
    auto& C = cat.claimed;
    C.names = cat.names;
    for (const auto& g : cat.generators) C.basis.push_back(g.field);
    C.coeffs.assign(5, std::vector<std::vector<Expr>>(5, std::vector<Expr>(5)));
    auto set = [&](int i, int j, int k2, const Expr& v) { C.coeffs[i][j][k2] = v; };
    set(0, 1, 2, f1);        // [X1,X2] = f1 X3
    set(0, 2, 1, f1);        // [X1,X3] = f1 X2
    set(0, 3, 3, -f2);       // [X1,X4] = -f2 X4
    set(0, 4, 4, f2);        // [X1,X5] = f2 X5
    set(1, 0, 2, -f1);
    set(1, 2, 0, -f1);       // [X2,X3] = -f1 X1
    set(1, 3, 4, -f2);       // [X2,X4] = -f2 X5
    set(1, 4, 3, -f2);       // [X2,X5] = -f2 X4
    set(2, 0, 1, -f1);
    set(2, 1, 0, f1);
    set(2, 3, 4, -f2);       // [X3,X4] = -f2 X5
    set(2, 4, 3, f2);        // [X3,X5] = f2 X4
    set(3, 0, 3, f2);
    set(3, 1, 4, f2);
    set(3, 2, 4, f2);
    set(4, 0, 4, -f2);
    set(4, 1, 3, f2);
    set(4, 2, 3, -f2);
    return cat;
}

RegimeCatalog build_under(const Builder& b) {
    RegimeCatalog cat{b.regime, b.p, bateman_lagrangian().expr.substitute(b.p.binding()),
                      {},       {}, {},
                      Expr(),   {"C1", "C2"}, "",
                      {},       {}};
    cat.names = {"X1", "X2", "X3", "G4", "G5"};

    Expr arg = b.over_wave_arg();       // sqrt(4km-c^2) t / m
    Expr half_arg = b.half_wave_arg();  // sqrt(4km-c^2) t / 2m
    Expr sn = Expr::sin(arg), cn = Expr::cos(arg);
    Rational inv2m = (Rational(2) * b.p.m).reciprocal();
    Expr s_2m = b.s * Expr(inv2m);
    Expr c_2m(b.p.c * inv2m);
    Expr decay = Expr::exp(Expr(-(b.p.c * inv2m)) * b.t);

    std::vector<VectorField> fields;
    fields.push_back(b.x1());
    fields.emplace_back(sn, b.u * (s_2m * cn - c_2m * sn));
    fields.emplace_back(cn, -(b.u * (s_2m * sn + c_2m * cn)));
    fields.emplace_back(Expr(), decay * Expr::cos(half_arg));
    fields.emplace_back(Expr(), decay * Expr::sin(half_arg));

    cat.corrections.push_back(
        {"G4/G5", "the complex translation pair is stored as its real and imaginary "
                  "parts, which the published text itself shows give the same integrals"});

    Lagrangian L(cat.lagrangian_expr);
    for (std::size_t i = 0; i < fields.size(); ++i) {
        auto g = solve_gauge(fields[i], L);
        internal_check(g.has_value(), "catalog generator failed gauge recovery");
        cat.generators.push_back({fields[i], *g});
    }

    Expr quad = b.wave_quad();
    Expr quarter_m = Expr(Rational(1, 4)) * Expr(b.p.m.reciprocal());
    cat.integrals.push_back({b.i1(), "X1"});
    cat.integrals.push_back({-(quarter_m * b.e_full * quad * sn) +
                                 quarter_m * b.e_full * b.u * b.s * (b.c * b.u + Expr(2) * b.m * b.u1) * cn,
                             "X2"});
    cat.integrals.push_back({-(quarter_m * b.e_full * quad * cn) -
                                 quarter_m * b.e_full * b.u * b.s * (b.c * b.u + Expr(2) * b.m * b.u1) * sn,
                             "X3"});
    Expr half(Rational(1, 2));
    Expr mom = b.m * b.u1 + half * b.c * b.u;
    cat.integrals.push_back(
        {b.e_half * (mom * Expr::cos(half_arg) + half * b.u * b.s * Expr::sin(half_arg)), "G4"});
    cat.integrals.push_back(
        {b.e_half * (mom * Expr::sin(half_arg) - half * b.u * b.s * Expr::cos(half_arg)), "G5"});

    Expr C1 = Expr::symbol("C1"), C2 = Expr::symbol("C2");
    cat.solution = decay * (C1 * Expr::sin(half_arg) - C2 * Expr::cos(half_arg)) / b.s;
    cat.constant_map = "C1 = 2 * value of I4, C2 = 2 * value of I5";

    Expr f1 = b.s * Expr(b.p.m.reciprocal());
    Expr f2 = b.s * Expr(inv2m);
    auto& C = cat.claimed;
    C.names = cat.names;
    for (const auto& g : cat.generators) C.basis.push_back(g.field);
    C.coeffs.assign(5, std::vector<std::vector<Expr>>(5, std::vector<Expr>(5)));
    auto set = [&](int i, int j, int k2, const Expr& v) { C.coeffs[i][j][k2] = v; };
    set(0, 1, 2, f1);    // [X1,X2] = f1 X3
    set(0, 2, 1, -f1);   // [X1,X3] = -f1 X2
    set(0, 3, 4, -f2);   // [X1,G4] = -f2 G5
    set(0, 4, 3, f2);    // [X1,G5] = f2 G4
    set(1, 0, 2, -f1);
    set(1, 2, 0, -f1);   // [X2,X3] = -f1 X1
    set(1, 3, 3, -f2);   // [X2,G4] = -f2 G4
    set(1, 4, 4, f2);    // [X2,G5] = f2 G5
    set(2, 0, 1, f1);
    set(2, 1, 0, f1);
    set(2, 3, 4, f2);    // [X3,G4] = f2 G5
    set(2, 4, 3, f2);    // [X3,G5] = f2 G4
    set(3, 0, 4, f2);
    set(3, 1, 3, f2);
    set(3, 2, 4, -f2);
    set(4, 0, 3, -f2);
    set(4, 1, 4, -f2);
    set(4, 2, 3, -f2);
    return cat;
}

RegimeCatalog build_critical(const Builder& b) {
    RegimeCatalog cat{b.regime, b.p, bateman_lagrangian().expr.substitute(b.p.binding()),
                      {},       {}, {},
                      Expr(),   {"C1", "C2"}, "",
                      {},       {}};
    cat.names = {"X1", "X2", "X3", "X4", "X5"};

    Rational q = b.q();
    Expr decay = Expr::exp(Expr(-q) * b.t);
    Expr grow = Expr::exp(Expr(q) * b.t);
    Expr grow2 = Expr::exp(Expr(Rational(2) * q) * b.t);
    Expr half(Rational(1, 2));

    std::vector<VectorField> fields;
    fields.emplace_back(Expr(), decay);
    fields.emplace_back(Expr(), b.t * decay);
    fields.emplace_back(Expr(1), Expr(-q) * b.u);
    fields.emplace_back(b.t, -(half * (Expr(Rational(2) * q) * b.t - Expr(1)) * b.u));
    fields.emplace_back(half * b.t * b.t, -(half * (Expr(q) * b.t * b.t - b.t) * b.u));

    Lagrangian L(cat.lagrangian_expr);
    for (std::size_t i = 0; i < fields.size(); ++i) {
        auto g = solve_gauge(fields[i], L);
        internal_check(g.has_value(), "catalog generator failed gauge recovery");
        cat.generators.push_back({fields[i], *g});
    }

    Expr qe(q);
    cat.integrals.push_back({grow * (qe * b.u + b.u1), "X1"});
    cat.integrals.push_back({grow * (qe * b.t * b.u + b.t * b.u1 - b.u), "X2"});
    cat.integrals.push_back(
        {grow2 * (b.k * b.u * b.u / (Expr(2) * b.m) + qe * b.u * b.u1 + half * b.u1 * b.u1), "X3"});
    Expr lin = qe * b.u + b.u1;
    cat.integrals.push_back(
        {grow2 * (half * b.t * lin * lin - (qe * b.t * b.u - half * b.u + b.t * b.u1) * lin), "X4"});
    cat.integrals.push_back(
        {Expr(Rational(1, 4)) * b.u * b.u * grow2 +
             b.t / (Expr(4) * b.m) *
                 (Expr(2) * b.m * b.u * (b.t * b.u1 - b.u) * qe + b.t * b.m * b.u1 * b.u1 +
                  b.t * b.k * b.u * b.u - Expr(2) * b.m * b.u * b.u1) *
                 grow2,
         "X5"});

    Expr C1 = Expr::symbol("C1"), C2 = Expr::symbol("C2");
    cat.solution = decay * (C1 * b.t - C2);
    cat.constant_map = "C1 = value of I1, C2 = value of I2";

    auto& C = cat.claimed;
    C.names = cat.names;
    for (const auto& g : cat.generators) C.basis.push_back(g.field);
    C.coeffs.assign(5, std::vector<std::vector<Expr>>(5, std::vector<Expr>(5)));
    auto set = [&](int i, int j, int k2, const Expr& v) { C.coeffs[i][j][k2] = v; };
    Expr one(1);
    set(0, 3, 0, half);     // [X1,X4] = 1/2 X1
    set(0, 4, 1, half);     // [X1,X5] = 1/2 X2
    set(1, 2, 0, -one);     // [X2,X3] = -X1
    set(1, 3, 1, -half);    // [X2,X4] = -1/2 X2
    set(2, 1, 0, one);
    set(2, 3, 2, one);      // [X3,X4] = X3
    set(2, 4, 3, one);      // [X3,X5] = X4
    set(3, 0, 0, -half);
    set(3, 1, 1, half);
    set(3, 2, 2, -one);
    set(3, 4, 4, one);      // [X4,X5] = X5
    set(4, 0, 1, -half);
    set(4, 2, 3, -one);
    set(4, 3, 4, -one);
    return cat;
}

}  // namespace

RegimeCatalog catalog(const DampingRegime& regime, const Params& p) {
    DampingRegime actual = classify(p);
    if (actual.kind != regime.kind)
        throw Error(std::string("parameters classify as ") + actual.name() +
                    ", not " + regime.name());
    Builder b(p);
    switch (regime.kind) {
        case Damping::Over: return build_over(b);
        case Damping::Under: return build_under(b);
        case Damping::Critical: return build_critical(b);
    }
    throw Error("unreachable");
}

namespace {

// The published over-damped X3, before the sign correction; the audit shows
// explicitly that it fails the symmetry condition.
VectorField published_over_x3(const Builder& b) {
    Expr arg = b.over_wave_arg();
    Rational inv2m = (Rational(2) * b.p.m).reciprocal();
    Expr s_2m = b.s * Expr(inv2m);
    Expr c_2m(b.p.c * inv2m);
    return VectorField(Expr::cosh(arg),
                       -(b.u * (s_2m * Expr::sinh(arg) + c_2m * Expr::cosh(arg))));
}

}  // namespace

AuditReport audit_catalog(const DampingRegime& regime, const Params& p) {
    RegimeCatalog cat = catalog(regime, p);
    Lagrangian L(cat.lagrangian_expr);
    EquationOfMotion eom = euler_lagrange(L);
    AuditReport report;

    auto correction_for = [&](const std::string& item) -> const CatalogNote* {
        for (const auto& n : cat.corrections)
            if (n.item == item) return &n;
        return nullptr;
    };

    // generators: symmetry condition with the derived gauge
    for (std::size_t i = 0; i < cat.generators.size(); ++i) {
        bool ok = check_noether(cat.generators[i].field, cat.generators[i].gauge, L);
        const CatalogNote* corr = correction_for(cat.names[i]);
        std::string status = ok ? (corr ? "corrected" : "pass") : "mismatch";
        std::string note = corr ? corr->note : "symmetry condition holds with the derived gauge";
        if (!ok) note = "symmetry condition FAILS";
        report.items.push_back({"generator " + cat.names[i], status, note});
    }
    if (regime.kind == Damping::Over) {
        Builder b(p);
        bool printed_ok = solve_gauge(published_over_x3(b), L).has_value();
        report.items.push_back({"generator X3 (as published)",
                                printed_ok ? "mismatch" : "info",
                                printed_ok ? "published form unexpectedly admits a gauge"
                                           : "published form admits no gauge function; it is not "
                                             "a symmetry of the Lagrangian"});
    }

    // integrals: symbolic conservation, drift, scale against the theorem output
    std::vector<Trajectory> trajs;
    for (const auto& ic : standard_initial_conditions())
        trajs.push_back(integrate_rk4(p, ic, 10.0, 1e-3));
    for (std::size_t i = 0; i < cat.integrals.size(); ++i) {
        const auto& I = cat.integrals[i];
        bool symbolic = verify_symbolic(I, eom);
        double worst = 0.0;
        for (const auto& traj : trajs) worst = std::max(worst, conservation_drift(I, traj));
        bool drift_ok = worst < 1e-8;
        FirstIntegral derived = first_integral(cat.generators[i], L);
        auto scale = proportionality(I.expr, derived.expr, true);
        std::string note;
        if (symbolic && drift_ok) {
            note = "conserved exactly; max drift " + fmt_double(worst);
            if (scale && !scale->is_one_literal())
                note += "; published form is (" + scale->str() + ") times the theorem output";
            if (!scale) note += "; NOT proportional to the theorem output";
        } else {
            note = std::string(symbolic ? "" : "symbolic conservation FAILS; ") +
                   (drift_ok ? "" : "numeric drift " + fmt_double(worst) + " exceeds 1e-8");
        }
        report.items.push_back(
            {"integral I" + std::to_string(i + 1), symbolic && drift_ok && scale ? "pass" : "mismatch",
             note});
    }
    if (regime.kind == Damping::Over) {
        report.items.push_back(
            {"integral I2/I3 prefactor", "info",
             "published factor (c^2 sqrt(d) - d^(3/2))/(16 k m^2) reduces exactly to "
             "sqrt(d)/(4m); the printed integrals are conserved as written"});
    }

    // solver output spans the catalog space
    auto solved = solve_dho(bateman_lagrangian(), p);
    std::vector<VectorField> solved_fields, catalog_fields;
    for (const auto& ns : solved) solved_fields.push_back(ns.field);
    for (const auto& ns : cat.generators) catalog_fields.push_back(ns.field);
    bool spans_match = same_span(solved_fields, catalog_fields) &&
                       span_rank(catalog_fields) == 5;
    report.items.push_back({"solver span vs catalog span", spans_match ? "pass" : "mismatch",
                            spans_match ? "both span the same 5-dimensional space"
                                        : "spans differ"});

    // commutator table audit, entry by entry
    report.computed = structure_constants(catalog_fields, p, cat.names);
    std::size_t mismatches = 0;
    for (std::size_t i = 0; i < 5; ++i) {
        for (std::size_t j = 0; j < 5; ++j) {
            if (i == j) continue;
            for (std::size_t k2 = 0; k2 < 5; ++k2) {
                Expr claimed = cat.claimed.coeffs[i][j][k2];
                Expr computed = report.computed.coeffs[i][j][k2];
                if (!(claimed == computed) && !is_zero(claimed - computed)) {
                    ++mismatches;
                    report.items.push_back(
                        {"commutator [" + cat.names[i] + "," + cat.names[j] + "]", "mismatch",
                         "published coefficient of " + cat.names[k2] + " is " + claimed.str() +
                             ", computed " + computed.str()});
                }
            }
        }
    }
    report.items.push_back({"commutator table", mismatches == 0 ? "pass" : "mismatch",
                            mismatches == 0
                                ? "all 25 published entries match the symbolic brackets"
                                : std::to_string(mismatches) + " entries disagree"});
    if (regime.kind == Damping::Under)
        report.items.push_back({"commutator table basis", "info",
                                "published rows for the complex pair are audited against the "
                                "real generators G4, G5"});

    bool jac = jacobi_check(report.computed);
    report.items.push_back({"jacobi identity", jac ? "pass" : "mismatch",
                            jac ? "holds for all triples via both routes" : "FAILS"});
    if (regime.kind == Damping::Under) {
        Expr g45 = Expr();
        bool abelian = true;
        for (std::size_t k2 = 0; k2 < 5; ++k2)
            if (!report.computed.coeffs[3][4][k2].is_zero_literal()) abelian = false;
        (void)g45;
        report.items.push_back({"[G4,G5]", abelian ? "pass" : "mismatch",
                                abelian ? "the translation pair is Abelian" : "nonzero bracket"});
    }

    // closed-form solution template
    {
        Expr uoft = cat.solution;
        Expr residual = uoft.diff("t", 2) + Expr(p.c / p.m) * uoft.diff("t") +
                        Expr(p.k / p.m) * uoft;
        bool ok = is_zero(residual);
        const CatalogNote* corr = correction_for("solution");
        report.items.push_back({"solution template",
                                ok ? (corr ? "corrected" : "pass") : "mismatch",
                                ok ? (corr ? corr->note
                                           : "satisfies the equation of motion identically")
                                   : "does not satisfy the equation of motion"});
    }

    if (regime.kind == Damping::Critical)
        report.items.push_back(
            {"novelty of X5", "info",
             "the claim that the fifth generator is absent from earlier catalogs cannot be "
             "audited without the cited reference; recorded as unverifiable"});

    return report;
}

std::optional<GaugeEquivalence> gauge_decompose(const Lagrangian& l1, const Lagrangian& l2) {
    auto quad_coeff = [](const Lagrangian& L) {
        auto by = collect_powers(L.expr, "u1");
        return by.count(2) ? by.at(2) : Expr();
    };
    Expr p1 = quad_coeff(l1), p2 = quad_coeff(l2);
    if (p1.is_zero_literal() || p2.is_zero_literal()) return std::nullopt;
    auto lambda = divide_exact(p1, p2);
    if (!lambda) return std::nullopt;
    for (const char* v : {"t", "u", "u1"})
        if (lambda->depends_on(v)) return std::nullopt;

    Expr delta = l1.expr - *lambda * l2.expr;
    std::map<long long, Expr> by_u1;
    try {
        by_u1 = collect_powers(delta, "u1");
    } catch (const UnsupportedExpressionError&) {
        return std::nullopt;
    }
    for (const auto& [pw, coeff] : by_u1)
        if (pw >= 2 && !is_zero(coeff)) return std::nullopt;

    Expr V = by_u1.count(1) ? by_u1.at(1) : Expr();
    Expr rest = by_u1.count(0) ? by_u1.at(0) : Expr();

    Expr F;
    for (const auto& [n, coeff] : collect_powers(V, "u")) {
        if (n < 0) return std::nullopt;
        F = F + Expr(Rational(1, n + 1)) * coeff * Expr::u().pow(Rational(n + 1));
    }
    Expr g = rest - F.diff("t");
    if (g.depends_on("u")) {
        Expr g0 = g.substitute({{"u", Expr()}});
        if (!is_zero(g - g0)) return std::nullopt;
        g = g0;
    }
    if (!g.is_zero_literal() && !is_zero(g)) {
        auto phi = antiderivative_t(g);
        if (!phi)
            throw UnsupportedExpressionError(
                "gauge decomposition: t-part has no closed-form antiderivative in this class");
        F = F + *phi;
    }
    F = F - F.substitute({{"t", Expr()}, {"u", Expr()}});

    Expr check = l1.expr - *lambda * l2.expr - (F.diff("t") + Expr::u1() * F.diff("u"));
    if (!is_zero(check)) return std::nullopt;
    return GaugeEquivalence{*lambda, F};
}

}  // namespace ndho

#include <doctest.h>

#include "ndho/catalog.hpp"
#include "ndho/export_json.hpp"
#include "ndho/parse.hpp"

using namespace ndho;

namespace {
Expr P(const std::string& s) { return parse_expr(s); }
}

TEST_SUITE("dho") {

TEST_CASE("classification is exact") {
    DampingRegime over = classify(Params(1, 3, 2));
    CHECK(over.kind == Damping::Over);
    CHECK(over.discriminant == Rational(1));

    DampingRegime under = classify(Params(1, 1, 1));
    CHECK(under.kind == Damping::Under);
    CHECK(under.discriminant == Rational(-3));

    DampingRegime critical = classify(Params(1, 2, 1));
    CHECK(critical.kind == Damping::Critical);
    CHECK(critical.discriminant == Rational(0));

    // boundary cases stay exact with rationals a float would misclassify
    CHECK(classify(Params(Rational(1, 3), Rational(2, 3), Rational(1, 3))).kind ==
          Damping::Critical);

    CHECK_THROWS_AS(Params(0, 1, 1), Error);
    CHECK_THROWS_AS(Params(1, -1, 1), Error);

    CHECK_THROWS_AS(classify_discriminant(P("c^2 - 4*k*m")), RegimeResolutionError);
    CHECK(classify_discriminant(Expr(5)).kind == Damping::Over);
}

TEST_CASE("classification is invariant under joint scaling") {
    Params base(1, 3, 2);
    for (Rational s : {Rational(2), Rational(1, 2), Rational(7, 3)}) {
        Params scaled(base.m * s, base.c * s, base.k * s);
        CHECK(classify(scaled).kind == classify(base).kind);
        CHECK(classify(scaled).discriminant == classify(base).discriminant * s * s);
    }
}

TEST_CASE("under-damped catalog stores the published trigonometric forms") {
    Params p(1, 1, 1);
    RegimeCatalog cat = catalog(classify(p), p);
    REQUIRE(cat.generators.size() == 5);

    Expr s3 = Expr::sqrt(Expr(3)), t = Expr::t(), u = Expr::u();
    Expr half(Rational(1, 2));
    CHECK(cat.generators[1].field ==
          VectorField(Expr::sin(s3 * t),
                      u * (half * s3 * Expr::cos(s3 * t) - half * Expr::sin(s3 * t))));
    CHECK(cat.names[3] == "G4");
    CHECK(cat.generators[3].field ==
          VectorField(Expr(), Expr::exp(-half * t) * Expr::cos(half * s3 * t)));
}

TEST_CASE("critical catalog integrals match the published list") {
    Params p(1, 2, 1);
    RegimeCatalog cat = catalog(classify(p), p);
    CHECK(cat.integrals[0].expr == P("exp(t)*(u + u1)"));
    CHECK(cat.integrals[2].expr == P("exp(2*t)*(u^2/2 + u*u1 + u1^2/2)"));
    CHECK(cat.solution == parse_expr("exp(-t)*(C1*t - C2)", {"C1", "C2"}));
}

TEST_CASE("over-damped translation integrals reduce to single exponentials") {
    Params p(1, 3, 2);
    RegimeCatalog cat = catalog(classify(p), p);
    CHECK(cat.integrals[3].expr == P("exp(t)*(u1 + 2*u)"));
    CHECK(cat.integrals[4].expr == P("exp(2*t)*(u1 + u)"));
}

TEST_CASE("every catalog integral is conserved symbolically and numerically") {
    for (Params p : {Params(1, 3, 2), Params(1, 1, 1), Params(1, 2, 1)}) {
        RegimeCatalog cat = catalog(classify(p), p);
        Lagrangian L(cat.lagrangian_expr);
        EquationOfMotion eom = euler_lagrange(L);
        std::vector<Trajectory> trajs;
        for (const auto& ic : standard_initial_conditions())
            trajs.push_back(integrate_rk4(p, ic, 10.0, 1e-3));
        for (const auto& I : cat.integrals) {
            CHECK(verify_symbolic(I, eom));
            for (const auto& traj : trajs) CHECK(conservation_drift(I, traj) < 1e-8);
        }
        for (std::size_t i = 0; i < cat.generators.size(); ++i)
            CHECK(check_noether(cat.generators[i].field, cat.generators[i].gauge, L));
    }
}

TEST_CASE("catalog solutions satisfy the equation of motion") {
    for (Params p : {Params(1, 3, 2), Params(1, 1, 1), Params(1, 2, 1)}) {
        RegimeCatalog cat = catalog(classify(p), p);
        Expr res = cat.solution.diff("t", 2) + Expr(p.c / p.m) * cat.solution.diff("t") +
                   Expr(p.k / p.m) * cat.solution;
        CHECK(is_zero(res));
    }
}

TEST_CASE("catalog rejects inconsistent parameters") {
    CHECK_THROWS_AS(catalog(classify(Params(1, 3, 2)), Params(1, 1, 1)), Error);
}

TEST_CASE("audit: over-damped flags the published X3 sign and solution typo") {
    AuditReport report = audit_catalog(classify(Params(1, 3, 2)), Params(1, 3, 2));
    CHECK(report.has_discrepancies());
    CHECK(report.all_checks_pass());

    auto find = [&](const std::string& item) -> const AuditItem* {
        for (const auto& it : report.items)
            if (it.item == item) return &it;
        return nullptr;
    };
    REQUIRE(find("generator X3") != nullptr);
    CHECK(find("generator X3")->status == "corrected");
    REQUIRE(find("generator X3 (as published)") != nullptr);
    CHECK(find("generator X3 (as published)")->status == "info");
    REQUIRE(find("solution template") != nullptr);
    CHECK(find("solution template")->status == "corrected");
    REQUIRE(find("commutator table") != nullptr);
    CHECK(find("commutator table")->status == "pass");
    REQUIRE(find("jacobi identity") != nullptr);
    CHECK(find("jacobi identity")->status == "pass");
}

TEST_CASE("audit: under-damped confirms the Abelian pair and clean table") {
    AuditReport report = audit_catalog(classify(Params(1, 1, 1)), Params(1, 1, 1));
    CHECK(report.all_checks_pass());
    CHECK(!report.has_discrepancies());
    bool found_abelian = false;
    for (const auto& it : report.items)
        if (it.item == "[G4,G5]") {
            found_abelian = true;
            CHECK(it.status == "pass");
        }
    CHECK(found_abelian);
}

TEST_CASE("audit: critical catalog is fully consistent") {
    AuditReport report = audit_catalog(classify(Params(1, 2, 1)), Params(1, 2, 1));
    CHECK(report.all_checks_pass());
    CHECK(!report.has_discrepancies());
    for (const auto& it : report.items)
        if (it.item.rfind("integral I", 0) == 0) CHECK(it.status == "pass");
}

TEST_CASE("gauge_decompose recovers the published equivalence") {
    auto eq = gauge_decompose(alternative_lagrangian(), bateman_lagrangian());
    REQUIRE(eq.has_value());
    CHECK(eq->scale == P("1/m"));
    CHECK(eq->F == P("c*u^2*exp(c*t/m)/(4*m)"));

    // D(F) reproduces the difference exactly
    Expr df = eq->F.diff("t") + Expr::u1() * eq->F.diff("u");
    CHECK((alternative_lagrangian().expr - eq->scale * bateman_lagrangian().expr - df)
              .is_zero_literal());
}

TEST_CASE("gauge_decompose: identity and failure cases") {
    Lagrangian L = bateman_lagrangian();
    auto self = gauge_decompose(L, L);
    REQUIRE(self.has_value());
    CHECK(self->scale == Expr(1));
    CHECK(self->F.is_zero_literal());

    CHECK(gauge_decompose(L, Lagrangian(P("1/2*u1^2"))) == std::nullopt);
}

TEST_CASE("json export shapes") {
    Params p(1, 2, 1);
    RegimeCatalog cat = catalog(classify(p), p);
    AuditReport report = audit_catalog(classify(p), p);

    ordered_json tbl = table_json(report.computed);
    CHECK(tbl["basis"].size() == 5);
    CHECK(tbl["entries"].size() == 25);
    CHECK(tbl["entries"][0]["coeffs"].size() == 5);

    ordered_json cj = catalog_json(cat, &report);
    CHECK(cj["regime"] == "critical");
    CHECK(cj["params"]["m"] == "1");
    CHECK(cj["generators"].size() == 5);
    CHECK(cj["integrals"].size() == 5);
    CHECK(cj["audit"].size() == report.items.size());

    // round-trip: exported expression strings parse back to the stored forms
    for (std::size_t i = 0; i < 5; ++i) {
        CHECK(parse_expr(cj["generators"][i]["xi"].get<std::string>()) ==
              cat.generators[i].field.xi);
        CHECK(parse_expr(cj["generators"][i]["eta"].get<std::string>()) ==
              cat.generators[i].field.eta);
    }
}

}  // TEST_SUITE

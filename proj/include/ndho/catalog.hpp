#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "ndho/conservation.hpp"
#include "ndho/liealgebra.hpp"

namespace ndho {

struct CatalogNote {
    std::string item;
    std::string note;
};

// Published generator/integral/solution data for one damping regime,
// instantiated at exact parameters. Every stored generator passes the
// symmetry condition with its derived gauge and every stored integral is
// conserved; where the published form had to be amended to achieve that,
// the amendment is recorded under corrections and re-reported by the audit.
struct RegimeCatalog {
    DampingRegime regime;
    Params params;
    Expr lagrangian_expr;  // exponential-in-time quadratic form at the parameters

    std::vector<std::string> names;
    std::vector<NoetherSymmetry> generators;
    std::vector<FirstIntegral> integrals;

    Expr solution;  // u(t) in the two named constants
    std::array<std::string, 2> solution_constants;
    std::string constant_map;  // how the constants relate to the integrals

    CommutatorTable claimed;  // published commutator entries (basis = generators)
    std::vector<CatalogNote> corrections;
};

RegimeCatalog catalog(const DampingRegime& regime, const Params& p);

struct AuditItem {
    std::string item;
    std::string status;  // pass | corrected | mismatch | info
    std::string note;
};

struct AuditReport {
    std::vector<AuditItem> items;
    CommutatorTable computed;

    bool has_discrepancies() const {
        for (const auto& it : items)
            if (it.status == "corrected" || it.status == "mismatch") return true;
        return false;
    }
    bool all_checks_pass() const {
        for (const auto& it : items)
            if (it.status == "mismatch") return false;
        return true;
    }
};

// Runs the full consistency pipeline over the catalog: symmetry condition
// per generator, symbolic and numeric conservation per integral, solver span
// versus catalog span, structure constants against the published table,
// Jacobi closure, and the solution template. Failures become report content.
AuditReport audit_catalog(const DampingRegime& regime, const Params& p);

struct GaugeEquivalence {
    Expr scale;  // lambda, a function of the parameters only
    Expr F;      // F(t, u) with F(0,0) = 0
};

// Finds lambda and F with L1 = lambda L2 + D(F), or nullopt when the two
// Lagrangians are not gauge-equivalent.
std::optional<GaugeEquivalence> gauge_decompose(const Lagrangian& l1, const Lagrangian& l2);

}  // namespace ndho

#include "ndho/export_json.hpp"

namespace ndho {

ordered_json params_json(const Params& p) {
    return ordered_json{{"m", p.m.str()}, {"c", p.c.str()}, {"k", p.k.str()}};
}

ordered_json table_json(const CommutatorTable& table) {
    ordered_json out;
    out["basis"] = table.names;
    ordered_json entries = ordered_json::array();
    std::size_t n = table.basis.size();
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            ordered_json entry;
            entry["i"] = i;
            entry["j"] = j;
            ordered_json coeffs = ordered_json::array();
            for (std::size_t k = 0; k < n; ++k) coeffs.push_back(table.coeffs[i][j][k].str());
            entry["coeffs"] = coeffs;
            entries.push_back(entry);
        }
    }
    out["entries"] = entries;
    return out;
}

ordered_json catalog_json(const RegimeCatalog& cat, const AuditReport* report) {
    ordered_json out;
    out["regime"] = cat.regime.name();
    out["discriminant"] = cat.regime.discriminant.str();
    out["params"] = params_json(cat.params);
    out["lagrangian"] = cat.lagrangian_expr.str();

    ordered_json gens = ordered_json::array();
    for (std::size_t i = 0; i < cat.generators.size(); ++i) {
        ordered_json g;
        g["name"] = cat.names[i];
        g["xi"] = cat.generators[i].field.xi.str();
        g["eta"] = cat.generators[i].field.eta.str();
        g["gauge"] = cat.generators[i].gauge.B.str();
        gens.push_back(g);
    }
    out["generators"] = gens;

    ordered_json ints = ordered_json::array();
    for (const auto& I : cat.integrals) ints.push_back(I.expr.str());
    out["integrals"] = ints;

    out["solution"] = cat.solution.str();
    out["solution_constants"] = cat.constant_map;

    out["table"] = table_json(report ? report->computed : cat.claimed);

    ordered_json audit = ordered_json::array();
    if (report) {
        for (const auto& item : report->items)
            audit.push_back(ordered_json{{"item", item.item},
                                         {"status", item.status},
                                         {"note", item.note}});
    }
    out["audit"] = audit;
    return out;
}

}  // namespace ndho

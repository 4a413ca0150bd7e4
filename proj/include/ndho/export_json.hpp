#pragma once

#include <json.hpp>

#include "ndho/catalog.hpp"

namespace ndho {

using ordered_json = nlohmann::ordered_json;

// {basis: [names], entries: [{i, j, coeffs: [strings]}]} over all ordered pairs.
ordered_json table_json(const CommutatorTable& table);

// {regime, params, generators, integrals, solution, table, audit}; the audit
// array is empty unless a report is supplied.
ordered_json catalog_json(const RegimeCatalog& cat, const AuditReport* report = nullptr);

ordered_json params_json(const Params& p);

}  // namespace ndho

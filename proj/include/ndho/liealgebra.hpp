#pragma once

#include <string>
#include <vector>

#include "ndho/noether.hpp"

namespace ndho {

// [Z1, Z2] = (Z1(xi2) - Z2(xi1)) d/dt + (Z1(eta2) - Z2(eta1)) d/du
VectorField bracket(const VectorField& z1, const VectorField& z2);

// Structure constants of a generator basis: coeffs[i][j][k] is the
// coefficient of basis k in [X_i, X_j] (expressions in the parameters,
// exact). Antisymmetric with a zero diagonal.
struct CommutatorTable {
    std::vector<std::string> names;
    std::vector<VectorField> basis;
    std::vector<std::vector<std::vector<Expr>>> coeffs;

    Expr coefficient(std::size_t i, std::size_t j, std::size_t k) const {
        return coeffs[i][j][k];
    }
};

// Expands every bracket in the basis: a numeric fit at sampled (t, u) points
// proposes the coefficients, then an exact symbolic residual check confirms
// them. Throws DependentBasisError or NotClosedError.
CommutatorTable structure_constants(const std::vector<VectorField>& basis, const Params& p,
                                    std::vector<std::string> names = {});

// Jacobi identity on all triples, computed twice: from raw brackets and from
// the structure constants. Both routes must agree and vanish.
bool jacobi_check(const CommutatorTable& table);

}  // namespace ndho

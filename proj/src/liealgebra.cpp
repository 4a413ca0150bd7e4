#include "ndho/liealgebra.hpp"

#include <cmath>
#include <random>

#include "ndho/smallmat.hpp"

namespace ndho {

VectorField bracket(const VectorField& z1, const VectorField& z2) {
    return VectorField(apply_field(z1, z2.xi) - apply_field(z2, z1.xi),
                       apply_field(z1, z2.eta) - apply_field(z2, z1.eta));
}

namespace {

constexpr int kFitPoints = 8;

// Proposes an exact coefficient from a fitted double: a rational, or a
// rational multiple of the regime radical.
std::optional<Expr> recognize(double x, const Expr& radical, double radical_value) {
    if (std::abs(x) < 1e-9) return Expr();
    if (auto r = Rational::from_double(x, 64, 1e-9)) return Expr(*r);
    if (radical_value > 0.0) {
        if (auto r = Rational::from_double(x / radical_value, 64, 1e-9))
            return Expr(*r) * radical;
    }
    return std::nullopt;
}

}  // namespace

CommutatorTable structure_constants(const std::vector<VectorField>& basis, const Params& p,
                                    std::vector<std::string> names) {
    std::size_t n = basis.size();
    if (n == 0) throw DependentBasisError("empty basis");
    if (names.empty())
        for (std::size_t i = 0; i < n; ++i) names.push_back("X" + std::to_string(i + 1));
    if (names.size() != n) throw Error("basis/name size mismatch");

    std::vector<VectorField> at_params;
    at_params.reserve(n);
    for (const auto& z : basis)
        at_params.emplace_back(z.xi.substitute(p.binding()), z.eta.substitute(p.binding()));

    if (span_rank(at_params) != static_cast<int>(n))
        throw DependentBasisError("basis fields are linearly dependent");

    Expr radical = regime_radical(p);
    double radical_value = radical.is_zero_literal() ? 0.0 : radical.eval({});

    std::mt19937 rng(0xFACADEu);
    std::uniform_real_distribution<double> mag(0.2, 1.7);
    std::uniform_int_distribution<int> flip(0, 1);
    std::vector<Assignment> points;
    for (int i = 0; i < kFitPoints; ++i)
        points.push_back({{"t", (flip(rng) ? 1.0 : -1.0) * mag(rng)},
                          {"u", (flip(rng) ? 1.0 : -1.0) * mag(rng)}});

    smallmat::Matrix design(2 * kFitPoints, std::vector<double>(n, 0.0));
    for (int pt = 0; pt < kFitPoints; ++pt)
        for (std::size_t k = 0; k < n; ++k) {
            design[2 * pt][k] = at_params[k].xi.eval(points[pt]);
            design[2 * pt + 1][k] = at_params[k].eta.eval(points[pt]);
        }

    CommutatorTable table;
    table.names = std::move(names);
    table.basis = at_params;
    table.coeffs.assign(n, std::vector<std::vector<Expr>>(n, std::vector<Expr>(n)));

    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            VectorField br = bracket(at_params[i], at_params[j]);
            std::vector<double> rhs(2 * kFitPoints);
            for (int pt = 0; pt < kFitPoints; ++pt) {
                rhs[2 * pt] = br.xi.eval(points[pt]);
                rhs[2 * pt + 1] = br.eta.eval(points[pt]);
            }
            auto fit = smallmat::solve_least_squares(design, rhs);
            if (!fit)
                throw NotClosedError("bracket [" + table.names[i] + "," + table.names[j] +
                                     "] could not be fitted in the basis");
            std::vector<Expr> coeffs(n);
            VectorField residual = br;
            for (std::size_t k = 0; k < n; ++k) {
                auto ck = recognize((*fit)[k], radical, radical_value);
                if (!ck)
                    throw NotClosedError("bracket [" + table.names[i] + "," + table.names[j] +
                                         "] has a coefficient outside the rational-radical field");
                coeffs[k] = *ck;
                residual = residual + (-*ck) * at_params[k];
            }
            if (!is_zero(residual.xi) || !is_zero(residual.eta))
                throw NotClosedError("bracket [" + table.names[i] + "," + table.names[j] +
                                     "] does not lie in the span of the basis");
            table.coeffs[i][j] = coeffs;
            for (std::size_t k = 0; k < n; ++k) table.coeffs[j][i][k] = -coeffs[k];
        }
        for (std::size_t k = 0; k < n; ++k) table.coeffs[i][i][k] = Expr();
    }
    return table;
}

bool jacobi_check(const CommutatorTable& table) {
    std::size_t n = table.basis.size();
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            for (std::size_t k = j + 1; k < n; ++k) {
                // raw route
                VectorField raw = bracket(table.basis[i], bracket(table.basis[j], table.basis[k])) +
                                  bracket(table.basis[j], bracket(table.basis[k], table.basis[i])) +
                                  bracket(table.basis[k], bracket(table.basis[i], table.basis[j]));
                bool raw_zero = is_zero(raw.xi) && is_zero(raw.eta);

                // structure-constant route: sum_l c_jk^l c_il^m + cyclic
                bool coeff_zero = true;
                for (std::size_t mi = 0; mi < n && coeff_zero; ++mi) {
                    Expr total;
                    for (std::size_t l = 0; l < n; ++l) {
                        total = total + table.coeffs[j][k][l] * table.coeffs[i][l][mi];
                        total = total + table.coeffs[k][i][l] * table.coeffs[j][l][mi];
                        total = total + table.coeffs[i][j][l] * table.coeffs[k][l][mi];
                    }
                    if (!is_zero(total)) coeff_zero = false;
                }
                if (raw_zero != coeff_zero || !raw_zero) return false;
            }
        }
    }
    return true;
}

}  // namespace ndho

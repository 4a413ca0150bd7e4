#include "ndho/smallmat.hpp"

#include <algorithm>
#include <cmath>

namespace ndho::smallmat {

int rank(Matrix a, double tol) {
    if (a.empty() || a[0].empty()) return 0;
    std::size_t rows = a.size(), cols = a[0].size();
    double scale = 0.0;
    for (const auto& r : a)
        for (double v : r) scale = std::max(scale, std::abs(v));
    if (scale == 0.0) return 0;
    double thresh = tol * scale;

    int rk = 0;
    std::size_t row = 0;
    for (std::size_t col = 0; col < cols && row < rows; ++col) {
        std::size_t pivot = row;
        for (std::size_t r = row + 1; r < rows; ++r)
            if (std::abs(a[r][col]) > std::abs(a[pivot][col])) pivot = r;
        if (std::abs(a[pivot][col]) <= thresh) continue;
        std::swap(a[pivot], a[row]);
        for (std::size_t r = 0; r < rows; ++r) {
            if (r == row) continue;
            double f = a[r][col] / a[row][col];
            for (std::size_t c2 = col; c2 < cols; ++c2) a[r][c2] -= f * a[row][c2];
        }
        ++row;
        ++rk;
    }
    return rk;
}

std::optional<std::vector<double>> solve_least_squares(const Matrix& a,
                                                       const std::vector<double>& b) {
    if (a.empty()) return std::nullopt;
    std::size_t rows = a.size(), cols = a[0].size();
    if (b.size() != rows) return std::nullopt;

    Matrix ata(cols, std::vector<double>(cols + 1, 0.0));  // augmented [A^T A | A^T b]
    for (std::size_t i = 0; i < cols; ++i) {
        for (std::size_t j = 0; j < cols; ++j)
            for (std::size_t r = 0; r < rows; ++r) ata[i][j] += a[r][i] * a[r][j];
        for (std::size_t r = 0; r < rows; ++r) ata[i][cols] += a[r][i] * b[r];
    }

    double scale = 0.0;
    for (std::size_t i = 0; i < cols; ++i)
        for (std::size_t j = 0; j < cols; ++j) scale = std::max(scale, std::abs(ata[i][j]));
    if (scale == 0.0) return std::nullopt;

    for (std::size_t col = 0; col < cols; ++col) {
        std::size_t pivot = col;
        for (std::size_t r = col + 1; r < cols; ++r)
            if (std::abs(ata[r][col]) > std::abs(ata[pivot][col])) pivot = r;
        if (std::abs(ata[pivot][col]) <= 1e-12 * scale) return std::nullopt;
        std::swap(ata[pivot], ata[col]);
        for (std::size_t r = 0; r < cols; ++r) {
            if (r == col) continue;
            double f = ata[r][col] / ata[col][col];
            for (std::size_t c2 = col; c2 <= cols; ++c2) ata[r][c2] -= f * ata[col][c2];
        }
    }
    std::vector<double> x(cols);
    for (std::size_t i = 0; i < cols; ++i) x[i] = ata[i][cols] / ata[i][i];
    return x;
}

}  // namespace ndho::smallmat

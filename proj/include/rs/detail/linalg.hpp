#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace rs::detail {

/// Solves A x = b by Gaussian elimination with partial pivoting. A is
/// row-major n x n. Throws on (numerically) singular systems.
inline std::vector<double> solve_dense(std::vector<double> a, std::vector<double> b) {
    const std::size_t n = b.size();
    if (a.size() != n * n) throw std::invalid_argument("solve_dense: shape mismatch");
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t pivot = col;
        for (std::size_t r = col + 1; r < n; ++r)
            if (std::abs(a[r * n + col]) > std::abs(a[pivot * n + col])) pivot = r;
        if (std::abs(a[pivot * n + col]) < 1e-300) throw std::runtime_error("solve_dense: singular");
        if (pivot != col) {
            for (std::size_t c = 0; c < n; ++c) std::swap(a[col * n + c], a[pivot * n + c]);
            std::swap(b[col], b[pivot]);
        }
        for (std::size_t r = col + 1; r < n; ++r) {
            double f = a[r * n + col] / a[col * n + col];
            if (f == 0.0) continue;
            for (std::size_t c = col; c < n; ++c) a[r * n + c] -= f * a[col * n + c];
            b[r] -= f * b[col];
        }
    }
    std::vector<double> x(n);
    for (std::size_t i = n; i-- > 0;) {
        double s = b[i];
        for (std::size_t c = i + 1; c < n; ++c) s -= a[i * n + c] * x[c];
        x[i] = s / a[i * n + i];
    }
    return x;
}

/// Least squares min ||A x - b|| via normal equations; A is m x n row-major,
/// m >= n. Fine for the small, well-conditioned systems used here.
inline std::vector<double> lstsq(const std::vector<double>& a, const std::vector<double>& b,
                                 std::size_t m, std::size_t n) {
    if (a.size() != m * n || b.size() != m) throw std::invalid_argument("lstsq: shape mismatch");
    std::vector<double> ata(n * n, 0.0), atb(n, 0.0);
    for (std::size_t r = 0; r < m; ++r) {
        for (std::size_t i = 0; i < n; ++i) {
            atb[i] += a[r * n + i] * b[r];
            for (std::size_t j = 0; j < n; ++j) ata[i * n + j] += a[r * n + i] * a[r * n + j];
        }
    }
    return solve_dense(std::move(ata), std::move(atb));
}

}  // namespace rs::detail

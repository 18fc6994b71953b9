#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace rs {

/// One-dimensional dyadic lattice 2^{-n} Z intersected with [xmin, xmax].
struct DyadicGrid {
    int level = 0;
    double xmin = 0.0;
    double xmax = 1.0;

    DyadicGrid() = default;
    DyadicGrid(int n, double a, double b) : level(n), xmin(a), xmax(b) {
        if (!(a < b)) throw std::invalid_argument("DyadicGrid: empty box");
    }

    double spacing() const { return std::ldexp(1.0, -level); }

    std::int64_t first_index() const { return static_cast<std::int64_t>(std::ceil(xmin / spacing() - 1e-12)); }
    std::int64_t last_index() const { return static_cast<std::int64_t>(std::floor(xmax / spacing() + 1e-12)); }
    std::size_t size() const { return static_cast<std::size_t>(last_index() - first_index() + 1); }

    double point(std::size_t i) const { return static_cast<double>(first_index() + static_cast<std::int64_t>(i)) * spacing(); }

    std::vector<double> points() const {
        std::vector<double> out(size());
        for (std::size_t i = 0; i < out.size(); ++i) out[i] = point(i);
        return out;
    }

    /// The next finer grid over the same box; Λ^n ⊂ Λ^{n+1}.
    DyadicGrid refine() const { return DyadicGrid(level + 1, xmin, xmax); }
};

}  // namespace rs

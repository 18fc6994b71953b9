#pragma once

#include "rs/grid.hpp"
#include "rs/rng.hpp"

#include <cmath>
#include <functional>
#include <memory>
#include <stdexcept>
#include <variant>
#include <vector>

namespace rs {

/// Test function with known support, the only thing a distribution proxy can
/// be paired against.
struct TestFn {
    std::function<double(double)> fn;
    double lo = 0.0;
    double hi = 1.0;

    double operator()(double y) const { return fn(y); }
};

/// Pointwise closure; pairing is midpoint quadrature on a dyadic lattice at
/// quad_level.
struct AnalyticFn {
    std::function<double(double)> fn;
    int quad_level = 12;
};

/// Samples at the nodes of a uniform dyadic grid; pairing is the node sum
/// weighted by the cell size.
struct GridFn {
    DyadicGrid grid;
    std::vector<double> values;

    double value_at(double x) const {
        double pos = (x - grid.point(0)) / grid.spacing();
        if (pos <= 0.0) return values.front();
        auto i = static_cast<std::size_t>(pos);
        if (i + 1 >= values.size()) return values.back();
        double f = pos - static_cast<double>(i);
        return values[i] * (1.0 - f) + values[i + 1] * f;
    }
};

/// Per-cell masses attached to left endpoints (noise increments, path
/// increments); pairing is the weighted sum over cells.
struct CellMeasure {
    std::vector<double> points;  // left endpoints
    std::vector<double> masses;
};

class DistributionProxy {
public:
    DistributionProxy() : data_(AnalyticFn{[](double) { return 0.0; }, 8}) {}
    DistributionProxy(AnalyticFn f) : data_(std::move(f)) {}
    DistributionProxy(GridFn g) : data_(std::move(g)) {}
    DistributionProxy(CellMeasure m) : data_(std::move(m)) {}

    static DistributionProxy constant(double c, int quad_level = 12) {
        return DistributionProxy(AnalyticFn{[c](double) { return c; }, quad_level});
    }

    double pair(const TestFn& psi) const {
        if (const auto* a = std::get_if<AnalyticFn>(&data_)) {
            double h = std::ldexp(1.0, -a->quad_level);
            auto n = static_cast<std::int64_t>(std::ceil((psi.hi - psi.lo) / h));
            double s = 0.0;
            for (std::int64_t i = 0; i < n; ++i) {
                double y = psi.lo + (static_cast<double>(i) + 0.5) * h;
                s += a->fn(y) * psi.fn(y);
            }
            return s * h;
        }
        if (const auto* g = std::get_if<GridFn>(&data_)) {
            double s = 0.0;
            double h = g->grid.spacing();
            for (std::size_t i = 0; i < g->values.size(); ++i) {
                double y = g->grid.point(i);
                if (y < psi.lo - h || y > psi.hi + h) continue;
                s += g->values[i] * psi.fn(y);
            }
            return s * h;
        }
        const auto& m = std::get<CellMeasure>(data_);
        double s = 0.0;
        for (std::size_t i = 0; i < m.points.size(); ++i) {
            double y = m.points[i];
            if (y < psi.lo || y > psi.hi) continue;
            s += m.masses[i] * psi.fn(y);
        }
        return s;
    }

    bool is_continuous() const { return !std::holds_alternative<CellMeasure>(data_); }

    /// Pointwise value, defined for the continuous alternatives only.
    double value_at(double x) const {
        if (const auto* a = std::get_if<AnalyticFn>(&data_)) return a->fn(x);
        if (const auto* g = std::get_if<GridFn>(&data_)) return g->value_at(x);
        throw std::logic_error("DistributionProxy: cell measures have no pointwise values");
    }

    /// The proxy for w(y) * (this), with the same representation.
    DistributionProxy multiplied_by(std::function<double(double)> w) const {
        if (const auto* a = std::get_if<AnalyticFn>(&data_)) {
            auto base = a->fn;
            return DistributionProxy(AnalyticFn{[base, w](double y) { return w(y) * base(y); }, a->quad_level});
        }
        if (const auto* g = std::get_if<GridFn>(&data_)) {
            GridFn out = *g;
            for (std::size_t i = 0; i < out.values.size(); ++i) out.values[i] *= w(out.grid.point(i));
            return DistributionProxy(std::move(out));
        }
        CellMeasure out = std::get<CellMeasure>(data_);
        for (std::size_t i = 0; i < out.points.size(); ++i) out.masses[i] *= w(out.points[i]);
        return DistributionProxy(std::move(out));
    }

    const GridFn* as_grid() const { return std::get_if<GridFn>(&data_); }
    const CellMeasure* as_cells() const { return std::get_if<CellMeasure>(&data_); }

private:
    std::variant<AnalyticFn, GridFn, CellMeasure> data_;
};

/// White noise restricted to a grid: independent centred Gaussians per cell
/// with variance equal to the cell volume.
inline DistributionProxy grid_white_noise(const DyadicGrid& grid, std::uint64_t seed) {
    auto eng = seeded_engine(seed);
    std::normal_distribution<double> normal(0.0, std::sqrt(grid.spacing()));
    CellMeasure m;
    std::size_t cells = grid.size() - 1;
    m.points.resize(cells);
    m.masses.resize(cells);
    for (std::size_t i = 0; i < cells; ++i) {
        m.points[i] = grid.point(i);
        m.masses[i] = normal(eng);
    }
    return DistributionProxy(std::move(m));
}

}  // namespace rs

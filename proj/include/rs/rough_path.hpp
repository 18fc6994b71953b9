#pragma once

#include "rs/fit.hpp"
#include "rs/model.hpp"

#include <cmath>
#include <cstdint>
#include <fstream>
#include <functional>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace rs {

// ---------------------------------------------------------------------------
// alpha-Hoelder rough paths on a dyadic time grid. The iterated integrals are
// stored through their base-point form A_t = XX_{0,t}; general increments are
// recovered through Chen's relation
//   XX_{s,t} = A_t - A_s - X_{0,s} (x) X_{s,t},
// so the relation holds identically for every grid triple by construction.
// ---------------------------------------------------------------------------

struct RoughPath {
    DyadicGrid grid;                   // time grid
    int dim = 1;                       // n components
    Homogeneity alpha{Rational(2, 5)}; // Hoelder exponent, exact
    std::vector<std::vector<double>> x;  // x[j][i]: component j at node i
    std::vector<std::vector<double>> a;  // a[j*dim+k][i]: XX^{j,k}_{0,t_i}

    std::size_t nodes() const { return grid.size(); }
    double time(std::size_t i) const { return grid.point(i); }

    double increment(int j, std::size_t i0, std::size_t i1) const { return x[j][i1] - x[j][i0]; }

    /// XX^{j,k}_{s,t} for grid nodes s = t_{i0}, t = t_{i1}.
    double xx(int j, int k, std::size_t i0, std::size_t i1) const {
        const auto& ajk = a[static_cast<std::size_t>(j) * dim + k];
        return ajk[i1] - ajk[i0] - (x[j][i0] - x[j][0]) * (x[k][i1] - x[k][i0]);
    }

    /// Worst Chen defect over sampled triples; zero up to rounding by
    /// construction, kept as an honest invariant check.
    double chen_residual(int samples = 64, unsigned seed = 3) const {
        auto eng = seeded_engine(seed);
        std::uniform_int_distribution<std::size_t> pick(0, nodes() - 1);
        double worst = 0.0;
        for (int it = 0; it < samples; ++it) {
            std::size_t s = pick(eng), u = pick(eng), t = pick(eng);
            for (int j = 0; j < dim; ++j)
                for (int k = 0; k < dim; ++k) {
                    double lhs = xx(j, k, s, t) - xx(j, k, s, u) - xx(j, k, u, t);
                    double rhs = increment(j, s, u) * increment(k, u, t);
                    worst = std::max(worst, std::abs(lhs - rhs));
                }
        }
        return worst;
    }

    /// Fitted Hoelder constants: sup |X_{s,t}| / |t-s|^alpha and
    /// sup |XX_{s,t}| / |t-s|^{2 alpha} over dyadic spacings.
    std::pair<double, double> hoelder_constants() const {
        double av = alpha.value(0.0);
        double cx = 0.0, cxx = 0.0;
        for (int lev = 0; lev + 1 < grid.level; ++lev) {
            std::size_t step = std::size_t{1} << (grid.level - lev);
            if (step >= nodes()) continue;
            for (std::size_t i = 0; i + step < nodes(); i += step) {
                double dt = time(i + step) - time(i);
                for (int j = 0; j < dim; ++j) {
                    cx = std::max(cx, std::abs(increment(j, i, i + step)) / std::pow(dt, av));
                    for (int k = 0; k < dim; ++k)
                        cxx = std::max(cxx, std::abs(xx(j, k, i, i + step)) / std::pow(dt, 2 * av));
                }
            }
        }
        return {cx, cxx};
    }
};

enum class PathKind { brownian, smooth_poly, smooth_trig };

/// Brownian sample: Gaussian increments on a grid two levels finer than
/// requested, iterated integrals by left-point Riemann sums there, then both
/// subsampled. Smooth test paths: closed-form coordinates with A_t by
/// composite Simpson quadrature of X_{0,r} dX_r.
inline RoughPath sample_rough_path(PathKind kind, int n, const DyadicGrid& grid,
                                   std::uint64_t seed, Homogeneity alpha = Homogeneity(Rational(2, 5))) {
    RoughPath rp;
    rp.grid = grid;
    rp.dim = n;
    rp.alpha = alpha;
    const std::size_t nodes = grid.size();
    rp.x.assign(n, std::vector<double>(nodes, 0.0));
    rp.a.assign(static_cast<std::size_t>(n) * n, std::vector<double>(nodes, 0.0));

    if (kind == PathKind::brownian) {
        const int refine = 2;
        DyadicGrid fine = grid;
        for (int r = 0; r < refine; ++r) fine = fine.refine();
        const std::size_t fn = fine.size();
        const double h = fine.spacing();
        auto eng = seeded_engine(seed);
        std::normal_distribution<double> normal(0.0, std::sqrt(h));
        std::vector<std::vector<double>> xf(n, std::vector<double>(fn, 0.0));
        for (int j = 0; j < n; ++j)
            for (std::size_t i = 1; i < fn; ++i) xf[j][i] = xf[j][i - 1] + normal(eng);
        std::vector<std::vector<double>> af(static_cast<std::size_t>(n) * n,
                                            std::vector<double>(fn, 0.0));
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k) {
                auto& ajk = af[static_cast<std::size_t>(j) * n + k];
                for (std::size_t i = 1; i < fn; ++i)
                    ajk[i] = ajk[i - 1] + (xf[j][i - 1] - xf[j][0]) * (xf[k][i] - xf[k][i - 1]);
            }
        const std::size_t stride = std::size_t{1} << refine;
        for (std::size_t i = 0; i < nodes; ++i) {
            for (int j = 0; j < n; ++j) rp.x[j][i] = xf[j][i * stride];
            for (std::size_t jk = 0; jk < rp.a.size(); ++jk) rp.a[jk][i] = af[jk][i * stride];
        }
        return rp;
    }

    // smooth test paths with closed-form coordinates
    std::vector<std::function<double(double)>> coord, dcoord;
    if (kind == PathKind::smooth_poly) {
        if (n != 2) throw std::invalid_argument("smooth_poly path has two components (t, t^2)");
        coord = {[](double t) { return t; }, [](double t) { return t * t; }};
        dcoord = {[](double) { return 1.0; }, [](double t) { return 2.0 * t; }};
    } else {
        coord.resize(n);
        dcoord.resize(n);
        for (int j = 0; j < n; ++j) {
            double w = 2.0 * std::numbers::pi * (j + 1);
            coord[j] = [w, j](double t) { return std::sin(w * t) + 0.3 * j; };
            dcoord[j] = [w](double t) { return w * std::cos(w * t); };
        }
    }
    for (int j = 0; j < n; ++j)
        for (std::size_t i = 0; i < nodes; ++i) rp.x[j][i] = coord[j](rp.time(i));
    // A^{jk}_t = int_0^t (X^j_r - X^j_0) dX^k_r, composite Simpson per step
    for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) {
            auto& ajk = rp.a[static_cast<std::size_t>(j) * n + k];
            auto integrand = [&](double r) { return (coord[j](r) - coord[j](rp.time(0))) * dcoord[k](r); };
            for (std::size_t i = 1; i < nodes; ++i) {
                double lo = rp.time(i - 1), hi = rp.time(i);
                const int sub = 8;
                double step = (hi - lo) / sub, s = 0.0;
                for (int q = 0; q < sub; ++q) {
                    double a0 = lo + q * step;
                    s += step / 6.0 * (integrand(a0) + 4.0 * integrand(a0 + step / 2.0) + integrand(a0 + step));
                }
                ajk[i] = ajk[i - 1] + s;
            }
        }
    return rp;
}

// --- the controlled rough path model ----------------------------------------

/// Structure A = {alpha-1, 2 alpha-1, 0, alpha} with symbols Xi_j, W_j Xi_i,
/// 1, W_j; Gamma_{su} = Gamma_{X_{s,u}}; noise symbols realised as cell
/// measures built from path and area increments (left-point rule, matching
/// the construction of XX).
inline Model rough_path_model(const RoughPath& rp, double chen_tol = 1e-10) {
    if (rp.chen_residual() > chen_tol)
        throw std::invalid_argument("rough_path_model: Chen relation violated beyond tolerance");
    const int n = rp.dim;
    Model m;
    // increasing degrees: alpha-1 < 2 alpha-1 < 0 < alpha for alpha in (1/3, 1/2)
    std::vector<std::pair<int, int>> wxi_index;  // (j, i) pairs in basis order
    for (int j = 0; j < n; ++j) m.basis.add(rp.alpha + Homogeneity(-1), "Xi_" + std::to_string(j + 1));
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) {
            m.basis.add(2 * rp.alpha + Homogeneity(-1),
                        "W_" + std::to_string(j + 1) + "*Xi_" + std::to_string(i + 1));
            wxi_index.emplace_back(j, i);
        }
    m.basis.add(Homogeneity(0), "1");
    for (int j = 0; j < n; ++j) m.basis.add(rp.alpha, "W_" + std::to_string(j + 1));

    auto path = std::make_shared<RoughPath>(rp);
    const std::size_t nodes = path->nodes();

    auto node_of = [path](double s) {
        double pos = (s - path->time(0)) / path->grid.spacing();
        auto i = static_cast<std::int64_t>(std::llround(pos));
        if (i < 0) i = 0;
        if (i >= static_cast<std::int64_t>(path->nodes())) i = static_cast<std::int64_t>(path->nodes()) - 1;
        return static_cast<std::size_t>(i);
    };

    m.pi = [path, n, node_of, nodes](double s, std::size_t sym) -> DistributionProxy {
        const std::size_t nxi = static_cast<std::size_t>(n);
        const std::size_t nwxi = nxi * nxi;
        std::size_t s_idx = node_of(s);
        if (sym < nxi) {  // Xi_j: psi -> int psi dX^j
            int j = static_cast<int>(sym);
            CellMeasure cm;
            cm.points.resize(nodes - 1);
            cm.masses.resize(nodes - 1);
            for (std::size_t i = 0; i + 1 < nodes; ++i) {
                cm.points[i] = path->time(i);
                cm.masses[i] = path->increment(j, i, i + 1);
            }
            return DistributionProxy(std::move(cm));
        }
        if (sym < nxi + nwxi) {  // W_j Xi_i: psi -> int psi dXX^{j,i}_{s,.}
            std::size_t off = sym - nxi;
            int j = static_cast<int>(off / nxi), i = static_cast<int>(off % nxi);
            CellMeasure cm;
            cm.points.resize(nodes - 1);
            cm.masses.resize(nodes - 1);
            for (std::size_t q = 0; q + 1 < nodes; ++q) {
                cm.points[q] = path->time(q);
                // d XX^{j,i}_{s,t} at t = t_q: X^j_{s,t_q} dX^i
                cm.masses[q] = path->increment(j, s_idx, q) * path->increment(i, q, q + 1);
            }
            return DistributionProxy(std::move(cm));
        }
        if (sym == nxi + nwxi) return DistributionProxy::constant(1.0, path->grid.level);
        int j = static_cast<int>(sym - nxi - nwxi - 1);
        auto path_local = path;
        // base point snapped to its node, matching the Gamma convention, so
        // Pi_s Gamma_su = Pi_u holds exactly for arbitrary real s, u
        double xs = path->x[j][s_idx];
        return DistributionProxy(AnalyticFn{[path_local, j, xs](double t) {
            double pos = (t - path_local->time(0)) / path_local->grid.spacing();
            if (pos <= 0.0) pos = 0.0;
            auto i = static_cast<std::size_t>(pos);
            if (i + 1 >= path_local->nodes()) i = path_local->nodes() - 2;
            double f = pos - static_cast<double>(i);
            double xt = path_local->x[j][i] * (1.0 - f) + path_local->x[j][i + 1] * f;
            return xt - xs;
        }, path->grid.level});
    };

    m.snap = [path, node_of](double s) { return path->time(node_of(s)); };

    GradedIndexSet basis_copy = m.basis;
    m.gamma = [path, n, node_of, basis_copy, wxi_index](double s, double u) {
        auto g = GradedMap<double>::identity(basis_copy);
        std::size_t si = node_of(s), ui = node_of(u);
        const std::size_t nxi = static_cast<std::size_t>(n);
        const std::size_t one_row = nxi + nxi * nxi;
        for (int j = 0; j < n; ++j) {
            double xj = path->increment(j, si, ui);
            // W_j column: W_j - x^j 1
            g.at(one_row, one_row + 1 + static_cast<std::size_t>(j)) = -xj;
        }
        for (std::size_t c = 0; c < wxi_index.size(); ++c) {
            auto [j, i] = wxi_index[c];
            double xj = path->increment(j, si, ui);
            // W_j Xi_i column: W_j Xi_i - x^j Xi_i
            g.at(static_cast<std::size_t>(i), nxi + c) = -xj;
        }
        return g;
    };
    return m;
}

// --- CSV import/export --------------------------------------------------------

/// Columns: t, X_1..X_n, XX_{0,t} row-major (n^2 columns).
inline void rough_path_to_csv(const RoughPath& rp, std::ostream& os) {
    os << "t";
    for (int j = 0; j < rp.dim; ++j) os << ",X_" << (j + 1);
    for (int j = 0; j < rp.dim; ++j)
        for (int k = 0; k < rp.dim; ++k) os << ",XX_" << (j + 1) << (k + 1);
    os << "\n";
    os.precision(17);
    for (std::size_t i = 0; i < rp.nodes(); ++i) {
        os << rp.time(i);
        for (int j = 0; j < rp.dim; ++j) os << "," << rp.x[j][i];
        for (std::size_t jk = 0; jk < rp.a.size(); ++jk) os << "," << rp.a[jk][i];
        os << "\n";
    }
}

inline RoughPath rough_path_from_csv(std::istream& is, int level, int dim,
                                     Homogeneity alpha = Homogeneity(Rational(2, 5))) {
    RoughPath rp;
    rp.dim = dim;
    rp.alpha = alpha;
    std::string line;
    if (!std::getline(is, line)) throw std::runtime_error("rough_path_from_csv: empty input");
    std::vector<std::vector<double>> rows;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        std::vector<double> row;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) row.push_back(std::stod(cell));
        if (row.size() != 1 + static_cast<std::size_t>(dim) + static_cast<std::size_t>(dim) * dim)
            throw std::runtime_error("rough_path_from_csv: wrong column count");
        rows.push_back(std::move(row));
    }
    if (rows.size() < 2) throw std::runtime_error("rough_path_from_csv: need at least two rows");
    rp.grid = DyadicGrid(level, rows.front()[0], rows.back()[0]);
    if (rp.grid.size() != rows.size()) throw std::runtime_error("rough_path_from_csv: grid/row mismatch");
    rp.x.assign(dim, std::vector<double>(rows.size()));
    rp.a.assign(static_cast<std::size_t>(dim) * dim, std::vector<double>(rows.size()));
    for (std::size_t i = 0; i < rows.size(); ++i) {
        for (int j = 0; j < dim; ++j) rp.x[j][i] = rows[i][1 + j];
        for (std::size_t jk = 0; jk < rp.a.size(); ++jk) rp.a[jk][i] = rows[i][1 + dim + jk];
    }
    return rp;
}

}  // namespace rs

#pragma once

#include "rs/bump.hpp"
#include "rs/fit.hpp"
#include "rs/modelled.hpp"
#include "rs/mollified_noise.hpp"
#include "rs/rough_path.hpp"
#include "rs/wavelets.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

namespace rs {

// ---------------------------------------------------------------------------
// The wavelet reconstruction operator
//   (R^n f)(y) = sum_{x in Lambda^n} (Pi_x f(x))(phi^n_x) phi^n_x(y)
// and its consequences: convergence-rate fits, rough integration, and the
// C^{-alpha} x C^beta product.
// ---------------------------------------------------------------------------

/// Pairing of Pi_x applied to a coefficient vector against a test function.
inline double pair_jet(const Model& m, double x, const std::vector<double>& v, const TestFn& psi) {
    double s = 0.0;
    for (std::size_t k = 0; k < v.size(); ++k)
        if (v[k] != 0.0) s += v[k] * m.pi(x, k).pair(psi);
    return s;
}

/// R^{n_max} f on the window as a grid function sampled at level out_level
/// (defaults to n_max). Requires gamma > 0; uniqueness fails otherwise.
inline GridFn reconstruct(const ModelledDistribution& f, const ScalingFunction& sf, int n_max,
                          double lo, double hi, int out_level = -1) {
    if (!(Homogeneity(0) < f.gamma))
        throw std::invalid_argument("reconstruct: gamma must be positive");
    const Model& m = *f.model;
    if (out_level < 0) out_level = n_max;
    GridFn out;
    out.grid = DyadicGrid(out_level, lo, hi);
    out.values.assign(out.grid.size(), 0.0);
    const double h_n = std::ldexp(1.0, -n_max);
    const double supp = sf.support_end() * h_n;
    // all centres whose scaled support [x, x + supp] meets the window
    auto first = static_cast<std::int64_t>(std::floor((lo - supp) / h_n)) - 1;
    auto last = static_cast<std::int64_t>(std::ceil(hi / h_n)) + 1;
    for (std::int64_t ix = first; ix <= last; ++ix) {
        double x = static_cast<double>(ix) * h_n;
        double xs = m.snap_point(x);
        TestFn phi_nx{[&sf, n_max, x](double y) { return sf.scaled(n_max, x, y); }, x, x + supp};
        double w = pair_jet(m, xs, f.truncated_at(xs), phi_nx);
        if (w == 0.0) continue;
        // spread w * phi^n_x onto the output grid
        auto i0 = static_cast<std::int64_t>(std::ceil((x - out.grid.point(0)) / out.grid.spacing() - 1e-9));
        auto i1 = static_cast<std::int64_t>(std::floor((x + supp - out.grid.point(0)) / out.grid.spacing() + 1e-9));
        i0 = std::max<std::int64_t>(i0, 0);
        i1 = std::min<std::int64_t>(i1, static_cast<std::int64_t>(out.grid.size()) - 1);
        for (std::int64_t i = i0; i <= i1; ++i)
            out.values[static_cast<std::size_t>(i)] += w * sf.scaled(n_max, x, out.grid.point(static_cast<std::size_t>(i)));
    }
    return out;
}

/// For models made of continuous functions the reconstruction is the diagonal
/// evaluation (R f)(y) = (Pi_y f(y))(y), exact up to the model's resolution.
inline GridFn reconstruct_pointwise(const ModelledDistribution& f, int out_level, double lo,
                                    double hi) {
    const Model& m = *f.model;
    GridFn out;
    out.grid = DyadicGrid(out_level, lo, hi);
    out.values.assign(out.grid.size(), 0.0);
    for (std::size_t i = 0; i < out.grid.size(); ++i) {
        double y = m.snap_point(out.grid.point(i));
        auto v = f.truncated_at(y);
        double s = 0.0;
        for (std::size_t k = 0; k < v.size(); ++k)
            if (v[k] != 0.0) s += v[k] * m.pi(y, k).value_at(out.grid.point(i));
        out.values[i] = s;
    }
    return out;
}

struct RateReport {
    std::vector<double> lambdas;
    std::vector<double> mean_abs_error;    // across base points, per lambda
    std::vector<double> per_point_slopes;  // fitted exponent per base point
    double mean_slope = 0.0;
    double curve_slope = 0.0;  // slope of the mean error curve
    double constant = 0.0;
};

/// |(R f - Pi_x f(x))(phi_x^lambda)| fitted against lambda. The reconstructed
/// distribution is paired through its grid representation.
inline RateReport reconstruction_rate(const ModelledDistribution& f, const GridFn& rf,
                                      const Bump& bump, const std::vector<double>& centers,
                                      const std::vector<double>& lambdas) {
    const Model& m = *f.model;
    DistributionProxy rf_proxy{GridFn(rf)};
    RateReport rep;
    rep.lambdas = lambdas;
    std::vector<std::vector<double>> err_per_center(centers.size());
    for (double lam : lambdas) {
        double acc = 0.0;
        for (std::size_t ci = 0; ci < centers.size(); ++ci) {
            double x = m.snap_point(centers[ci]);
            TestFn psi{[&bump, x, lam](double y) { return bump.scaled(x, lam, y); }, x - lam, x + lam};
            double jet = pair_jet(m, x, f.truncated_at(x), psi);
            double err = std::abs(rf_proxy.pair(psi) - jet);
            err_per_center[ci].push_back(err);
            acc += err;
        }
        rep.mean_abs_error.push_back(acc / static_cast<double>(centers.size()));
    }
    for (auto& errs : err_per_center)
        rep.per_point_slopes.push_back(fit_loglog(lambdas, errs).slope);
    for (double s : rep.per_point_slopes) rep.mean_slope += s;
    rep.mean_slope /= static_cast<double>(rep.per_point_slopes.size());
    auto lf = fit_loglog(lambdas, rep.mean_abs_error);
    rep.curve_slope = lf.slope;
    rep.constant = std::exp(lf.intercept);
    return rep;
}

// --- rough integration ---------------------------------------------------------

/// Z(t_i) = sum_{q < i} Y(t_q) X^j_{t_q, t_{q+1}} + Y'_k(t_q) XX^{k,j}_{t_q, t_{q+1}},
/// the compensated Riemann sums whose limit the reconstruction theorem
/// guarantees. Y and Y' are given at the grid nodes; requires alpha > 1/3.
inline std::vector<double> rough_integrate(const std::vector<double>& y,
                                           const std::vector<std::vector<double>>& yprime,
                                           const RoughPath& rp, int j) {
    if (!(Homogeneity(Rational(1, 3)) < rp.alpha))
        throw std::invalid_argument("rough_integrate: needs alpha > 1/3");
    if (y.size() != rp.nodes()) throw std::invalid_argument("rough_integrate: size mismatch");
    std::vector<double> z(rp.nodes(), 0.0);
    for (std::size_t i = 1; i < rp.nodes(); ++i) {
        double inc = y[i - 1] * rp.increment(j, i - 1, i);
        for (int k = 0; k < rp.dim; ++k)
            inc += yprime[k][i - 1] * rp.xx(k, j, i - 1, i);
        z[i] = z[i - 1] + inc;
    }
    return z;
}

/// Remainder exponent of |Z_{s,t} - Y(s) X_{s,t} - Y'(s) XX_{s,t}| against
/// |t-s| over dyadic spacings; the reconstruction bound predicts 3 alpha.
inline LinearFit rough_remainder_fit(const std::vector<double>& z, const std::vector<double>& y,
                                     const std::vector<std::vector<double>>& yprime,
                                     const RoughPath& rp, int j, int min_level = 2,
                                     int max_level = 7) {
    std::vector<double> dts, errs;
    for (int lev = min_level; lev <= max_level; ++lev) {
        std::size_t step = rp.nodes() >> lev;
        if (step == 0) break;
        double worst = 0.0;
        for (std::size_t i = 0; i + step < rp.nodes(); i += step) {
            double rem = z[i + step] - z[i] - y[i] * rp.increment(j, i, i + step);
            for (int k = 0; k < rp.dim; ++k) rem -= yprime[k][i] * rp.xx(k, j, i, i + step);
            worst = std::max(worst, std::abs(rem));
        }
        dts.push_back(rp.time(step) - rp.time(0));
        errs.push_back(worst);
    }
    return fit_loglog(dts, errs);
}

/// The modelled distribution Yhat Xi_j of a controlled path (Y, Y') in the
/// rough path structure; lives in D^{3 alpha - 1}.
inline ModelledDistribution controlled_times_noise(std::shared_ptr<const Model> model,
                                                   const RoughPath& rp,
                                                   std::function<double(double)> y,
                                                   std::vector<std::function<double(double)>> yprime,
                                                   int j) {
    const int n = rp.dim;
    ModelledDistribution f;
    f.model = std::move(model);
    f.gamma = 3 * rp.alpha + Homogeneity(-1);
    f.alpha = rp.alpha + Homogeneity(-1);
    std::size_t nbasis = f.model->basis.size();
    f.coeffs = [y, yprime, j, n, nbasis](double s) {
        std::vector<double> v(nbasis, 0.0);
        v[static_cast<std::size_t>(j)] = y(s);  // Y(s) Xi_j
        for (int k = 0; k < n; ++k)             // Y'_k(s) W_k Xi_j
            v[static_cast<std::size_t>(n) + static_cast<std::size_t>(k) * n + j] = yprime[k](s);
        return v;
    };
    return f;
}

// --- the C^{-alpha} x C^beta product -------------------------------------------

/// B(f, xi) = R^xi(Xi F) with F the order-beta Taylor jet of f. Realised on
/// the doubled polynomial structure; requires beta > alpha.
inline GridFn pairing_product(const SmoothFn& f, const DistributionProxy& xi,
                              const Homogeneity& alpha, const Homogeneity& beta,
                              const ScalingFunction& sf, int n_max, double lo, double hi) {
    if (!(alpha < beta)) throw std::invalid_argument("pairing_product: needs beta > alpha");
    int max_degree = 0;
    while (Homogeneity(max_degree + 1) < beta) ++max_degree;
    auto model = std::make_shared<Model>(mollified_noise_model(xi, max_degree, alpha, n_max));
    ModelledDistribution xif;
    xif.model = model;
    xif.gamma = beta - alpha;
    xif.alpha = Homogeneity(0) - alpha;
    auto ff = f;
    int md = max_degree;
    std::size_t nbasis = model->basis.size();
    xif.coeffs = [ff, md, nbasis](double x) {
        std::vector<double> v(nbasis, 0.0);
        double factorial = 1.0;
        for (int k = 0; k <= md; ++k) {
            if (k > 0) factorial *= k;
            v[2 * static_cast<std::size_t>(k)] = ff(k, x) / factorial;  // Xi X^k slots
        }
        return v;
    };
    return reconstruct(xif, sf, n_max, lo, hi);
}

}  // namespace rs

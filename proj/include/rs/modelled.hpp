#pragma once

#include "rs/model.hpp"

#include <cmath>
#include <functional>
#include <map>
#include <memory>
#include <stdexcept>
#include <utility>
#include <vector>

namespace rs {

// ---------------------------------------------------------------------------
// Modelled distributions: fields of coefficient vectors over a model's basis,
// coherent under Gamma up to order gamma. Coefficients are stored as a full
// basis-length vector with zero entries at degrees >= gamma; the order
// bookkeeping stays in exact Homogeneity arithmetic throughout.
// ---------------------------------------------------------------------------

struct ModelledDistribution {
    std::shared_ptr<const Model> model;
    Homogeneity gamma;
    Homogeneity alpha;  // declared lowest degree, for D^gamma_alpha bookkeeping
    std::function<std::vector<double>(double)> coeffs;

    std::vector<double> at(double x) const { return coeffs(x); }

    /// Zeroes any component at degree >= gamma (they are not part of D^gamma).
    std::vector<double> truncated_at(double x) const {
        auto v = coeffs(x);
        for (std::size_t i = 0; i < v.size(); ++i)
            if (!(model->basis.degree(i) < gamma)) v[i] = 0.0;
        return v;
    }
};

inline ModelledDistribution constant_section(std::shared_ptr<const Model> model,
                                             std::vector<double> v, Homogeneity gamma,
                                             Homogeneity alpha) {
    ModelledDistribution f;
    f.model = std::move(model);
    f.gamma = gamma;
    f.alpha = alpha;
    f.coeffs = [v](double) { return v; };
    return f;
}

struct SeminormReport {
    // one entry per basis degree below gamma: fitted constant
    std::vector<std::pair<double, double>> constants;  // (degree value, constant)
    double max_constant = 0.0;
};

/// Empirical D^gamma seminorm: sup over sampled pairs of
/// ||f(x) - Gamma_xy f(y)||_degree / |x-y|^{gamma - degree}.
inline SeminormReport dgamma_seminorm(const ModelledDistribution& f, double lo, double hi,
                                      int samples = 48, unsigned seed = 4) {
    const Model& m = *f.model;
    auto eng = seeded_engine(seed);
    std::uniform_real_distribution<double> uni(lo, hi);
    double gv = f.gamma.value(m.kappa_num);
    std::vector<double> worst(m.basis.size(), 0.0);
    for (int it = 0; it < samples; ++it) {
        double x = m.snap_point(uni(eng)), y = m.snap_point(uni(eng));
        if (std::abs(x - y) < 1e-9) continue;
        auto fx = f.truncated_at(x);
        auto gfy = m.gamma(x, y).apply(f.truncated_at(y));
        for (std::size_t i = 0; i < fx.size(); ++i) {
            double dv = m.degree_value(i);
            if (!(m.basis.degree(i) < f.gamma)) continue;
            double ratio = std::abs(fx[i] - gfy[i]) / std::pow(std::abs(x - y), gv - dv);
            worst[i] = std::max(worst[i], ratio);
        }
    }
    SeminormReport rep;
    for (std::size_t i = 0; i < worst.size(); ++i) {
        if (!(m.basis.degree(i) < f.gamma)) continue;
        rep.constants.emplace_back(m.degree_value(i), worst[i]);
        rep.max_constant = std::max(rep.max_constant, worst[i]);
    }
    return rep;
}

// --- products ----------------------------------------------------------------

/// Partial multiplication table on a structure's basis. Entries map a pair of
/// basis indices to a sparse output vector; degree additivity is enforced at
/// insertion.
class ProductTable {
public:
    explicit ProductTable(GradedIndexSet basis) : basis_(std::move(basis)) {}

    void add(std::size_t i, std::size_t j, std::vector<std::pair<std::size_t, double>> out) {
        Homogeneity expected = basis_.degree(i) + basis_.degree(j);
        for (const auto& [k, c] : out) {
            if (c != 0.0 && !(basis_.degree(k) == expected))
                throw std::invalid_argument("ProductTable: degree additivity violated at " +
                                            basis_.label(i) + " * " + basis_.label(j));
        }
        entries_[{i, j}] = std::move(out);
        // products are commutative on every structure shipped here
        if (i != j) entries_[{j, i}] = entries_[{i, j}];
    }

    bool has(std::size_t i, std::size_t j) const { return entries_.count({i, j}) > 0; }

    const std::vector<std::pair<std::size_t, double>>& get(std::size_t i, std::size_t j) const {
        auto it = entries_.find({i, j});
        if (it == entries_.end())
            throw std::out_of_range("ProductTable: missing entry " + basis_.label(i) + " * " +
                                    basis_.label(j));
        return it->second;
    }

    const GradedIndexSet& basis() const { return basis_; }

    /// Colinearity of the product with the group action:
    /// Gamma(tau * taubar) = Gamma tau * Gamma taubar, checked numerically on
    /// a supplied Gamma matrix over the covered entries.
    double gamma_covariance_residual(const GradedMap<double>& g) const {
        double worst = 0.0;
        for (const auto& [key, out] : entries_) {
            auto [i, j] = key;
            // lhs: Gamma applied to the product of e_i and e_j
            std::vector<double> prod(basis_.size(), 0.0);
            for (const auto& [k, c] : out) prod[k] += c;
            auto lhs = g.apply(prod);
            // rhs: product of Gamma e_i and Gamma e_j (needs table closure)
            std::vector<double> gi(basis_.size(), 0.0), gj(basis_.size(), 0.0);
            for (std::size_t r = 0; r < basis_.size(); ++r) {
                gi[r] = g.at(r, i);
                gj[r] = g.at(r, j);
            }
            std::vector<double> rhs(basis_.size(), 0.0);
            bool complete = true;
            for (std::size_t a = 0; a < basis_.size() && complete; ++a)
                for (std::size_t b = 0; b < basis_.size() && complete; ++b) {
                    if (gi[a] == 0.0 || gj[b] == 0.0) continue;
                    if (!has(a, b)) {
                        complete = false;
                        break;
                    }
                    for (const auto& [k, c] : get(a, b)) rhs[k] += gi[a] * gj[b] * c;
                }
            if (!complete) continue;
            for (std::size_t k = 0; k < basis_.size(); ++k)
                worst = std::max(worst, std::abs(lhs[k] - rhs[k]));
        }
        return worst;
    }

private:
    GradedIndexSet basis_;
    std::map<std::pair<std::size_t, std::size_t>, std::vector<std::pair<std::size_t, double>>> entries_;
};

/// Xi^m * Xi^n = Xi^{m+n} for m + n <= 2 on the three-symbol toy structure
/// (basis order Xi^2, Xi, Xi^0).
inline ProductTable toy_product_table(const GradedIndexSet& basis) {
    ProductTable t(basis);
    // indices: 0 = Xi^2, 1 = Xi, 2 = Xi^0
    t.add(2, 2, {{2, 1.0}});
    t.add(2, 1, {{1, 1.0}});
    t.add(2, 0, {{0, 1.0}});
    t.add(1, 1, {{0, 1.0}});
    return t;
}

/// X^j * X^k = X^{j+k} on the monomial basis, entries up to max_degree.
inline ProductTable polynomial_product_table(const GradedIndexSet& basis) {
    ProductTable t(basis);
    std::size_t n = basis.size();
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i; j < n; ++j)
            if (i + j < n) t.add(i, j, {{i + j, 1.0}});
    return t;
}

/// Pointwise star product of two modelled distributions over the same model.
/// Output degrees follow the product theorem: alpha = a1 + a2 and
/// gamma = (g1 + a2) ^ (g2 + a1), computed exactly before any numeric work.
inline ModelledDistribution multiply(const ModelledDistribution& f1, const ModelledDistribution& f2,
                                     std::shared_ptr<const ProductTable> table) {
    if (f1.model != f2.model) throw std::invalid_argument("multiply: different models");
    ModelledDistribution out;
    out.model = f1.model;
    out.alpha = f1.alpha + f2.alpha;
    Homogeneity g1 = f1.gamma + f2.alpha;
    Homogeneity g2 = f2.gamma + f1.alpha;
    out.gamma = g1 < g2 ? g1 : g2;
    auto model = f1.model;
    auto c1 = f1.coeffs, c2 = f2.coeffs;
    Homogeneity gout = out.gamma;
    out.coeffs = [model, table, c1, c2, gout](double x) {
        auto v1 = c1(x);
        auto v2 = c2(x);
        std::vector<double> prod(model->basis.size(), 0.0);
        for (std::size_t i = 0; i < v1.size(); ++i) {
            if (v1[i] == 0.0) continue;
            for (std::size_t j = 0; j < v2.size(); ++j) {
                if (v2[j] == 0.0) continue;
                if (!(model->basis.degree(i) + model->basis.degree(j) < gout)) continue;
                for (const auto& [k, c] : table->get(i, j)) prod[k] += v1[i] * v2[j] * c;
            }
        }
        return prod;
    };
    return out;
}

// --- composition with smooth functions ----------------------------------------

/// Smooth scalar function handed in with its derivatives: fn(k, u) = G^{(k)}(u).
struct SmoothFn {
    std::function<double(int, double)> fn;
    int max_derivatives = 8;

    double operator()(int k, double u) const { return fn(k, u); }
};

/// Taylor jet of a smooth function in the polynomial structure:
/// coefficient of X^k is f^{(k)}(x) / k!.
inline ModelledDistribution taylor_jet(std::shared_ptr<const Model> model, const SmoothFn& f,
                                       const Homogeneity& gamma) {
    ModelledDistribution out;
    out.model = std::move(model);
    out.gamma = gamma;
    out.alpha = Homogeneity(0);
    auto ff = f;
    std::size_t n = out.model->basis.size();
    auto basis = out.model->basis;
    Homogeneity g = gamma;
    out.coeffs = [ff, n, basis, g](double x) {
        std::vector<double> v(n, 0.0);
        double factorial = 1.0;
        for (std::size_t k = 0; k < n; ++k) {
            if (k > 0) factorial *= static_cast<double>(k);
            if (basis.degree(k) < g) v[k] = ff(static_cast<int>(k), x) / factorial;
        }
        return v;
    };
    return out;
}

/// (G o f)(x) = sum_k G^{(k)}(fbar(x))/k! ftilde(x)^{*k}, truncated to the
/// finitely many k with k * alpha0 < gamma. Requires a function-like sector:
/// lowest degree 0 with a one-dimensional bottom, and no negative-degree
/// components in f.
inline ModelledDistribution compose(const SmoothFn& g, const ModelledDistribution& f,
                                    std::shared_ptr<const ProductTable> table) {
    const Model& m = *f.model;
    // locate the unit: the unique degree-0 basis vector
    std::size_t unit = m.basis.size();
    for (std::size_t i = 0; i < m.basis.size(); ++i) {
        if (m.basis.degree(i) == Homogeneity(0)) {
            if (unit != m.basis.size())
                throw std::invalid_argument("compose: sector has a multi-dimensional degree-0 level");
            unit = i;
        }
        if (m.basis.degree(i) < Homogeneity(0)) {
            // any negative-degree coefficient must vanish identically for the
            // sector to be function-like; we cannot check all x, so reject
            // structures carrying negative degrees outright
            throw std::invalid_argument("compose: sector is not function-like (negative degrees)");
        }
    }
    if (unit == m.basis.size()) throw std::invalid_argument("compose: no unit symbol");

    // alpha0 = smallest positive degree in the structure
    Homogeneity alpha0(0);
    bool found = false;
    for (std::size_t i = 0; i < m.basis.size(); ++i) {
        if (Homogeneity(0) < m.basis.degree(i) && (!found || m.basis.degree(i) < alpha0)) {
            alpha0 = m.basis.degree(i);
            found = true;
        }
    }
    if (!found) alpha0 = f.gamma;  // only the unit: composition is pointwise

    // only terms with k * alpha0 < gamma contribute below gamma
    int k_max = 0;
    while (k_max < 64 && (k_max + 1) * alpha0 < f.gamma) ++k_max;
    if (k_max + 1 > g.max_derivatives)
        throw std::invalid_argument("compose: not enough derivatives for the requested order");

    ModelledDistribution out;
    out.model = f.model;
    out.gamma = f.gamma;
    out.alpha = Homogeneity(0);
    auto model = f.model;
    auto cf = f.coeffs;
    auto gfn = g;
    Homogeneity gma = f.gamma;
    int km = k_max;
    out.coeffs = [model, table, cf, gfn, unit, gma, km](double x) {
        auto v = cf(x);
        double fbar = v[unit];
        std::vector<double> tilde = v;
        tilde[unit] = 0.0;
        std::vector<double> acc(model->basis.size(), 0.0);
        // power = ftilde^{*k}, accumulated iteratively with truncation
        std::vector<double> power(model->basis.size(), 0.0);
        power[unit] = 1.0;
        double factorial = 1.0;
        for (int k = 0; k <= km; ++k) {
            if (k > 0) {
                factorial *= k;
                std::vector<double> next(model->basis.size(), 0.0);
                for (std::size_t i = 0; i < power.size(); ++i) {
                    if (power[i] == 0.0) continue;
                    for (std::size_t j = 0; j < tilde.size(); ++j) {
                        if (tilde[j] == 0.0) continue;
                        if (!(model->basis.degree(i) + model->basis.degree(j) < gma)) continue;
                        for (const auto& [idx, c] : table->get(i, j)) next[idx] += power[i] * tilde[j] * c;
                    }
                }
                power = std::move(next);
            }
            double coeff = gfn(k, fbar) / factorial;
            for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += coeff * power[i];
        }
        return acc;
    };
    return out;
}

}  // namespace rs

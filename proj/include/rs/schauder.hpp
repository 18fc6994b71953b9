#pragma once

#include "rs/kernels.hpp"
#include "rs/modelled.hpp"
#include "rs/mollified_noise.hpp"
#include "rs/reconstruct.hpp"

#include <cmath>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

namespace rs {

// ---------------------------------------------------------------------------
// Abstract integration against a singular kernel on the doubled polynomial
// structure: the operators J (Taylor part of the convolution), N (the
// reconstruction-driven part) and the Schauder map K f = I f + J(x) f + N f,
// together with the admissible extension of the mollified-noise model that
// carries the image symbols I(Xi X^k).
// ---------------------------------------------------------------------------

/// Pairing of a proxy against D^{(k)} K_n(x - .) summed over the pieces.
/// Returns the per-piece contributions so tails can be inspected.
inline std::vector<double> kernel_pairings(const DistributionProxy& proxy, const SingularKernel& K,
                                           int deriv, double x) {
    std::vector<double> out;
    for (const auto& piece : K.pieces) {
        const auto fn = piece.fn;
        double r = piece.radius;
        TestFn psi{[fn, deriv, x](double y) { return fn(deriv, x - y); }, x - r, x + r};
        out.push_back(proxy.pair(psi));
    }
    return out;
}

inline double kernel_pairing_total(const DistributionProxy& proxy, const SingularKernel& K,
                                   int deriv, double x) {
    double s = 0.0;
    for (double v : kernel_pairings(proxy, K, deriv, x)) s += v;
    return s;
}

/// J(x) tau = sum_{k < |tau| + beta} X^k / k! int D^{(k)} K(x-y) (Pi_x tau)(dy).
/// The degree condition runs in exact homogeneity arithmetic; a collision
/// |tau| + beta in N is rejected.
inline std::vector<double> j_coefficients(const Model& m, const SingularKernel& K,
                                          const Homogeneity& beta, double x, std::size_t sym,
                                          int max_poly_degree) {
    Homogeneity bound = m.basis.degree(sym) + beta;
    if (bound.kappa_mult == 0 && denominator(bound.rational_part) == 1 &&
        bound.rational_part > 0)
        throw std::invalid_argument("j_coefficients: integer degree collision |tau| + beta");
    std::vector<double> coeffs(static_cast<std::size_t>(max_poly_degree) + 1, 0.0);
    auto proxy = m.pi(x, sym);
    double factorial = 1.0;
    for (int k = 0; k <= max_poly_degree; ++k) {
        if (k > 0) factorial *= k;
        if (!(Homogeneity(k) < bound)) break;
        coeffs[static_cast<std::size_t>(k)] = kernel_pairing_total(proxy, K, k, x) / factorial;
    }
    return coeffs;
}

/// (N f)(x) = sum_{k < gamma + beta} X^k / k! int D^{(k)} K(x-y) (R f - Pi_x f(x))(dy),
/// with R f supplied as a grid function.
inline std::vector<double> n_coefficients(const ModelledDistribution& f, const SingularKernel& K,
                                          const Homogeneity& beta, const GridFn& rf, double x,
                                          int max_poly_degree) {
    const Model& m = *f.model;
    Homogeneity bound = f.gamma + beta;
    if (bound.kappa_mult == 0 && denominator(bound.rational_part) == 1 &&
        bound.rational_part > 0)
        throw std::invalid_argument("n_coefficients: integer degree collision gamma + beta");
    std::vector<double> coeffs(static_cast<std::size_t>(max_poly_degree) + 1, 0.0);
    DistributionProxy rproxy{GridFn(rf)};
    auto jet = f.truncated_at(x);
    double factorial = 1.0;
    for (int k = 0; k <= max_poly_degree; ++k) {
        if (k > 0) factorial *= k;
        if (!(Homogeneity(k) < bound)) break;
        double v = kernel_pairing_total(rproxy, K, k, x);
        for (std::size_t sym = 0; sym < jet.size(); ++sym)
            if (jet[sym] != 0.0) v -= jet[sym] * kernel_pairing_total(m.pi(x, sym), K, k, x);
        coeffs[static_cast<std::size_t>(k)] = v / factorial;
    }
    return coeffs;
}

// --- admissible extension -------------------------------------------------------

/// The mollified-noise structure enlarged by the abstract integrals
/// I(Xi X^k) at degree k - alpha + beta, with the admissible realisation
///   Pi_x I(tau) = K * Pi_x tau - Pi_x J(x) tau
/// and the matching group action
///   Gamma_xy I(tau) = I(Gamma_xy tau) + J(x) Gamma_xy tau - Gammabar_xy J(y) tau.
class SchauderExtension {
public:
    SchauderExtension(const DistributionProxy& xi, Homogeneity alpha, int max_degree,
                      SingularKernel kernel, Homogeneity beta, double lo, double hi, int level)
        : alpha_(alpha),
          beta_(beta),
          max_degree_(max_degree),
          kernel_(std::make_shared<SingularKernel>(std::move(kernel))),
          lo_(lo),
          hi_(hi),
          level_(level) {
        base_ = std::make_shared<Model>(mollified_noise_model(xi, max_degree, alpha, level));

        // precompute c_j(z) = (K * [y^j xi])(z) on the working grid
        DyadicGrid grid(level, lo, hi);
        conv_.resize(static_cast<std::size_t>(max_degree) + 1);
        for (int j = 0; j <= max_degree; ++j) {
            auto weighted = xi.multiplied_by([j](double y) { return std::pow(y, j); });
            GridFn g;
            g.grid = grid;
            g.values.resize(grid.size());
            for (std::size_t i = 0; i < grid.size(); ++i)
                g.values[i] = kernel_pairing_total(weighted, *kernel_, 0, grid.point(i));
            conv_[static_cast<std::size_t>(j)] = std::move(g);
        }

        build_extended_model();
    }

    std::shared_ptr<const Model> base() const { return base_; }
    std::shared_ptr<const Model> extended() const { return extended_; }
    const SingularKernel& kernel() const { return *kernel_; }
    const Homogeneity& beta() const { return beta_; }

    /// Index maps into the extended basis.
    std::size_t ext_noise(int k) const { return ext_noise_.at(static_cast<std::size_t>(k)); }
    std::size_t ext_poly(int k) const { return ext_poly_.at(static_cast<std::size_t>(k)); }
    std::size_t ext_integ(int k) const { return ext_integ_.at(static_cast<std::size_t>(k)); }

    /// J(x) applied to the noise symbol Xi X^k, as polynomial coefficients.
    std::vector<double> j_of_noise(double x, int k) const {
        return j_coefficients(*base_, *kernel_, beta_, x, 2 * static_cast<std::size_t>(k),
                              max_degree_);
    }

    /// K f = I f + J(x) f + N f for f over the base model; rf is the
    /// reconstruction of f on the working window. The result lives in
    /// D^{gamma + beta} over the extended model.
    ModelledDistribution k_operator(const ModelledDistribution& f, const GridFn& rf) const {
        if (f.model != base_ && !(f.model->basis == base_->basis))
            throw std::invalid_argument("k_operator: f must live on the base model");
        ModelledDistribution out;
        out.model = extended_;
        out.gamma = f.gamma + beta_;
        Homogeneity bottom = f.alpha + beta_;
        out.alpha = bottom < Homogeneity(0) ? bottom : Homogeneity(0);
        auto self = *this;  // shared_ptr copies keep the tables alive
        auto cf = f.coeffs;
        auto fcopy = f;
        GridFn rfc = rf;
        out.coeffs = [self, fcopy, rfc](double x) {
            auto v = fcopy.truncated_at(x);
            std::vector<double> w(self.extended_->basis.size(), 0.0);
            // I f: noise coefficients move to the integrated symbols
            for (int k = 0; k <= self.max_degree_; ++k)
                w[self.ext_integ(k)] = v[2 * static_cast<std::size_t>(k)];
            // J(x) f: Taylor part of the convolution of each noise symbol
            for (int k = 0; k <= self.max_degree_; ++k) {
                double a = v[2 * static_cast<std::size_t>(k)];
                if (a == 0.0) continue;
                auto jc = self.j_of_noise(x, k);
                for (int j = 0; j <= self.max_degree_; ++j)
                    w[self.ext_poly(j)] += a * jc[static_cast<std::size_t>(j)];
            }
            // N f
            auto nc = n_coefficients(fcopy, *self.kernel_, self.beta_, rfc, x, self.max_degree_);
            for (int j = 0; j <= self.max_degree_; ++j)
                w[self.ext_poly(j)] += nc[static_cast<std::size_t>(j)];
            return w;
        };
        return out;
    }

private:
    void build_extended_model() {
        // gather (degree, kind, k): kind 0 = Xi X^k, 1 = X^k, 2 = I(Xi X^k)
        struct Entry {
            Homogeneity degree;
            int kind;
            int k;
        };
        std::vector<Entry> entries;
        for (int k = 0; k <= max_degree_; ++k) {
            entries.push_back({Homogeneity(k) - alpha_, 0, k});
            entries.push_back({Homogeneity(k), 1, k});
            entries.push_back({Homogeneity(k) - alpha_ + beta_, 2, k});
        }
        std::sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) {
            if (!(a.degree == b.degree)) return a.degree < b.degree;
            return a.kind < b.kind;
        });
        auto model = std::make_shared<Model>();
        ext_noise_.assign(static_cast<std::size_t>(max_degree_) + 1, 0);
        ext_poly_.assign(static_cast<std::size_t>(max_degree_) + 1, 0);
        ext_integ_.assign(static_cast<std::size_t>(max_degree_) + 1, 0);
        for (const auto& e : entries) {
            std::string xk = e.k == 0 ? "1" : (e.k == 1 ? "X" : "X^" + std::to_string(e.k));
            std::string label = e.kind == 0 ? (e.k == 0 ? "Xi" : "Xi*" + xk)
                                : e.kind == 1 ? xk
                                              : "I(Xi" + std::string(e.k == 0 ? "" : "*" + xk) + ")";
            std::size_t idx = model->basis.add(e.degree, label);
            (e.kind == 0 ? ext_noise_ : e.kind == 1 ? ext_poly_ : ext_integ_)[static_cast<std::size_t>(e.k)] = idx;
        }

        auto base = base_;
        auto kernel = kernel_;
        auto conv = conv_;
        auto noise_idx = ext_noise_;
        auto poly_idx = ext_poly_;
        auto integ_idx = ext_integ_;
        int md = max_degree_;
        Homogeneity beta = beta_;

        model->pi = [base, kernel, conv, noise_idx, poly_idx, integ_idx, md, beta](
                        double x, std::size_t sym) -> DistributionProxy {
            for (int k = 0; k <= md; ++k) {
                if (sym == noise_idx[static_cast<std::size_t>(k)]) return base->pi(x, 2 * static_cast<std::size_t>(k));
                if (sym == poly_idx[static_cast<std::size_t>(k)]) return base->pi(x, 2 * static_cast<std::size_t>(k) + 1);
                if (sym == integ_idx[static_cast<std::size_t>(k)]) {
                    // K * Pi_x (Xi X^k) through the precomputed convolutions,
                    // minus the Taylor polynomial J(x)(Xi X^k)
                    auto jc = j_coefficients(*base, *kernel, beta, x, 2 * static_cast<std::size_t>(k), md);
                    auto convs = conv;
                    int kk = k;
                    int quad = conv[0].grid.level;
                    return DistributionProxy(AnalyticFn{[convs, jc, kk, md, x](double z) {
                        double s = 0.0;
                        double binom = 1.0;
                        for (int j = 0; j <= kk; ++j) {
                            // (y-x)^k = sum_j C(k,j) (-x)^{k-j} y^j
                            double bc = binom * std::pow(-x, kk - j);
                            s += bc * convs[static_cast<std::size_t>(j)].value_at(z);
                            binom = binom * (kk - j) / (j + 1);
                        }
                        double poly = 0.0;
                        for (int j = 0; j <= md; ++j)
                            poly += jc[static_cast<std::size_t>(j)] * std::pow(z - x, j);
                        return s - poly;
                    }, quad});
                }
            }
            throw std::out_of_range("SchauderExtension: unknown symbol");
        };

        GradedIndexSet basis_copy = model->basis;
        auto self_j = [base, kernel, beta, md](double x, int k) {
            return j_coefficients(*base, *kernel, beta, x, 2 * static_cast<std::size_t>(k), md);
        };
        model->gamma = [base, basis_copy, noise_idx, poly_idx, integ_idx, md, self_j](
                           double x, double y) {
            auto g = GradedMap<double>::identity(basis_copy);
            double h = y - x;
            auto poly_g = polynomial_gamma(md, h);
            // base blocks: noise and polynomial copies translate binomially
            for (int kc = 0; kc <= md; ++kc)
                for (int kr = 0; kr <= kc; ++kr) {
                    double e = poly_g.at(static_cast<std::size_t>(kr), static_cast<std::size_t>(kc));
                    g.at(noise_idx[static_cast<std::size_t>(kr)], noise_idx[static_cast<std::size_t>(kc)]) = e;
                    g.at(poly_idx[static_cast<std::size_t>(kr)], poly_idx[static_cast<std::size_t>(kc)]) = e;
                }
            // integrated symbols: I Gamma tau + J(x) Gamma tau - Gammabar J(y) tau
            for (int kc = 0; kc <= md; ++kc) {
                std::vector<double> jy = self_j(y, kc);  // X-coefficients of J(y) tau_kc
                // push Gammabar_xy J(y) tau into the polynomial slots
                std::vector<double> jy_moved(static_cast<std::size_t>(md) + 1, 0.0);
                for (int jc = 0; jc <= md; ++jc)
                    for (int jr = 0; jr <= jc; ++jr)
                        jy_moved[static_cast<std::size_t>(jr)] +=
                            poly_g.at(static_cast<std::size_t>(jr), static_cast<std::size_t>(jc)) *
                            jy[static_cast<std::size_t>(jc)];
                for (int kr = 0; kr <= kc; ++kr) {
                    double e = poly_g.at(static_cast<std::size_t>(kr), static_cast<std::size_t>(kc));
                    if (e == 0.0) continue;
                    g.at(integ_idx[static_cast<std::size_t>(kr)], integ_idx[static_cast<std::size_t>(kc)]) = e;
                    // J(x) applied to Gamma tau, weighted by the binomial factor
                    std::vector<double> jx = self_j(x, kr);
                    for (int j = 0; j <= md; ++j)
                        g.at(poly_idx[static_cast<std::size_t>(j)], integ_idx[static_cast<std::size_t>(kc)]) +=
                            e * jx[static_cast<std::size_t>(j)];
                }
                for (int j = 0; j <= md; ++j)
                    g.at(poly_idx[static_cast<std::size_t>(j)], integ_idx[static_cast<std::size_t>(kc)]) -=
                        jy_moved[static_cast<std::size_t>(j)];
            }
            return g;
        };
        extended_ = model;
    }

    Homogeneity alpha_;
    Homogeneity beta_;
    int max_degree_;
    std::shared_ptr<SingularKernel> kernel_;
    double lo_, hi_;
    int level_;
    std::shared_ptr<Model> base_;
    std::shared_ptr<Model> extended_;
    std::vector<GridFn> conv_;
    std::vector<std::size_t> ext_noise_, ext_poly_, ext_integ_;
};

}  // namespace rs

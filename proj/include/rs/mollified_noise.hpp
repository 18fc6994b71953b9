#pragma once

#include "rs/model.hpp"

#include <cmath>
#include <memory>
#include <string>

namespace rs {

/// Doubled polynomial structure for the C^{-alpha} x C^beta product: basis
/// vectors X^k at degree k and Xi X^k at degree k - alpha, with the canonical
/// polynomial group acting on both copies simultaneously. Pi_x X^k = (.-x)^k
/// and Pi_x Xi X^k = (.-x)^k xi(.), for an arbitrary pairable xi.
///
/// Basis layout: for each k = 0..max_degree the pair (Xi*X^k, X^k) would not
/// be degree-sorted, so symbols are emitted in increasing degree order
/// (-alpha < 0 < 1-alpha < 1 < ...), alternating noise and polynomial levels.
inline Model mollified_noise_model(const DistributionProxy& xi, int max_degree,
                                   const Homogeneity& alpha, int quad_level = 12) {
    if (!(Homogeneity(0) < alpha) || !(alpha < Homogeneity(1)))
        throw std::invalid_argument("mollified_noise_model: alpha must lie in (0,1)");
    Model m;
    // index 2k: Xi*X^k at degree k - alpha; index 2k+1: X^k at degree k
    for (int k = 0; k <= max_degree; ++k) {
        std::string xk = k == 0 ? "1" : (k == 1 ? "X" : "X^" + std::to_string(k));
        m.basis.add(Homogeneity(k) - alpha, k == 0 ? "Xi" : "Xi*" + xk);
        m.basis.add(Homogeneity(k), xk);
    }
    auto noise = std::make_shared<DistributionProxy>(xi);
    m.pi = [noise, quad_level](double x, std::size_t sym) -> DistributionProxy {
        int k = static_cast<int>(sym / 2);
        auto monomial = [x, k](double y) { return std::pow(y - x, static_cast<double>(k)); };
        if (sym % 2 == 0) return noise->multiplied_by(monomial);
        return DistributionProxy(AnalyticFn{monomial, quad_level});
    };
    int deg = max_degree;
    GradedIndexSet basis_copy = m.basis;
    m.gamma = [deg, basis_copy](double x, double y) {
        // Gamma_{y-x} acting on both copies: X^k -> (X-h)^k, Xi X^k -> Xi (X-h)^k
        auto poly = polynomial_gamma(deg, y - x);
        GradedMap<double> g(basis_copy, basis_copy);
        for (int kc = 0; kc <= deg; ++kc)
            for (int kr = 0; kr <= kc; ++kr) {
                double e = poly.at(static_cast<std::size_t>(kr), static_cast<std::size_t>(kc));
                g.at(2 * static_cast<std::size_t>(kr), 2 * static_cast<std::size_t>(kc)) = e;
                g.at(2 * static_cast<std::size_t>(kr) + 1, 2 * static_cast<std::size_t>(kc) + 1) = e;
            }
        return g;
    };
    return m;
}

}  // namespace rs

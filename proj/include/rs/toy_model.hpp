#pragma once

#include "rs/model.hpp"

#include <cmath>
#include <utility>

namespace rs {

/// The three-symbol structure A = (-2 kappa, -kappa, 0) with basis Xi^2, Xi,
/// Xi^0 and trivial structure group. Returns the limiting model
/// (Pi_x Xi = 0, Pi_x Xi^2 = c) together with the n-th member of the sine
/// family that converges to it. With a trivial group Pi must be base-point
/// independent, so the sine symbol reads sqrt(2c) sin(n y) in the running
/// variable.
inline std::pair<Model, Model> toy_pair(double c, int n, int quad_level = 12) {
    if (c < 0) throw std::invalid_argument("toy_pair: c must be nonnegative for the sine family");
    auto make_basis = [] {
        GradedIndexSet b;
        b.add(Homogeneity(0, -2), "Xi^2");
        b.add(Homogeneity(0, -1), "Xi");
        b.add(Homogeneity(0), "Xi^0");
        return b;
    };
    Model limit;
    limit.basis = make_basis();
    limit.pi = [c](double, std::size_t sym) {
        if (sym == 0) return DistributionProxy::constant(c);
        if (sym == 1) return DistributionProxy::constant(0.0);
        return DistributionProxy::constant(1.0);
    };
    GradedIndexSet basis_copy = limit.basis;
    limit.gamma = [basis_copy](double, double) { return GradedMap<double>::identity(basis_copy); };

    Model sine = limit;
    double amp = std::sqrt(2.0 * c);
    sine.pi = [c, n, amp, quad_level](double, std::size_t sym) {
        if (sym == 0)
            return DistributionProxy(AnalyticFn{[c, n](double y) {
                double s = std::sin(n * y);
                return 2.0 * c * s * s;
            }, quad_level});
        if (sym == 1)
            return DistributionProxy(AnalyticFn{[amp, n](double y) { return amp * std::sin(n * y); }, quad_level});
        return DistributionProxy::constant(1.0);
    };
    return {limit, sine};
}

}  // namespace rs

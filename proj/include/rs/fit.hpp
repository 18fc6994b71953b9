#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

namespace rs {

struct LinearFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r2 = 0.0;
};

inline LinearFit fit_linear(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2) throw std::invalid_argument("fit_linear: need >= 2 points");
    const double n = static_cast<double>(x.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
        syy += y[i] * y[i];
    }
    LinearFit f;
    double denom = n * sxx - sx * sx;
    f.slope = (n * sxy - sx * sy) / denom;
    f.intercept = (sy - f.slope * sx) / n;
    double ss_tot = syy - sy * sy / n;
    double ss_res = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        double e = y[i] - (f.slope * x[i] + f.intercept);
        ss_res += e * e;
    }
    f.r2 = ss_tot > 0 ? 1.0 - ss_res / ss_tot : 1.0;
    return f;
}

/// Fit of log|y| against log(x); the slope estimates the scaling exponent.
/// Zero values of y are clipped far below the smallest nonzero datum.
inline LinearFit fit_loglog(const std::vector<double>& x, const std::vector<double>& y) {
    double floor_val = 1e300;
    for (double v : y) {
        double a = std::abs(v);
        if (a > 0 && a < floor_val) floor_val = a;
    }
    if (floor_val == 1e300) floor_val = 1e-300;
    std::vector<double> lx, ly;
    for (std::size_t i = 0; i < x.size(); ++i) {
        lx.push_back(std::log(x[i]));
        ly.push_back(std::log(std::max(std::abs(y[i]), floor_val * 1e-6)));
    }
    return fit_linear(lx, ly);
}

}  // namespace rs

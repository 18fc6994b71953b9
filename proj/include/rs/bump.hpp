#pragma once

#include <cmath>
#include <functional>
#include <vector>

namespace rs {

/// The standard smooth compactly supported bump exp(-1/(1-u^2)) on (-1,1),
/// normalised to unit integral, with first and second derivatives.
class Bump {
public:
    Bump() = default;

    static double raw(double u) {
        double u2 = u * u;
        if (u2 >= 1.0) return 0.0;
        return std::exp(-1.0 / (1.0 - u2));
    }

    static double norm_constant() {
        static const double c = [] {
            // fine Simpson quadrature of the raw profile
            const int n = 1 << 16;
            double h = 2.0 / n, s = 0.0;
            for (int i = 0; i < n; ++i) {
                double a = -1.0 + i * h;
                s += h / 6.0 * (raw(a) + 4.0 * raw(a + h / 2.0) + raw(a + h));
            }
            return s;
        }();
        return c;
    }

    double operator()(double u) const { return raw(u) / norm_constant(); }

    double deriv(double u) const {
        double u2 = u * u;
        if (u2 >= 1.0) return 0.0;
        double d = 1.0 - u2;
        return (*this)(u) * (-2.0 * u / (d * d));
    }

    double deriv2(double u) const {
        double u2 = u * u;
        if (u2 >= 1.0) return 0.0;
        double d = 1.0 - u2;
        double r = -2.0 * u / (d * d);
        double rp = -2.0 / (d * d) - 8.0 * u2 / (d * d * d);
        return (*this)(u) * (r * r + rp);
    }

    /// phi_x^lambda(y) = lambda^{-1} phi((y-x)/lambda), the L^1-normalised
    /// localisation used in all scaling bounds (d = 1).
    double scaled(double x, double lambda, double y) const {
        return (*this)((y - x) / lambda) / lambda;
    }
};

/// Smoothed indicator of [s, t]: unit plateau with bump-profile shoulders of
/// width delta. Used as the "approximate delta" test functions for rough
/// integration.
class MollifiedIndicator {
public:
    MollifiedIndicator(double s, double t, double delta) : s_(s), t_(t), delta_(delta) {}

    double operator()(double y) const { return cdf((y - s_) / delta_) - cdf((y - t_) / delta_); }

    double lower() const { return s_; }
    double upper() const { return t_; }

private:
    static double cdf(double v) {
        // antiderivative of the normalised bump, tabulated once
        static const int n = 1 << 12;
        static const std::vector<double> table = [] {
            std::vector<double> t(n + 1, 0.0);
            Bump b;
            double h = 2.0 / n;
            for (int i = 0; i < n; ++i) {
                double a = -1.0 + i * h;
                t[i + 1] = t[i] + h / 6.0 * (b(a) + 4.0 * b(a + h / 2.0) + b(a + h));
            }
            for (auto& v : t) v /= t[n];  // exact unit jump
            return t;
        }();
        if (v <= -1.0) return 0.0;
        if (v >= 1.0) return 1.0;
        double pos = (v + 1.0) / 2.0 * n;
        int i = static_cast<int>(pos);
        if (i >= n) i = n - 1;
        double f = pos - i;
        return table[i] * (1.0 - f) + table[i + 1] * f;
    }

    double s_, t_, delta_;
};

}  // namespace rs

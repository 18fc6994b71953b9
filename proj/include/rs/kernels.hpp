#pragma once

#include "rs/bump.hpp"
#include "rs/detail/linalg.hpp"
#include "rs/fit.hpp"

#include <cmath>
#include <functional>
#include <numbers>
#include <stdexcept>
#include <utility>
#include <vector>

namespace rs {

// ---------------------------------------------------------------------------
// Dyadic decomposition of singular kernels: K = sum_n K_n with each piece
// smooth, supported in a ball of radius 2^{-n}, obeying the scaling bounds
// sup |D^k K_n| <~ 2^{n(d - beta + |k|)}, and annihilating polynomials up to
// the moment order. The represented kernel IS the finite sum of corrected
// pieces; every operator downstream uses it consistently.
// ---------------------------------------------------------------------------

/// Closure with derivatives: f(k, x) = k-th derivative at x, k <= 2.
struct Analytic1D {
    std::function<double(int, double)> f;
    double operator()(int k, double x) const { return f(k, x); }
};

/// |x|^{-a} with two derivatives, singular at the origin.
inline Analytic1D singular_power(double a) {
    return Analytic1D{[a](int k, double x) {
        double ax = std::abs(x);
        double sgn = x < 0 ? -1.0 : 1.0;
        switch (k) {
            case 0: return std::pow(ax, -a);
            case 1: return -a * sgn * std::pow(ax, -a - 1.0);
            case 2: return a * (a + 1.0) * std::pow(ax, -a - 2.0);
            default: throw std::invalid_argument("singular_power: derivatives up to 2");
        }
    }};
}

/// Smooth cutoff: 1 for |u| <= 1/2, 0 for |u| >= 1, bump-profile transition;
/// chi(k, u) = k-th derivative.
inline double smooth_cutoff(int k, double u) {
    double au = std::abs(u);
    if (au <= 0.5) return k == 0 ? 1.0 : 0.0;
    if (au >= 1.0) return 0.0;
    // transition variable v in (-1, 1)
    double v = 4.0 * au - 3.0;
    static const Bump b;
    double sgn = u < 0 ? -1.0 : 1.0;
    switch (k) {
        case 0: {
            // 1 - cdf(v) via the tabulated antiderivative in MollifiedIndicator
            // is avoided here; integrate the bump directly (cached Simpson)
            static const int n = 1 << 11;
            static const std::vector<double> table = [] {
                std::vector<double> t(n + 1, 0.0);
                Bump bb;
                double h = 2.0 / n;
                for (int i = 0; i < n; ++i) {
                    double a0 = -1.0 + i * h;
                    t[i + 1] = t[i] + h / 6.0 * (bb(a0) + 4.0 * bb(a0 + h / 2.0) + bb(a0 + h));
                }
                for (auto& x : t) x /= t[n];
                return t;
            }();
            double pos = (v + 1.0) / 2.0 * n;
            int i = static_cast<int>(pos);
            if (i >= n) i = n - 1;
            double fr = pos - i;
            double cdf = table[i] * (1.0 - fr) + table[i + 1] * fr;
            return 1.0 - cdf;
        }
        case 1: return -4.0 * sgn * b(v);
        case 2: return -16.0 * b.deriv(v);
        default: throw std::invalid_argument("smooth_cutoff: derivatives up to 2");
    }
}

struct KernelPiece {
    int n = 0;             // dyadic index; support radius 2^{-n}
    Analytic1D fn;         // value and derivatives, already corrected
    double radius = 1.0;   // 2^{-n}
};

struct SingularKernel {
    double beta = 0.0;
    int moment_order = 0;  // N
    std::vector<KernelPiece> pieces;

    double eval(int k, double x) const {
        double s = 0.0;
        for (const auto& p : pieces)
            if (std::abs(x) < p.radius) s += p.fn(k, x);
        return s;
    }
    double operator()(double x) const { return eval(0, x); }

    /// Simpson quadrature of D^0 K_n times x^p on the piece's own scale.
    double piece_moment(std::size_t pi, int p, int intervals = 4096) const {
        const auto& piece = pieces[pi];
        double r = piece.radius, h = 2.0 * r / intervals, s = 0.0;
        auto f = [&](double x) { return piece.fn(0, x) * std::pow(x, p); };
        for (int i = 0; i < intervals; ++i) {
            double a = -r + i * h;
            s += h / 6.0 * (f(a) + 4.0 * f(a + h / 2.0) + f(a + h));
        }
        return s;
    }

    /// max over p <= N of |int K_n x^p| per piece.
    std::vector<double> moment_residuals() const {
        std::vector<double> out;
        for (std::size_t i = 0; i < pieces.size(); ++i) {
            double worst = 0.0;
            for (int p = 0; p <= moment_order; ++p) worst = std::max(worst, std::abs(piece_moment(i, p)));
            out.push_back(worst);
        }
        return out;
    }

    double sup_deriv(std::size_t pi, int k, int samples = 4096) const {
        const auto& piece = pieces[pi];
        double worst = 0.0;
        for (int i = 0; i <= samples; ++i) {
            double x = -piece.radius + 2.0 * piece.radius * i / samples;
            worst = std::max(worst, std::abs(piece.fn(k, x)));
        }
        return worst;
    }

    /// Fit of log2 sup|D^k K_n| against n; the scaling bound predicts slope
    /// d - beta + k with d = 1.
    LinearFit bound_fit(int k) const {
        std::vector<double> ns, sups;
        for (std::size_t i = 0; i < pieces.size(); ++i) {
            double s = sup_deriv(i, k);
            if (s <= 0.0) continue;
            ns.push_back(static_cast<double>(pieces[i].n));
            sups.push_back(std::log2(s));
        }
        return fit_linear(ns, sups);
    }
};

/// Annular decomposition of a kernel with a known singularity at the origin,
/// then a per-piece polynomial correction enforcing moment annihilation up to
/// degree N. The correction is a bump-profile package at the piece's scale,
/// solved from a small Gram system, so supports and scaling bounds survive.
inline SingularKernel decompose_kernel(const Analytic1D& k, double beta, int N, int n_levels) {
    SingularKernel out;
    out.beta = beta;
    out.moment_order = N;

    // Gram matrix of the correction basis q_j(u) = u^j B(u) on the unit scale
    const int dim = N + 1;
    std::vector<double> gram(dim * dim, 0.0);
    {
        Bump b;
        const int m = 1 << 12;
        double h = 2.0 / m;
        for (int p = 0; p < dim; ++p)
            for (int j = 0; j < dim; ++j) {
                double s = 0.0;
                auto f = [&](double u) { return std::pow(u, j) * b(u) * std::pow(u, p); };
                for (int i = 0; i < m; ++i) {
                    double a = -1.0 + i * h;
                    s += h / 6.0 * (f(a) + 4.0 * f(a + h / 2.0) + f(a + h));
                }
                gram[p * dim + j] = s;  // unit-scale moment of q_j against u^p
            }
    }

    for (int n = 0; n < n_levels; ++n) {
        double scale = std::ldexp(1.0, n);  // 2^n
        auto raw = [k, n, scale](int d, double x) {
            // K_n = k * rho_n with rho_n(x) = chi(2^n x) - chi(2^{n+1} x)
            auto rho = [n, scale](int dd, double xx) {
                return std::pow(scale, dd) * smooth_cutoff(dd, scale * xx) -
                       std::pow(2.0 * scale, dd) * smooth_cutoff(dd, 2.0 * scale * xx);
            };
            double r0 = rho(0, x);
            if (d == 0) return r0 == 0.0 ? 0.0 : k(0, x) * r0;
            // short-circuit well outside the annulus (avoids k at the origin)
            double inner = std::ldexp(1.0, -n - 2), outer = std::ldexp(1.0, -n);
            if (std::abs(x) <= 0.9 * inner || std::abs(x) >= 1.1 * outer) return 0.0;
            if (d == 1) return k(1, x) * r0 + k(0, x) * rho(1, x);
            return k(2, x) * r0 + 2.0 * k(1, x) * rho(1, x) + k(0, x) * rho(2, x);
        };

        // raw moments on the piece's scale
        std::vector<double> rhs(dim, 0.0);
        {
            double r = std::ldexp(1.0, -n);
            const int m = 1 << 12;
            double h = 2.0 * r / m;
            for (int p = 0; p < dim; ++p) {
                double s = 0.0;
                auto f = [&](double x) { return raw(0, x) * std::pow(x, p); };
                for (int i = 0; i < m; ++i) {
                    double a = -r + i * h;
                    s += h / 6.0 * (f(a) + 4.0 * f(a + h / 2.0) + f(a + h));
                }
                rhs[p] = s;
            }
        }
        // moments of the scaled basis: int q_j(2^n x) x^p dx = 2^{-n(p+1)} gram[p][j]
        std::vector<double> mat(dim * dim, 0.0);
        for (int p = 0; p < dim; ++p)
            for (int j = 0; j < dim; ++j)
                mat[p * dim + j] = std::pow(0.5, n * (p + 1)) * gram[p * dim + j];
        std::vector<double> c = detail::solve_dense(mat, rhs);

        KernelPiece piece;
        piece.n = n;
        piece.radius = std::ldexp(1.0, -n);
        piece.fn = Analytic1D{[raw, c, scale, dim](int d, double x) {
            double u = scale * x;
            if (std::abs(u) >= 1.0) return raw(d, x);
            Bump b;
            double corr = 0.0;
            for (int j = 0; j < dim; ++j) {
                if (c[j] == 0.0) continue;
                double base;
                switch (d) {
                    case 0: base = std::pow(u, j) * b(u); break;
                    case 1:
                        base = scale * ((j > 0 ? j * std::pow(u, j - 1) * b(u) : 0.0) +
                                        std::pow(u, j) * b.deriv(u));
                        break;
                    default:
                        base = scale * scale *
                               ((j > 1 ? j * (j - 1) * std::pow(u, j - 2) * b(u) : 0.0) +
                                (j > 0 ? 2.0 * j * std::pow(u, j - 1) * b.deriv(u) : 0.0) +
                                std::pow(u, j) * b.deriv2(u));
                }
                corr += c[j] * base;
            }
            return raw(d, x) - corr;
        }};
        out.pieces.push_back(std::move(piece));
    }
    return out;
}

// ---------------------------------------------------------------------------
// Parabolic 1+1 split of the heat kernel G(t,x) = (4 pi t)^{-1/2} e^{-x^2/4t}:
// G = K + Rhat with K = sum K_n supported in parabolic balls, moment-corrected
// with a causal profile, satisfying the scaling bounds with beta = 2 under
// the scaling s = (2,1).
// ---------------------------------------------------------------------------

inline double heat_kernel_1d(double t, double x) {
    if (t <= 0.0) return 0.0;
    return std::exp(-x * x / (4.0 * t)) / std::sqrt(4.0 * std::numbers::pi * t);
}

/// Smooth parabolic gauge nu(t,x) = (t^2 + x^4)^{1/4}; nu(l^2 t, l x) = l nu.
inline double parabolic_gauge(double t, double x) {
    return std::pow(t * t + x * x * x * x, 0.25);
}

/// d nu / dx away from the origin.
inline double parabolic_gauge_dx(double t, double x) {
    return x * x * x * std::pow(t * t + x * x * x * x, -0.75);
}

namespace detail {

/// Midpoint quadrature over [0,t_max] x [-x_max,x_max] with one Richardson
/// extrapolation step. Construction and verification share this routine so
/// the moment residuals are not polluted by mismatched quadrature rules.
inline double integrate_box(const std::function<double(double, double)>& f, double t_max,
                            double x_max, int m = 192) {
    auto sum_at = [&](int mm) {
        double ht = t_max / mm, hx = 2.0 * x_max / mm, acc = 0.0;
        for (int i = 0; i < mm; ++i)
            for (int j = 0; j < mm; ++j) acc += f((i + 0.5) * ht, -x_max + (j + 0.5) * hx);
        return acc * ht * hx;
    };
    double c1 = sum_at(m), c2 = sum_at(2 * m);
    return (4.0 * c2 - c1) / 3.0;
}

}  // namespace detail

struct ParabolicPiece {
    int n = 0;
    std::function<double(double, double)> fn;    // value
    std::function<double(double, double)> dx;    // spatial derivative (analytic)
    double t_max = 1.0, x_max = 1.0;             // support box: [0,t_max] x [-x_max,x_max]
};

struct ParabolicKernel {
    int moment_order = 0;
    int quad_m = 192;
    std::vector<ParabolicPiece> pieces;

    double operator()(double t, double x) const {
        double s = 0.0;
        for (const auto& p : pieces)
            if (t > 0.0 && t < p.t_max && std::abs(x) < p.x_max) s += p.fn(t, x);
        return s;
    }

    double piece_moment(std::size_t pi, int a, int b) const {
        const auto& p = pieces[pi];
        return detail::integrate_box(
            [&](double t, double x) { return p.fn(t, x) * std::pow(t, a) * std::pow(x, b); },
            p.t_max, p.x_max, quad_m);
    }

    /// max over parabolic degrees 2a + b <= N of |int K_n t^a x^b| per piece.
    std::vector<double> moment_residuals() const {
        std::vector<double> out;
        for (std::size_t i = 0; i < pieces.size(); ++i) {
            double worst = 0.0;
            for (int a = 0; 2 * a <= moment_order; ++a)
                for (int b = 0; 2 * a + b <= moment_order; ++b)
                    worst = std::max(worst, std::abs(piece_moment(i, a, b)));
            out.push_back(worst);
        }
        return out;
    }

    double sup_value(std::size_t pi, bool spatial_deriv, int m = 256) const {
        const auto& p = pieces[pi];
        double worst = 0.0;
        for (int i = 0; i <= m; ++i)
            for (int j = 0; j <= m; ++j) {
                double t = p.t_max * i / m;
                double x = -p.x_max + 2.0 * p.x_max * j / m;
                double v = spatial_deriv ? p.dx(t, x) : p.fn(t, x);
                worst = std::max(worst, std::abs(v));
            }
        return worst;
    }

    /// log2 sup per piece vs n; slope should be d_s - 2 + |k| with d_s = 3.
    LinearFit bound_fit(bool spatial_deriv) const {
        std::vector<double> ns, sups;
        for (std::size_t i = 0; i < pieces.size(); ++i) {
            double s = sup_value(i, spatial_deriv);
            if (s <= 0.0) continue;
            ns.push_back(static_cast<double>(pieces[i].n));
            sups.push_back(std::log2(s));
        }
        return fit_linear(ns, sups);
    }
};

struct HeatSplit {
    ParabolicKernel kernel;                                // K
    std::function<double(double, double)> remainder;       // Rhat = G - K
};

inline HeatSplit split_heat_kernel(int N, int n_levels, int quad_m = 192) {
    HeatSplit out;
    out.kernel.moment_order = N;
    out.kernel.quad_m = quad_m;

    // correction monomials: t^a x^b with 2a + b <= N
    std::vector<std::pair<int, int>> basis;
    for (int a = 0; 2 * a <= N; ++a)
        for (int b = 0; 2 * a + b <= N; ++b) basis.emplace_back(a, b);
    const int dim = static_cast<int>(basis.size());

    for (int n = 0; n < n_levels; ++n) {
        double lt = std::ldexp(1.0, -2 * n);
        double lx = std::ldexp(1.0, -n);
        double s2 = std::ldexp(1.0, n);  // 2^n
        auto rho = [s2](double t, double x) {
            double nu1 = parabolic_gauge(s2 * s2 * t, s2 * x);
            double nu2 = parabolic_gauge(4.0 * s2 * s2 * t, 2.0 * s2 * x);
            return smooth_cutoff(0, nu1) - smooth_cutoff(0, nu2);
        };
        auto rho_dx = [s2](double t, double x) {
            double v = 0.0;
            double nu1 = parabolic_gauge(s2 * s2 * t, s2 * x);
            if (nu1 > 0.5 && nu1 < 1.0)
                v += smooth_cutoff(1, nu1) * s2 * parabolic_gauge_dx(s2 * s2 * t, s2 * x);
            double nu2 = parabolic_gauge(4.0 * s2 * s2 * t, 2.0 * s2 * x);
            if (nu2 > 0.5 && nu2 < 1.0)
                v -= smooth_cutoff(1, nu2) * 2.0 * s2 * parabolic_gauge_dx(4.0 * s2 * s2 * t, 2.0 * s2 * x);
            return v;
        };
        auto raw = [rho](double t, double x) {
            double r = rho(t, x);
            return r == 0.0 ? 0.0 : heat_kernel_1d(t, x) * r;
        };
        auto raw_dx = [rho, rho_dx](double t, double x) {
            if (t <= 0.0) return 0.0;
            double r = rho(t, x), rdx = rho_dx(t, x);
            if (r == 0.0 && rdx == 0.0) return 0.0;
            double g = heat_kernel_1d(t, x);
            return g * (-x / (2.0 * t)) * r + g * rdx;
        };

        // causal bump package at the piece's parabolic scale
        static const Bump bmp;
        auto profile = [lt, lx](double t, double x) {
            return bmp(2.0 * t / lt - 1.0) * bmp(x / lx);
        };
        auto profile_dx = [lt, lx](double t, double x) {
            return bmp(2.0 * t / lt - 1.0) * bmp.deriv(x / lx) / lx;
        };
        auto q = [lt, lx, profile](int a, int b, double t, double x) {
            return std::pow(t / lt, a) * std::pow(x / lx, b) * profile(t, x);
        };
        auto q_dx = [lt, lx, profile, profile_dx](int a, int b, double t, double x) {
            double ts = std::pow(t / lt, a);
            double xs = std::pow(x / lx, b);
            double d = xs * profile_dx(t, x);
            if (b > 0) d += b * std::pow(x / lx, b - 1) / lx * profile(t, x);
            return ts * d;
        };

        std::vector<double> mat(dim * dim, 0.0), rhs(dim, 0.0);
        for (int p = 0; p < dim; ++p) {
            auto [ap, bp] = basis[p];
            rhs[p] = detail::integrate_box(
                [&](double t, double x) { return raw(t, x) * std::pow(t, ap) * std::pow(x, bp); }, lt,
                lx, quad_m);
            for (int jq = 0; jq < dim; ++jq) {
                auto [aq, bq] = basis[jq];
                mat[p * dim + jq] = detail::integrate_box(
                    [&](double t, double x) { return q(aq, bq, t, x) * std::pow(t, ap) * std::pow(x, bp); },
                    lt, lx, quad_m);
            }
        }
        std::vector<double> c = detail::solve_dense(mat, rhs);

        ParabolicPiece piece;
        piece.n = n;
        piece.t_max = lt;
        piece.x_max = lx;
        piece.fn = [raw, q, c, basis, dim](double t, double x) {
            double v = raw(t, x);
            for (int j = 0; j < dim; ++j) {
                auto [a, b] = basis[j];
                if (c[j] != 0.0) v -= c[j] * q(a, b, t, x);
            }
            return v;
        };
        piece.dx = [raw_dx, q_dx, c, basis, dim](double t, double x) {
            double v = raw_dx(t, x);
            for (int j = 0; j < dim; ++j) {
                auto [a, b] = basis[j];
                if (c[j] != 0.0) v -= c[j] * q_dx(a, b, t, x);
            }
            return v;
        };
        out.kernel.pieces.push_back(std::move(piece));
    }

    auto kcopy = out.kernel;
    out.remainder = [kcopy](double t, double x) { return heat_kernel_1d(t, x) - kcopy(t, x); };
    return out;
}

}  // namespace rs

#pragma once

#include "rs/rational.hpp"

#include <compare>
#include <cstdint>
#include <ostream>
#include <string>

namespace rs {

/// Degree of a symbol, written a + b*kappa where kappa is a symbolic positive
/// infinitesimal. Keeping kappa symbolic makes the order exact: two degrees
/// never collide through floating-point ties.
struct Homogeneity {
    Rational rational_part{0};
    std::int64_t kappa_mult{0};

    Homogeneity() = default;
    Homogeneity(Rational a, std::int64_t b = 0) : rational_part(std::move(a)), kappa_mult(b) {}
    Homogeneity(std::int64_t a, std::int64_t b = 0) : rational_part(a), kappa_mult(b) {}

    friend Homogeneity operator+(const Homogeneity& x, const Homogeneity& y) {
        return {x.rational_part + y.rational_part, x.kappa_mult + y.kappa_mult};
    }
    friend Homogeneity operator-(const Homogeneity& x, const Homogeneity& y) {
        return {x.rational_part - y.rational_part, x.kappa_mult - y.kappa_mult};
    }
    Homogeneity& operator+=(const Homogeneity& y) { return *this = *this + y; }

    friend Homogeneity operator*(std::int64_t n, const Homogeneity& h) {
        return {h.rational_part * n, h.kappa_mult * n};
    }

    // Lexicographic in (rational_part, kappa_mult): since kappa > 0 is
    // infinitesimal, a - 5k < a - k for any rational a.
    friend bool operator==(const Homogeneity& x, const Homogeneity& y) {
        return x.rational_part == y.rational_part && x.kappa_mult == y.kappa_mult;
    }
    friend bool operator<(const Homogeneity& x, const Homogeneity& y) {
        if (x.rational_part != y.rational_part) return x.rational_part < y.rational_part;
        return x.kappa_mult < y.kappa_mult;
    }
    friend bool operator>(const Homogeneity& x, const Homogeneity& y) { return y < x; }
    friend bool operator<=(const Homogeneity& x, const Homogeneity& y) { return !(y < x); }
    friend bool operator>=(const Homogeneity& x, const Homogeneity& y) { return !(x < y); }
    friend bool operator!=(const Homogeneity& x, const Homogeneity& y) { return !(x == y); }

    /// Numeric value once kappa is pinned to a concrete small positive number.
    double value(double kappa_num = 0.01) const {
        return to_double(rational_part) + static_cast<double>(kappa_mult) * kappa_num;
    }
};

inline std::string to_string(const Homogeneity& h) {
    std::string s = to_string(h.rational_part);
    if (h.kappa_mult != 0) {
        if (h.rational_part == 0) s.clear();
        if (h.kappa_mult > 0 && !s.empty()) s += "+";
        if (h.kappa_mult == -1)
            s += "-";
        else if (h.kappa_mult != 1)
            s += std::to_string(h.kappa_mult);
        s += "k";
    }
    return s;
}

/// Parses "a", "a/b", with optional "+ck" / "-ck" kappa tail, e.g. "-5/2-k",
/// "-4k", "1/2", "0".
inline Homogeneity parse_homogeneity(std::string s) {
    if (s.empty()) throw std::invalid_argument("parse_homogeneity: empty");
    auto k = s.find('k');
    std::int64_t km = 0;
    if (k != std::string::npos) {
        // split off the kappa term: find the sign that starts it
        std::size_t start = k;
        while (start > 0 && s[start - 1] != '+' && s[start - 1] != '-') --start;
        if (start > 0) --start;  // include the sign
        std::string kt = s.substr(start, k - start);
        s = s.substr(0, start);
        if (kt.empty() || kt == "+")
            km = 1;
        else if (kt == "-")
            km = -1;
        else
            km = std::stoll(kt);
    }
    Rational a = s.empty() ? Rational(0) : parse_rational(s);
    return {a, km};
}

inline std::ostream& operator<<(std::ostream& os, const Homogeneity& h) {
    return os << to_string(h);
}

}  // namespace rs

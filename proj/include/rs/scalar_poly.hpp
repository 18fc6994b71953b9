#pragma once

#include "rs/rational.hpp"

#include <map>
#include <string>
#include <utility>

namespace rs {

/// Polynomial with exact rational coefficients in named scalar unknowns
/// (phi, dphi_1, C1, ...). Used as the coefficient ring of formal sums so
/// that renormalisation identities can be checked symbolically.
class ScalarPoly {
public:
    using Monomial = std::map<std::string, int>;  // name -> exponent, no zeros

    ScalarPoly() = default;
    ScalarPoly(Rational c) {
        if (c != 0) terms_[{}] = std::move(c);
    }
    ScalarPoly(std::int64_t c) : ScalarPoly(Rational(c)) {}

    static ScalarPoly name(const std::string& n, Rational coeff = 1) {
        ScalarPoly p;
        if (coeff != 0) p.terms_[{{n, 1}}] = std::move(coeff);
        return p;
    }

    bool is_zero() const { return terms_.empty(); }

    bool is_constant() const {
        return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first.empty());
    }

    Rational constant_value() const {
        if (terms_.empty()) return 0;
        if (!is_constant()) throw std::logic_error("ScalarPoly: not a constant");
        return terms_.begin()->second;
    }

    friend ScalarPoly operator+(const ScalarPoly& a, const ScalarPoly& b) {
        ScalarPoly out = a;
        for (const auto& [m, c] : b.terms_) out.add_term(m, c);
        return out;
    }
    friend ScalarPoly operator-(const ScalarPoly& a, const ScalarPoly& b) {
        ScalarPoly out = a;
        for (const auto& [m, c] : b.terms_) out.add_term(m, -c);
        return out;
    }
    friend ScalarPoly operator-(const ScalarPoly& a) { return ScalarPoly(Rational(0)) - a; }
    friend ScalarPoly operator*(const ScalarPoly& a, const ScalarPoly& b) {
        ScalarPoly out;
        for (const auto& [ma, ca] : a.terms_)
            for (const auto& [mb, cb] : b.terms_) {
                Monomial m = ma;
                for (const auto& [n, e] : mb) m[n] += e;
                out.add_term(m, ca * cb);
            }
        return out;
    }
    ScalarPoly& operator+=(const ScalarPoly& b) { return *this = *this + b; }
    ScalarPoly& operator*=(const ScalarPoly& b) { return *this = *this * b; }

    friend bool operator==(const ScalarPoly& a, const ScalarPoly& b) { return a.terms_ == b.terms_; }

    /// Substitutes numeric values for a subset of names.
    ScalarPoly substitute(const std::map<std::string, Rational>& values) const {
        ScalarPoly out;
        for (const auto& [m, c] : terms_) {
            Rational coeff = c;
            Monomial rest;
            for (const auto& [n, e] : m) {
                auto it = values.find(n);
                if (it == values.end()) {
                    rest[n] = e;
                } else {
                    for (int i = 0; i < e; ++i) coeff *= it->second;
                }
            }
            out.add_term(rest, coeff);
        }
        return out;
    }

    std::string str() const {
        if (terms_.empty()) return "0";
        std::string s;
        for (const auto& [m, c] : terms_) {
            std::string t = to_string(c);
            for (const auto& [n, e] : m) {
                t += "*" + n;
                if (e > 1) t += "^" + std::to_string(e);
            }
            if (!s.empty() && t[0] != '-') s += "+";
            s += t;
        }
        return s;
    }

    const std::map<Monomial, Rational>& terms() const { return terms_; }

private:
    void add_term(const Monomial& m, const Rational& c) {
        auto it = terms_.find(m);
        if (it == terms_.end()) {
            if (c != 0) terms_[m] = c;
        } else {
            it->second += c;
            if (it->second == 0) terms_.erase(it);
        }
    }

    std::map<Monomial, Rational> terms_;
};

}  // namespace rs

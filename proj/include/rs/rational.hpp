#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <stdexcept>
#include <string>

namespace rs {

using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

inline double to_double(const Rational& r) { return r.convert_to<double>(); }

inline Rational rational(std::int64_t num, std::int64_t den = 1) {
    if (den == 0) throw std::invalid_argument("rational: zero denominator");
    return Rational(num, den);
}

/// Parses "a", "-a", or "a/b" with optional sign.
inline Rational parse_rational(const std::string& s) {
    auto slash = s.find('/');
    if (slash == std::string::npos) return Rational(BigInt(s));
    BigInt num(s.substr(0, slash));
    BigInt den(s.substr(slash + 1));
    if (den == 0) throw std::invalid_argument("parse_rational: zero denominator");
    return Rational(num, den);
}

inline std::string to_string(const Rational& r) {
    std::string s = numerator(r).str();
    if (denominator(r) != 1) s += "/" + denominator(r).str();
    return s;
}

inline BigInt binomial(unsigned n, unsigned k) {
    if (k > n) return 0;
    BigInt result = 1;
    for (unsigned i = 0; i < k; ++i) {
        result *= n - i;
        result /= i + 1;
    }
    return result;
}

inline BigInt factorial(unsigned n) {
    BigInt result = 1;
    for (unsigned i = 2; i <= n; ++i) result *= i;
    return result;
}

}  // namespace rs

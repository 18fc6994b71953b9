#include "rs/graded.hpp"
#include "rs/rational.hpp"

#include <catch2/catch_amalgamated.hpp>

using rs::GradedIndexSet;
using rs::GradedMap;
using rs::Homogeneity;
using rs::Rational;
using rs::TriangularSense;

namespace {

// degree-<=2 monomial basis of the 1-d polynomial structure
GradedIndexSet monomials_deg2() {
    GradedIndexSet b;
    b.add(Homogeneity(0), "1");
    b.add(Homogeneity(1), "X");
    b.add(Homogeneity(2), "X^2");
    return b;
}

// Gamma_h X^k = (X - h)^k expanded in the monomial basis
GradedMap<Rational> gamma_h(const Rational& h) {
    auto b = monomials_deg2();
    GradedMap<Rational> m(b, b);
    m.at(0, 0) = 1;
    m.at(0, 1) = -h;
    m.at(1, 1) = 1;
    m.at(0, 2) = h * h;
    m.at(1, 2) = -2 * h;
    m.at(2, 2) = 1;
    return m;
}

}  // namespace

TEST_CASE("identity map is lower triangular") {
    auto id = GradedMap<Rational>::identity(monomials_deg2());
    CHECK(rs::check_lower_triangular(id).pass);
}

TEST_CASE("polynomial reexpansion passes the triangular check") {
    auto g = gamma_h(Rational(3, 7));
    CHECK(rs::check_lower_triangular(g).pass);
}

TEST_CASE("degree-raising map fails") {
    auto b = monomials_deg2();
    GradedMap<Rational> m = GradedMap<Rational>::identity(b);
    m.at(1, 0) = 1;  // sends the degree-0 vector to a degree-1 vector
    auto rep = rs::check_lower_triangular(m);
    CHECK_FALSE(rep.pass);
    REQUIRE(rep.offending.size() == 1);
    CHECK(rep.offending[0].first == "X");
    CHECK(rep.offending[0].second == "1");
}

TEST_CASE("group closure: compositions of passing maps pass") {
    auto a = gamma_h(Rational(1, 2));
    auto b = gamma_h(Rational(-2, 3));
    auto c = a.compose(b);
    CHECK(rs::check_lower_triangular(c).pass);
    // composition law of the polynomial structure group: Gamma_h Gamma_g = Gamma_{h+g}
    auto direct = gamma_h(Rational(1, 2) + Rational(-2, 3));
    CHECK((c - direct).max_abs() == 0);
}

TEST_CASE("apply expands in the graded basis") {
    auto g = gamma_h(Rational(1));
    // (X - 1)^2 = X^2 - 2X + 1
    auto v = g.apply({Rational(0), Rational(0), Rational(1)});
    CHECK(v[0] == 1);
    CHECK(v[1] == -2);
    CHECK(v[2] == 1);
}

TEST_CASE("corrections_above sense accepts degree-raising corrections") {
    auto b = monomials_deg2();
    auto m = GradedMap<Rational>::identity(b);
    m.at(2, 0) = Rational(5);  // correction strictly above the diagonal degree
    CHECK_FALSE(rs::check_lower_triangular(m).pass);
    CHECK(rs::check_lower_triangular(m, TriangularSense::corrections_above).pass);
}

TEST_CASE("grading mismatch is an error") {
    GradedIndexSet small;
    small.add(Homogeneity(0), "1");
    GradedMap<Rational> m(small, monomials_deg2());
    CHECK_THROWS(rs::check_lower_triangular(m));
}

#include "rs/phi4.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <vector>

using namespace rs;

namespace {
Tree ixi() { return sym_I(sym_xi()); }
Tree ixi_pow(int n) { return sym_prod(std::vector<Tree>(n, ixi())); }
Tree bracket(int a, int b) {
    std::vector<Tree> fs(b, ixi());
    fs.push_back(sym_I(ixi_pow(a)));
    return sym_prod(fs);
}
Tree x_spatial(int i) {
    MultiIndex k{{0, 0, 0, 0}};
    k[i] = 1;
    return sym_poly(k);
}
ScalarPoly rat(std::int64_t n) { return ScalarPoly(Rational(n)); }
}  // namespace

TEST_CASE("L1 substitution examples") {
    CHECK(apply_L1(ixi_pow(3)) == rat(3) * FormalSum(ixi()));                    // L1<3> = 3<1>
    CHECK(apply_L1(sym_mul(sym_I(ixi()), ixi_pow(2))) == FormalSum(sym_I(ixi()))); // L1<12> = <10>
    CHECK(apply_L1(sym_xi()).is_zero());
    CHECK(apply_L1(ixi_pow(2)) == FormalSum(sym_one()));                          // defining rule
    CHECK(apply_L1(sym_I(ixi_pow(2))).is_zero());                                 // L1<20> = I(1) = 0
    CHECK(apply_L1(bracket(2, 2)) == FormalSum(sym_I(ixi_pow(2))));               // L1<22> = <20>
    // L1<32> = <30> + 3<12>
    FormalSum expected(sym_I(ixi_pow(3)));
    expected = expected + rat(3) * FormalSum(sym_mul(sym_I(ixi()), ixi_pow(2)));
    CHECK(apply_L1(bracket(3, 2)) == expected);
    // product with a polynomial factor: L1(X_i<2>) = X_i
    CHECK(apply_L1(sym_mul(x_spatial(1), ixi_pow(2))) == FormalSum(x_spatial(1)));
}

TEST_CASE("L2 substitution examples") {
    CHECK(apply_L2(bracket(2, 2)) == FormalSum(sym_one()));      // defining rule <22> -> 1
    CHECK(apply_L2(bracket(3, 2)) == rat(3) * FormalSum(ixi())); // L2<32> = 3<1>
    CHECK(apply_L2(sym_xi()).is_zero());
    CHECK(apply_L2(ixi_pow(3)).is_zero());
    CHECK(apply_L2(bracket(3, 1)).is_zero());                    // only one root leg
}

TEST_CASE("L1 and L2 commute on the truncated span") {
    auto syms = generate_symbols(Homogeneity(Rational(3, 2)));
    for (const auto& s : syms) {
        FormalSum a = apply_L2(apply_L1(FormalSum(s.tree)));
        FormalSum b = apply_L1(apply_L2(FormalSum(s.tree)));
        CHECK(a == b);
    }
}

TEST_CASE("renormalisation map on single symbols") {
    ScalarPoly C1 = ScalarPoly::name("C1"), C2 = ScalarPoly::name("C2");
    // M<2> = <2> - C1 1
    FormalSum m2 = apply_M_tree(ixi_pow(2), C1, C2);
    CHECK(m2.coefficient(ixi_pow(2)) == rat(1));
    CHECK(m2.coefficient(sym_one()) == -C1);
    // M Xi = Xi
    CHECK(apply_M_tree(sym_xi(), C1, C2) == FormalSum(sym_xi()));
    // M<3> = <3> - 3 C1 <1> (L1^2 <3> = 0 at this order)
    FormalSum m3 = apply_M_tree(ixi_pow(3), C1, C2);
    CHECK(m3.coefficient(ixi_pow(3)) == rat(1));
    CHECK(m3.coefficient(ixi()) == -(rat(3) * C1));
    CHECK(m3.terms().size() == 2);
}

TEST_CASE("renorm_map matrix is exact and triangular in the raising sense") {
    auto syms = generate_symbols(Homogeneity(Rational(3, 2)));
    Rational c1(3, 7), c2(-2, 5);
    auto M = renorm_map(c1, c2, syms);
    CHECK(check_lower_triangular(M, TriangularSense::corrections_above).pass);
    // exact inverse: M^{-1} = exp(+C1 L1 + C2 L2)
    auto Minv = renorm_map(-c1, -c2, syms);
    auto prod = M.compose(Minv);
    auto id = GradedMap<Rational>::identity(M.domain());
    CHECK((prod - id).max_abs() == 0);
    auto prod2 = Minv.compose(M);
    CHECK((prod2 - id).max_abs() == 0);
    // spot entries: M<2> has -C1 against the unit symbol
    auto& basis = M.domain();
    CHECK(M.at(basis.index_of("1"), basis.index_of("<2>")) == -c1);
    CHECK(M.at(basis.index_of("1"), basis.index_of("<22>")) == -c2);
    CHECK(M.at(basis.index_of("<1>"), basis.index_of("<32>")) == -3 * c2);
}

TEST_CASE("picard expansion reaches the documented fixed point") {
    FormalSum phi = picard_expand(Homogeneity(1));
    // Phi = <1> + phi 1 - <30> - 3 phi <20> + <grad phi, X>
    CHECK(phi.coefficient(ixi()) == rat(1));
    CHECK(phi.coefficient(sym_one()) == ScalarPoly::name("phi"));
    CHECK(phi.coefficient(sym_I(ixi_pow(3))) == rat(-1));
    CHECK(phi.coefficient(sym_I(ixi_pow(2))) == -(rat(3) * ScalarPoly::name("phi")));
    for (int i = 1; i <= 3; ++i)
        CHECK(phi.coefficient(x_spatial(i)) == ScalarPoly::name("dphi_" + std::to_string(i)));
    CHECK(phi.terms().size() == 7);

    // truncation at -1/2 keeps only <1>
    FormalSum low = picard_expand(Homogeneity(Rational(-1, 2)));
    CHECK(low == FormalSum(ixi()));

    // idempotence: iterating the map once more leaves the fixed point unchanged
    FormalSum cube = phi * phi * phi;
    FormalSum rhs = FormalSum(sym_xi()) - cube;
    FormalSum integrated;
    for (const auto& [t, c] : rhs.terms()) integrated.add(sym_I(t), c);
    FormalSum poly_part;
    poly_part.add(sym_one(), ScalarPoly::name("phi"));
    for (int i = 1; i <= 3; ++i)
        poly_part.add(x_spatial(i), ScalarPoly::name("dphi_" + std::to_string(i)));
    CHECK((integrated + poly_part).truncate_at(Homogeneity(1)) == phi);
}

TEST_CASE("rhs expansion reproduces the documented coefficients") {
    FormalSum phi = picard_expand(Homogeneity(1));
    FormalSum rhs = rhs_expand(phi);
    ScalarPoly p = ScalarPoly::name("phi");
    CHECK(rhs.coefficient(sym_xi()) == rat(1));
    CHECK(rhs.coefficient(ixi_pow(3)) == rat(-1));
    CHECK(rhs.coefficient(ixi_pow(2)) == -(rat(3) * p));
    CHECK(rhs.coefficient(bracket(3, 2)) == rat(3));
    CHECK(rhs.coefficient(ixi()) == -(rat(3) * p * p));
    CHECK(rhs.coefficient(bracket(3, 1)) == rat(6) * p);
    CHECK(rhs.coefficient(bracket(2, 2)) == rat(9) * p);
    for (int i = 1; i <= 3; ++i)
        CHECK(rhs.coefficient(sym_mul(x_spatial(i), ixi_pow(2))) ==
              -(rat(3) * ScalarPoly::name("dphi_" + std::to_string(i))));
    CHECK(rhs.coefficient(sym_one()) == -(p * p * p));
    CHECK(rhs.terms().size() == 11);  // 9 displayed terms, the gradient one split over i = 1..3

    // phi = <1> alone: Xi - <3>
    CHECK(rhs_expand(FormalSum(ixi())) == FormalSum(sym_xi()) - FormalSum(ixi_pow(3)));
    // phi = 0: Xi
    CHECK(rhs_expand(FormalSum()) == FormalSum(sym_xi()));
}

TEST_CASE("renormalised equation identity") {
    // generic symbolic C1, C2, phi
    auto rep = renormalized_rhs();
    CHECK(rep.identity_holds);
    CHECK(rep.difference.is_zero());
    CHECK(rep.counterterm == rat(3) * ScalarPoly::name("C1") - rat(9) * ScalarPoly::name("C2"));

    // C1 = C2 = 0: M is the identity
    auto trivial = renormalized_rhs(rat(0), rat(0));
    CHECK(trivial.identity_holds);
    CHECK(trivial.counterterm.is_zero());

    // numeric C1 = 1, C2 = 0: counterterm coefficient 3
    auto numeric = renormalized_rhs(rat(1), rat(0));
    CHECK(numeric.identity_holds);
    CHECK(numeric.counterterm == rat(3));
}

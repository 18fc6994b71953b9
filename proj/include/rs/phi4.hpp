#pragma once

#include "rs/graded.hpp"
#include "rs/scalar_poly.hpp"
#include "rs/trees.hpp"

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace rs {

// ---------------------------------------------------------------------------
// Linear combinations of tree symbols with ScalarPoly coefficients, the
// substitution generators L1 (<2> -> 1) and L2 (<22> -> 1), the
// renormalisation map M = exp(-C1 L1 - C2 L2), and the truncated expansion
// machinery for the Phi^4_3 right-hand side.
// ---------------------------------------------------------------------------

class FormalSum {
public:
    using Terms = std::map<Tree, ScalarPoly, TreeLess>;

    FormalSum() = default;
    FormalSum(const Tree& t, ScalarPoly c = ScalarPoly(1)) { add(t, std::move(c)); }

    void add(const Tree& t, const ScalarPoly& c) {
        if (!t || c.is_zero()) return;
        auto it = terms_.find(t);
        if (it == terms_.end()) {
            terms_[t] = c;
        } else {
            it->second += c;
            if (it->second.is_zero()) terms_.erase(it);
        }
    }

    bool is_zero() const { return terms_.empty(); }
    const Terms& terms() const { return terms_; }

    ScalarPoly coefficient(const Tree& t) const {
        auto it = terms_.find(t);
        return it == terms_.end() ? ScalarPoly() : it->second;
    }

    friend FormalSum operator+(const FormalSum& a, const FormalSum& b) {
        FormalSum out = a;
        for (const auto& [t, c] : b.terms_) out.add(t, c);
        return out;
    }
    friend FormalSum operator-(const FormalSum& a, const FormalSum& b) {
        FormalSum out = a;
        for (const auto& [t, c] : b.terms_) out.add(t, -c);
        return out;
    }
    friend FormalSum operator*(const ScalarPoly& c, const FormalSum& s) {
        FormalSum out;
        for (const auto& [t, ct] : s.terms_) out.add(t, c * ct);
        return out;
    }
    friend FormalSum operator*(const FormalSum& a, const FormalSum& b) {
        FormalSum out;
        for (const auto& [ta, ca] : a.terms_)
            for (const auto& [tb, cb] : b.terms_) out.add(sym_mul(ta, tb), ca * cb);
        return out;
    }
    friend bool operator==(const FormalSum& a, const FormalSum& b) {
        if (a.terms_.size() != b.terms_.size()) return false;
        auto it = a.terms_.begin();
        auto jt = b.terms_.begin();
        for (; it != a.terms_.end(); ++it, ++jt)
            if (!tree_equal(it->first, jt->first) || !(it->second == jt->second)) return false;
        return true;
    }

    FormalSum truncate_at(const Homogeneity& cap) const {
        FormalSum out;
        for (const auto& [t, c] : terms_)
            if (t->hom <= cap) out.add(t, c);
        return out;
    }

    std::string str() const {
        if (terms_.empty()) return "0";
        std::string s;
        for (const auto& [t, c] : terms_) {
            if (!s.empty()) s += " + ";
            s += "(" + c.str() + ")*" + tree_name(t);
        }
        return s;
    }

private:
    Terms terms_;
};

// --- substitution generators ----------------------------------------------

namespace detail {

/// Rebuilds a product from `factors` with `skip` positions removed and the
/// trees of `extra` appended.
inline Tree rebuild_product(const std::vector<Tree>& factors, const std::vector<std::size_t>& skip,
                            const std::vector<Tree>& extra) {
    std::vector<Tree> fs;
    for (std::size_t i = 0; i < factors.size(); ++i) {
        if (std::find(skip.begin(), skip.end(), i) != skip.end()) continue;
        fs.push_back(factors[i]);
    }
    for (const auto& e : extra) fs.push_back(e);
    return sym_prod(fs);
}

}  // namespace detail

FormalSum apply_L1(const Tree& t);
FormalSum apply_L2(const Tree& t);

namespace detail {

/// Shared recursion: applies op inside one factor at a time, and inside the
/// child of an integration node.
template <typename Op>
FormalSum recurse_into(const Tree& t, Op&& op) {
    FormalSum out;
    if (!t) return out;
    if (t->kind == TreeNode::Kind::integ) {
        FormalSum inner = op(t->child);
        for (const auto& [s, c] : inner.terms()) out.add(sym_I(s), c);
        return out;
    }
    if (t->kind == TreeNode::Kind::prod) {
        for (std::size_t i = 0; i < t->factors.size(); ++i) {
            if (i > 0 && tree_equal(t->factors[i], t->factors[i - 1])) continue;  // dedupe
            int mult = 0;
            for (const auto& f : t->factors) mult += tree_equal(f, t->factors[i]) ? 1 : 0;
            FormalSum inner = op(t->factors[i]);
            for (const auto& [s, c] : inner.terms()) {
                Tree rebuilt = rebuild_product(t->factors, {i}, {s});
                out.add(rebuilt, ScalarPoly(Rational(mult)) * c);
            }
        }
    }
    return out;
}

}  // namespace detail

/// L1: substitute <2> = I(Xi)*I(Xi) by 1, summing over all occurrences of the
/// pair as a sub-multiset of a product node, recursing through I(.).
inline FormalSum apply_L1(const Tree& t) {
    FormalSum out;
    if (!t) return out;
    if (t->kind == TreeNode::Kind::prod) {
        std::vector<std::size_t> ixi;
        for (std::size_t i = 0; i < t->factors.size(); ++i)
            if (is_I_xi(t->factors[i])) ixi.push_back(i);
        if (ixi.size() >= 2) {
            std::int64_t ways = static_cast<std::int64_t>(ixi.size()) * (ixi.size() - 1) / 2;
            Tree rebuilt = detail::rebuild_product(t->factors, {ixi[0], ixi[1]}, {});
            out.add(rebuilt, ScalarPoly(Rational(ways)));
        }
    }
    return out + detail::recurse_into(t, [](const Tree& s) { return apply_L1(s); });
}

/// L2: substitute <22> = I(<2>)*I(Xi)*I(Xi) by 1. An occurrence takes two
/// I(Xi) factors of a product node together with an integration factor I(Q)
/// whose argument contains at least two I(Xi) factors; those two inner
/// factors are removed and the remainder of Q is reattached to the host
/// product (the contraction glues the integration vertex onto the root).
/// This is the reading that yields L2<22> = 1 and L2<32> = 3<1>.
inline FormalSum apply_L2(const Tree& t) {
    FormalSum out;
    if (!t) return out;
    if (t->kind == TreeNode::Kind::prod) {
        std::vector<std::size_t> ixi;
        for (std::size_t i = 0; i < t->factors.size(); ++i)
            if (is_I_xi(t->factors[i])) ixi.push_back(i);
        if (ixi.size() >= 2) {
            std::int64_t root_ways = static_cast<std::int64_t>(ixi.size()) * (ixi.size() - 1) / 2;
            for (std::size_t i = 0; i < t->factors.size(); ++i) {
                const Tree& f = t->factors[i];
                if (f->kind != TreeNode::Kind::integ || is_I_xi(f)) continue;
                if (i > 0 && tree_equal(f, t->factors[i - 1])) continue;
                auto inner = product_factors(f->child);
                std::vector<std::size_t> inner_ixi;
                for (std::size_t j = 0; j < inner.size(); ++j)
                    if (is_I_xi(inner[j])) inner_ixi.push_back(j);
                if (inner_ixi.size() < 2) continue;
                std::int64_t inner_ways =
                    static_cast<std::int64_t>(inner_ixi.size()) * (inner_ixi.size() - 1) / 2;
                int mult = 0;
                for (const auto& g : t->factors) mult += tree_equal(g, f) ? 1 : 0;
                std::vector<Tree> reattached;
                for (std::size_t j = 0; j < inner.size(); ++j) {
                    if (j == inner_ixi[0] || j == inner_ixi[1]) continue;
                    reattached.push_back(inner[j]);
                }
                Tree rebuilt = detail::rebuild_product(t->factors, {ixi[0], ixi[1], i}, reattached);
                out.add(rebuilt, ScalarPoly(Rational(root_ways * inner_ways * mult)));
            }
        }
    }
    return out + detail::recurse_into(t, [](const Tree& s) { return apply_L2(s); });
}

inline FormalSum apply_L1(const FormalSum& s) {
    FormalSum out;
    for (const auto& [t, c] : s.terms()) out = out + c * apply_L1(t);
    return out;
}
inline FormalSum apply_L2(const FormalSum& s) {
    FormalSum out;
    for (const auto& [t, c] : s.terms()) out = out + c * apply_L2(t);
    return out;
}

// --- the renormalisation map M = exp(-C1 L1 - C2 L2) -----------------------

/// Exact exponential series; terminates because each substitution strictly
/// lowers the Xi-count, so the generators are nilpotent on any finite sum.
inline FormalSum apply_M(const FormalSum& s, const ScalarPoly& C1, const ScalarPoly& C2,
                         int max_order = 64) {
    FormalSum total = s;
    FormalSum power = s;  // unscaled j-th power of the generator
    Rational factorial = 1;
    for (int j = 1; j <= max_order; ++j) {
        power = (-C1) * apply_L1(power) + (-C2) * apply_L2(power);
        if (power.is_zero()) return total;
        factorial *= j;
        for (const auto& [t, c] : power.terms())
            total = total + FormalSum(t, ScalarPoly(Rational(1) / factorial) * c);
    }
    throw std::runtime_error("apply_M: series did not terminate");
}

inline FormalSum apply_M_tree(const Tree& t, const ScalarPoly& C1, const ScalarPoly& C2) {
    return apply_M(FormalSum(t), C1, C2);
}

/// Matrix of M on the span of the generated symbol list, exact rational
/// entries. Components of images outside the truncation are dropped.
inline GradedMap<Rational> renorm_map(const Rational& C1, const Rational& C2,
                                      const std::vector<SymbolEntry>& symbols) {
    GradedIndexSet basis;
    for (const auto& s : symbols) basis.add(s.hom, s.name);
    GradedMap<Rational> m(basis, basis);
    for (std::size_t col = 0; col < symbols.size(); ++col) {
        FormalSum image = apply_M_tree(symbols[col].tree, ScalarPoly(C1), ScalarPoly(C2));
        for (const auto& [t, c] : image.terms()) {
            // match against representatives (spatial orbits are collapsed)
            for (std::size_t row = 0; row < symbols.size(); ++row) {
                if (tree_equal(t, symbols[row].tree)) {
                    m.at(row, col) = c.constant_value();
                    break;
                }
            }
        }
    }
    return m;
}

// --- truncated Picard expansion and the renormalised equation --------------

/// Fixed point of Phi -> I(Xi - Phi^3) + phi*1 + <grad phi, X>, truncated
/// above order_cap. phi and the three components of grad phi are opaque
/// scalar names. Intended for caps at or below the paper regime (cap ~ 1);
/// higher caps would need further named coefficients in the polynomial part.
inline FormalSum picard_expand(const Homogeneity& order_cap, int max_iter = 12) {
    FormalSum poly_part;
    poly_part.add(sym_one(), ScalarPoly::name("phi"));
    for (int i = 1; i <= 3; ++i) {
        MultiIndex k{{0, 0, 0, 0}};
        k[i] = 1;
        poly_part.add(sym_poly(k), ScalarPoly::name("dphi_" + std::to_string(i)));
    }
    poly_part = poly_part.truncate_at(order_cap);

    FormalSum phi = (FormalSum(sym_I(sym_xi())) + poly_part).truncate_at(order_cap);
    for (int it = 0; it < max_iter; ++it) {
        FormalSum cube = (phi * phi * phi);
        FormalSum rhs = FormalSum(sym_xi()) - cube;
        FormalSum integrated;
        for (const auto& [t, c] : rhs.terms()) integrated.add(sym_I(t), c);
        FormalSum next = (integrated + poly_part).truncate_at(order_cap);
        if (next == phi) return phi;
        phi = next;
    }
    throw std::runtime_error("picard_expand: no fixed point within iteration cap");
}

/// Xi - phi^3 expanded and truncated at order 0.
inline FormalSum rhs_expand(const FormalSum& phi) {
    return (FormalSum(sym_xi()) - phi * phi * phi).truncate_at(Homogeneity(0));
}

struct RenormalizedRhsReport {
    FormalSum m_of_rhs;       // M(Xi - Phi^3), truncated at order 0
    FormalSum reassembled;    // Xi - (M Phi)^3 + (3C1 - 9C2) M Phi, truncated
    FormalSum difference;     // must be identically zero
    ScalarPoly counterterm;   // 3C1 - 9C2
    bool identity_holds = false;
};

/// Checks M(Xi - Phi^3) = Xi - (M Phi)^3 + (3C1 - 9C2) M Phi modulo positive
/// homogeneity, with symbolic or numeric C1, C2.
inline RenormalizedRhsReport renormalized_rhs(const ScalarPoly& C1 = ScalarPoly::name("C1"),
                                              const ScalarPoly& C2 = ScalarPoly::name("C2")) {
    RenormalizedRhsReport rep;
    FormalSum phi = picard_expand(Homogeneity(1));
    rep.m_of_rhs = apply_M(rhs_expand(phi), C1, C2).truncate_at(Homogeneity(0));
    FormalSum mphi = apply_M(phi, C1, C2);
    ScalarPoly three(Rational(3)), nine(Rational(9));
    rep.counterterm = three * C1 - nine * C2;
    rep.reassembled =
        (FormalSum(sym_xi()) - mphi * mphi * mphi + rep.counterterm * mphi).truncate_at(Homogeneity(0));
    rep.difference = rep.m_of_rhs - rep.reassembled;
    rep.identity_holds = rep.difference.is_zero();
    return rep;
}

}  // namespace rs

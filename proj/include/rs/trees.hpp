#pragma once

#include "rs/homogeneity.hpp"

#include <algorithm>
#include <array>
#include <cstdint>
#include <map>
#include <memory>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace rs {

// ---------------------------------------------------------------------------
// Formal tree symbols over {Xi, X^k, I(.), products}. Trees are immutable and
// kept in canonical form by the factory functions below: products are
// flattened and sorted, polynomial factors are merged into a single X^k, a
// product of one element collapses, and I(X^k) is the zero symbol (returned
// as a null Tree).
//
// Conventions for the Phi^4_3 structure: coordinate 0 is time and counts
// double in the parabolic degree; |Xi| = -5/2 - kappa; |I(t)| = |t| + 2.
// ---------------------------------------------------------------------------

struct TreeNode;
using Tree = std::shared_ptr<const TreeNode>;

using MultiIndex = std::array<int, 4>;

inline int parabolic_degree(const MultiIndex& k) { return 2 * k[0] + k[1] + k[2] + k[3]; }

struct TreeNode {
    enum class Kind { xi, poly, integ, prod };
    Kind kind;
    MultiIndex k{{0, 0, 0, 0}};  // poly only
    Tree child;                  // integ only
    std::vector<Tree> factors;   // prod only; canonical order, no nested prod
    Homogeneity hom;
};

inline int tree_compare(const Tree& a, const Tree& b);

inline bool tree_equal(const Tree& a, const Tree& b) { return tree_compare(a, b) == 0; }

inline int tree_compare(const Tree& a, const Tree& b) {
    if (!a || !b) return (a ? 1 : 0) - (b ? 1 : 0);
    if (a.get() == b.get()) return 0;
    auto rank = [](const TreeNode& n) { return static_cast<int>(n.kind); };
    if (rank(*a) != rank(*b)) return rank(*a) < rank(*b) ? -1 : 1;
    switch (a->kind) {
        case TreeNode::Kind::xi:
            return 0;
        case TreeNode::Kind::poly:
            return a->k < b->k ? -1 : (b->k < a->k ? 1 : 0);
        case TreeNode::Kind::integ:
            return tree_compare(a->child, b->child);
        case TreeNode::Kind::prod: {
            if (a->factors.size() != b->factors.size())
                return a->factors.size() < b->factors.size() ? -1 : 1;
            for (std::size_t i = 0; i < a->factors.size(); ++i) {
                int c = tree_compare(a->factors[i], b->factors[i]);
                if (c != 0) return c;
            }
            return 0;
        }
    }
    return 0;
}

struct TreeLess {
    bool operator()(const Tree& a, const Tree& b) const { return tree_compare(a, b) < 0; }
};

inline Tree sym_xi() {
    auto n = std::make_shared<TreeNode>();
    n->kind = TreeNode::Kind::xi;
    n->hom = Homogeneity(Rational(-5, 2), -1);
    return n;
}

inline Tree sym_poly(const MultiIndex& k) {
    auto n = std::make_shared<TreeNode>();
    n->kind = TreeNode::Kind::poly;
    n->k = k;
    n->hom = Homogeneity(parabolic_degree(k));
    return n;
}

inline Tree sym_one() { return sym_poly({{0, 0, 0, 0}}); }

inline bool is_one(const Tree& t) {
    return t && t->kind == TreeNode::Kind::poly && parabolic_degree(t->k) == 0;
}

/// I(X^k) = 0, mirroring K * (polynomial) = 0 for a kernel with enough
/// vanishing moments. Zero is represented by a null Tree.
inline Tree sym_I(const Tree& t) {
    if (!t) return nullptr;
    if (t->kind == TreeNode::Kind::poly) return nullptr;
    auto n = std::make_shared<TreeNode>();
    n->kind = TreeNode::Kind::integ;
    n->child = t;
    n->hom = t->hom + Homogeneity(2);
    return n;
}

inline Tree sym_prod(std::vector<Tree> factors) {
    std::vector<Tree> flat;
    MultiIndex poly{{0, 0, 0, 0}};
    bool has_poly = false;
    for (const auto& f : factors) {
        if (!f) return nullptr;
        if (f->kind == TreeNode::Kind::prod) {
            for (const auto& g : f->factors) {
                if (g->kind == TreeNode::Kind::poly) {
                    for (int i = 0; i < 4; ++i) poly[i] += g->k[i];
                    has_poly = true;
                } else {
                    flat.push_back(g);
                }
            }
        } else if (f->kind == TreeNode::Kind::poly) {
            for (int i = 0; i < 4; ++i) poly[i] += f->k[i];
            has_poly = true;
        } else {
            flat.push_back(f);
        }
    }
    if (has_poly && parabolic_degree(poly) > 0) flat.push_back(sym_poly(poly));
    if (flat.empty()) return sym_one();
    std::sort(flat.begin(), flat.end(), TreeLess{});
    if (flat.size() == 1) return flat[0];
    auto n = std::make_shared<TreeNode>();
    n->kind = TreeNode::Kind::prod;
    n->factors = std::move(flat);
    Homogeneity h;
    for (const auto& f : n->factors) h += f->hom;
    n->hom = h;
    return n;
}

inline Tree sym_mul(const Tree& a, const Tree& b) { return sym_prod({a, b}); }

inline Homogeneity homogeneity(const Tree& t) {
    if (!t) throw std::invalid_argument("homogeneity of the zero symbol");
    return t->hom;
}

/// Factors viewed as a product (a non-product node is a product of itself).
inline std::vector<Tree> product_factors(const Tree& t) {
    if (!t) return {};
    if (t->kind == TreeNode::Kind::prod) return t->factors;
    if (is_one(t)) return {};
    return {t};
}

// --- naming --------------------------------------------------------------

inline bool is_I_xi(const Tree& t) {
    return t && t->kind == TreeNode::Kind::integ && t->child->kind == TreeNode::Kind::xi;
}

/// If t = I(I(Xi)^a), returns a >= 1, else 0.
inline int inner_I_xi_power(const Tree& t) {
    if (!t || t->kind != TreeNode::Kind::integ) return 0;
    const Tree& c = t->child;
    if (is_I_xi(c)) return 1;
    if (c->kind != TreeNode::Kind::prod) return 0;
    for (const auto& f : c->factors)
        if (!is_I_xi(f)) return 0;
    return static_cast<int>(c->factors.size());
}

inline std::string poly_name(const MultiIndex& k, bool symbolic_spatial) {
    std::string s;
    auto coord = [&](int i) {
        if (!symbolic_spatial) return "X_" + std::to_string(i);
        return std::string(i == 0 ? "X_0" : "X_i");
    };
    for (int i = 0; i < 4; ++i) {
        if (k[i] == 0) continue;
        s += coord(i);
        if (k[i] > 1) s += "^" + std::to_string(k[i]);
    }
    return s;
}

/// Short names following the bracket scheme: <b> = I(Xi)^b,
/// <ab> = I(I(Xi)^a) * I(Xi)^b, with an optional polynomial prefix.
/// Anything else falls back to functional notation.
inline std::string tree_name(const Tree& t, bool symbolic_spatial = false) {
    if (!t) return "0";
    switch (t->kind) {
        case TreeNode::Kind::xi:
            return "Xi";
        case TreeNode::Kind::poly:
            return is_one(t) ? "1" : poly_name(t->k, symbolic_spatial);
        case TreeNode::Kind::integ: {
            if (is_I_xi(t)) return "<1>";
            if (int a = inner_I_xi_power(t); a > 0) return "<" + std::to_string(a) + "0>";
            return "I(" + tree_name(t->child, symbolic_spatial) + ")";
        }
        case TreeNode::Kind::prod: {
            std::string prefix;
            int b = 0;
            std::vector<Tree> rest;
            for (const auto& f : t->factors) {
                if (f->kind == TreeNode::Kind::poly)
                    prefix = poly_name(f->k, symbolic_spatial);
                else if (is_I_xi(f))
                    ++b;
                else
                    rest.push_back(f);
            }
            if (rest.empty() && b > 0) return prefix + "<" + std::to_string(b) + ">";
            if (rest.size() == 1) {
                if (int a = inner_I_xi_power(rest[0]); a > 0)
                    return prefix + "<" + std::to_string(a) + std::to_string(b) + ">";
            }
            std::string s = prefix;
            auto append = [&s](const std::string& factor, int power) {
                if (!s.empty()) s += "*";
                s += factor;
                if (power > 1) s += "^" + std::to_string(power);
            };
            for (std::size_t i = 0; i < rest.size();) {
                std::size_t j = i;
                while (j < rest.size() && tree_equal(rest[j], rest[i])) ++j;
                append(tree_name(rest[i], symbolic_spatial), static_cast<int>(j - i));
                i = j;
            }
            if (b > 0) append("<1>", b);
            return s;
        }
    }
    return "?";
}

// --- generation of the Phi^4_3 symbol sets U and W -------------------------

struct SymbolEntry {
    Tree tree;            // representative, spatial indices collapsed
    std::string name;     // representative name with symbolic spatial index
    Homogeneity hom;
    int multiplicity = 1;  // orbit size under permutations of the 3 spatial axes
};

namespace detail {

/// Applies a permutation of the spatial coordinates (1,2,3) to every
/// polynomial node of the tree.
inline Tree permute_spatial(const Tree& t, const std::array<int, 3>& perm) {
    if (!t) return nullptr;
    switch (t->kind) {
        case TreeNode::Kind::xi:
            return t;
        case TreeNode::Kind::poly: {
            MultiIndex k{{t->k[0], 0, 0, 0}};
            for (int i = 0; i < 3; ++i) k[perm[i]] = t->k[1 + i];
            return sym_poly(k);
        }
        case TreeNode::Kind::integ:
            return sym_I(permute_spatial(t->child, perm));
        case TreeNode::Kind::prod: {
            std::vector<Tree> fs;
            for (const auto& f : t->factors) fs.push_back(permute_spatial(f, perm));
            return sym_prod(fs);
        }
    }
    return nullptr;
}

inline std::vector<std::array<int, 3>> spatial_permutations() {
    std::array<int, 3> p{{1, 2, 3}};
    std::vector<std::array<int, 3>> out;
    std::sort(p.begin(), p.end());
    do out.push_back(p);
    while (std::next_permutation(p.begin(), p.end()));
    return out;
}

}  // namespace detail

/// Sort key used for symbol tables: homogeneity first, then fewer top-level
/// factors, then structural order. This reproduces the documented order
/// (<31> before <22>, <30> before <21>).
inline bool symbol_order_less(const Tree& a, const Tree& b) {
    const Homogeneity& ha = a->hom;
    const Homogeneity& hb = b->hom;
    if (ha != hb) return ha < hb;
    std::size_t fa = std::max<std::size_t>(product_factors(a).size(), 1);
    std::size_t fb = std::max<std::size_t>(product_factors(b).size(), 1);
    if (fa != fb) return fa < fb;
    return tree_compare(a, b) < 0;
}

/// All elements of W = {Xi} ∪ {t1 t2 t3 : ti ∈ U} with homogeneity strictly
/// below the threshold, where U is the closure of {1, X, I(Xi)} under
/// t1,t2,t3 -> I(t1 t2 t3). Symbols related by a permutation of the spatial
/// axes are collapsed to one representative with a multiplicity count.
inline std::vector<SymbolEntry> generate_symbols(const Homogeneity& threshold,
                                                 int max_closure_depth = 64) {
    // Factors of a W-product need homogeneity < threshold - 2*|I(Xi)|.
    Homogeneity factor_bound = threshold + Homogeneity(Rational(1), 2);

    std::set<Tree, TreeLess> U;
    U.insert(sym_one());
    for (int i = 0; i < 4; ++i) {
        MultiIndex k{{0, 0, 0, 0}};
        k[i] = 1;
        Tree x = sym_poly(k);
        if (x->hom < factor_bound) U.insert(x);
    }
    U.insert(sym_I(sym_xi()));

    for (int depth = 0;; ++depth) {
        if (depth >= max_closure_depth)
            throw std::runtime_error("generate_symbols: closure did not stabilise (threshold too large?)");
        std::vector<Tree> pool(U.begin(), U.end());
        std::vector<Tree> fresh;
        for (std::size_t i = 0; i < pool.size(); ++i)
            for (std::size_t j = i; j < pool.size(); ++j) {
                Homogeneity hij = pool[i]->hom + pool[j]->hom;
                for (std::size_t l = j; l < pool.size(); ++l) {
                    Homogeneity h = hij + pool[l]->hom + Homogeneity(2);
                    if (!(h < factor_bound)) continue;
                    Tree t = sym_I(sym_prod({pool[i], pool[j], pool[l]}));
                    if (t && !U.count(t)) fresh.push_back(t);
                }
            }
        if (fresh.empty()) break;
        for (auto& t : fresh) U.insert(t);
    }

    std::set<Tree, TreeLess> W;
    {
        Tree xi = sym_xi();
        if (xi->hom < threshold) W.insert(xi);
        std::vector<Tree> pool(U.begin(), U.end());
        for (std::size_t i = 0; i < pool.size(); ++i)
            for (std::size_t j = i; j < pool.size(); ++j)
                for (std::size_t l = j; l < pool.size(); ++l) {
                    Homogeneity h = pool[i]->hom + pool[j]->hom + pool[l]->hom;
                    if (!(h < threshold)) continue;
                    Tree t = sym_prod({pool[i], pool[j], pool[l]});
                    if (t) W.insert(t);
                }
    }

    // Collapse spatial orbits.
    const auto perms = detail::spatial_permutations();
    std::map<Tree, int, TreeLess> orbit_of;  // representative -> orbit size
    for (const auto& t : W) {
        Tree rep = t;
        for (const auto& p : perms) {
            Tree u = detail::permute_spatial(t, p);
            if (tree_compare(u, rep) < 0) rep = u;
        }
        if (tree_equal(rep, t)) {
            std::set<Tree, TreeLess> orbit;
            for (const auto& p : perms) orbit.insert(detail::permute_spatial(t, p));
            orbit_of[rep] = static_cast<int>(orbit.size());
        }
    }

    std::vector<SymbolEntry> out;
    for (const auto& [tree, mult] : orbit_of)
        out.push_back({tree, tree_name(tree, /*symbolic_spatial=*/mult > 1), tree->hom, mult});
    std::sort(out.begin(), out.end(),
              [](const SymbolEntry& a, const SymbolEntry& b) { return symbol_order_less(a.tree, b.tree); });
    return out;
}

}  // namespace rs

#pragma once

#include "rs/homogeneity.hpp"

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace rs {

/// Finite graded basis: strictly increasing degrees, each carrying its basis
/// labels. Labels are opaque strings owned by whoever builds the structure.
class GradedIndexSet {
public:
    GradedIndexSet() = default;

    /// Appends a basis vector; degrees must arrive in non-decreasing order.
    std::size_t add(const Homogeneity& degree, std::string label) {
        if (!degrees_.empty() && degree < degrees_.back())
            throw std::invalid_argument("GradedIndexSet: degrees must be non-decreasing");
        degrees_.push_back(degree);
        labels_.push_back(std::move(label));
        return degrees_.size() - 1;
    }

    std::size_t size() const { return degrees_.size(); }
    const Homogeneity& degree(std::size_t i) const { return degrees_.at(i); }
    const std::string& label(std::size_t i) const { return labels_.at(i); }

    std::size_t index_of(const std::string& label) const {
        for (std::size_t i = 0; i < labels_.size(); ++i)
            if (labels_[i] == label) return i;
        throw std::out_of_range("GradedIndexSet: unknown label " + label);
    }

    /// Distinct degrees in increasing order.
    std::vector<Homogeneity> distinct_degrees() const {
        std::vector<Homogeneity> out;
        for (const auto& d : degrees_)
            if (out.empty() || !(out.back() == d)) out.push_back(d);
        return out;
    }

    friend bool operator==(const GradedIndexSet& a, const GradedIndexSet& b) {
        return a.degrees_ == b.degrees_ && a.labels_ == b.labels_;
    }

private:
    std::vector<Homogeneity> degrees_;
    std::vector<std::string> labels_;
};

struct TriangularReport {
    bool pass = true;
    // (row label, col label) pairs of offending entries
    std::vector<std::pair<std::string, std::string>> offending;
};

/// Which side of the diagonal corrections are allowed to live on.
/// Structure-group elements push mass to strictly lower degrees; the
/// renormalisation maps push it to strictly higher ones.
enum class TriangularSense { corrections_below, corrections_above };

/// Dense linear map between graded bases. Scalar is double for numeric models
/// and Rational for the exact symbolic regime.
template <typename Scalar>
class GradedMap {
public:
    GradedMap() = default;
    GradedMap(GradedIndexSet domain, GradedIndexSet codomain)
        : domain_(std::move(domain)),
          codomain_(std::move(codomain)),
          entries_(codomain_.size() * domain_.size(), Scalar(0)) {}

    static GradedMap identity(const GradedIndexSet& basis) {
        GradedMap m(basis, basis);
        for (std::size_t i = 0; i < basis.size(); ++i) m.at(i, i) = Scalar(1);
        return m;
    }

    const GradedIndexSet& domain() const { return domain_; }
    const GradedIndexSet& codomain() const { return codomain_; }

    Scalar& at(std::size_t row, std::size_t col) { return entries_[row * domain_.size() + col]; }
    const Scalar& at(std::size_t row, std::size_t col) const {
        return entries_[row * domain_.size() + col];
    }

    std::vector<Scalar> apply(const std::vector<Scalar>& v) const {
        if (v.size() != domain_.size()) throw std::invalid_argument("GradedMap::apply: size mismatch");
        std::vector<Scalar> out(codomain_.size(), Scalar(0));
        for (std::size_t i = 0; i < codomain_.size(); ++i)
            for (std::size_t j = 0; j < domain_.size(); ++j)
                if (!(entries_[i * domain_.size() + j] == Scalar(0)))
                    out[i] += entries_[i * domain_.size() + j] * v[j];
        return out;
    }

    /// this ∘ other
    GradedMap compose(const GradedMap& other) const {
        if (!(other.codomain_ == domain_))
            throw std::invalid_argument("GradedMap::compose: grading mismatch");
        GradedMap out(other.domain_, codomain_);
        for (std::size_t i = 0; i < codomain_.size(); ++i)
            for (std::size_t k = 0; k < domain_.size(); ++k) {
                const Scalar& a = at(i, k);
                if (a == Scalar(0)) continue;
                for (std::size_t j = 0; j < other.domain_.size(); ++j)
                    out.at(i, j) += a * other.at(k, j);
            }
        return out;
    }

    friend GradedMap operator-(const GradedMap& a, const GradedMap& b) {
        if (!(a.domain_ == b.domain_) || !(a.codomain_ == b.codomain_))
            throw std::invalid_argument("GradedMap: grading mismatch");
        GradedMap out = a;
        for (std::size_t i = 0; i < out.entries_.size(); ++i) out.entries_[i] -= b.entries_[i];
        return out;
    }

    Scalar max_abs() const {
        Scalar m(0);
        for (const auto& e : entries_) {
            Scalar a = e < Scalar(0) ? Scalar(-e) : e;
            if (m < a) m = a;
        }
        return m;
    }

private:
    GradedIndexSet domain_;
    GradedIndexSet codomain_;
    std::vector<Scalar> entries_;
};

/// Checks that a square graded map is the identity on each degree block with
/// corrections confined to the allowed side of the diagonal.
template <typename Scalar>
TriangularReport check_lower_triangular(const GradedMap<Scalar>& m,
                                        TriangularSense sense = TriangularSense::corrections_below,
                                        Scalar tol = Scalar(0)) {
    if (!(m.domain() == m.codomain()))
        throw std::invalid_argument("check_lower_triangular: grading mismatch");
    const auto& basis = m.domain();
    TriangularReport report;
    auto abs_val = [](Scalar x) { return x < Scalar(0) ? Scalar(-x) : x; };
    for (std::size_t i = 0; i < basis.size(); ++i) {
        for (std::size_t j = 0; j < basis.size(); ++j) {
            Scalar expected(i == j ? 1 : 0);
            bool allowed_correction =
                sense == TriangularSense::corrections_below
                    ? basis.degree(i) < basis.degree(j)
                    : basis.degree(i) > basis.degree(j);
            if (allowed_correction) continue;
            if (abs_val(m.at(i, j) - expected) > tol) {
                report.pass = false;
                report.offending.emplace_back(basis.label(i), basis.label(j));
            }
        }
    }
    return report;
}

}  // namespace rs

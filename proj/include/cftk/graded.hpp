#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "cftk/exact_linalg.hpp"
#include "cftk/scalar.hpp"

namespace cftk {

using Weight = Rational;

enum class Parity { Even, Odd, Mixed };

// q-series with exact rational exponents, strictly increasing
struct QSeries {
    std::vector<std::pair<Rational, Integer>> terms;
};

inline QSeries qseries_of_graded_dims(const std::map<Weight, long>& dims, const Weight& cutoff) {
    QSeries s;
    for (const auto& [w, d] : dims) {
        if (w > cutoff) break;
        if (d != 0) s.terms.emplace_back(w, Integer(d));
    }
    return s;
}

// Weight-indexed coefficient vector relative to a basis registry.
// Only nonzero weight blocks are retained.
struct GradedVector {
    std::map<Weight, std::vector<Scalar>> entries;
    Parity parity = Parity::Mixed;
    std::string registry;

    bool is_zero() const { return entries.empty(); }

    void prune() {
        for (auto it = entries.begin(); it != entries.end();) {
            bool all_zero = true;
            for (const auto& c : it->second)
                if (!c.is_zero()) { all_zero = false; break; }
            it = all_zero ? entries.erase(it) : ++it;
        }
    }

    GradedVector& operator+=(const GradedVector& o) {
        if (registry != o.registry)
            throw std::invalid_argument("graded vectors from different basis registries: " + registry + " vs " + o.registry);
        for (const auto& [w, v] : o.entries) {
            auto& mine = entries[w];
            if (mine.size() < v.size()) mine.resize(v.size());
            for (std::size_t i = 0; i < v.size(); ++i) mine[i] += v[i];
        }
        if (parity != o.parity) parity = Parity::Mixed;
        prune();
        return *this;
    }

    GradedVector& operator*=(const Scalar& s) {
        for (auto& [w, v] : entries)
            for (auto& c : v) c *= s;
        prune();
        return *this;
    }

    friend GradedVector operator+(GradedVector a, const GradedVector& b) { return a += b; }
    friend GradedVector operator*(GradedVector a, const Scalar& s) { return a *= s; }
};

// Sesquilinear pairing, linear in the first slot. gram[w] holds the exact
// Hermitian matrix of the form on the weight-w block; distinct weights are
// orthogonal so cross terms never appear.
inline Scalar graded_inner(const GradedVector& u, const GradedVector& v,
                           const std::map<Weight, QMat>& gram) {
    if (u.registry != v.registry)
        throw std::invalid_argument("graded_inner across basis registries");
    Scalar acc;
    for (const auto& [w, uc] : u.entries) {
        auto jt = v.entries.find(w);
        if (jt == v.entries.end()) continue;
        auto gt = gram.find(w);
        if (gt == gram.end())
            throw std::invalid_argument("missing Gram block for populated weight " + to_string(w));
        const QMat& G = gt->second;
        const auto& vc = jt->second;
        for (std::size_t i = 0; i < uc.size(); ++i) {
            if (uc[i].is_zero()) continue;
            for (std::size_t j = 0; j < vc.size(); ++j) {
                if (vc[j].is_zero()) continue;
                acc += uc[i] * G.at(static_cast<long>(i), static_cast<long>(j)) * vc[j].conj();
            }
        }
    }
    return acc;
}

}  // namespace cftk

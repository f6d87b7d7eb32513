#pragma once

#include <json.hpp>

#include "cftk/exact_linalg.hpp"
#include "cftk/graded.hpp"
#include "cftk/scalar.hpp"

namespace cftk {

using Json = nlohmann::json;

inline Json to_json(const QSeries& s) {
    Json arr = Json::array();
    for (const auto& [e, c] : s.terms)
        arr.push_back(Json{{"exp", to_string(e)}, {"coef", c.get_str()}});
    return arr;
}

inline QSeries qseries_from_json(const Json& j) {
    QSeries s;
    for (const auto& t : j)
        s.terms.emplace_back(rational_from_string(t.at("exp").get<std::string>()),
                             Integer(t.at("coef").get<std::string>()));
    return s;
}

// GradedVector <-> array of {"weight": "p/q", "coeffs": [["re","im"], ...]}
inline Json to_json(const GradedVector& v) {
    Json arr = Json::array();
    for (const auto& [w, coeffs] : v.entries) {
        Json block;
        block["weight"] = to_string(w);
        Json cs = Json::array();
        for (const auto& c : coeffs) cs.push_back(Json::array({to_string(c.re), to_string(c.im)}));
        block["coeffs"] = cs;
        arr.push_back(block);
    }
    return arr;
}

inline GradedVector graded_vector_from_json(const Json& j, const std::string& registry, Parity parity) {
    GradedVector v;
    v.registry = registry;
    v.parity = parity;
    for (const auto& block : j) {
        Weight w = rational_from_string(block.at("weight").get<std::string>());
        std::vector<Scalar> coeffs;
        for (const auto& c : block.at("coeffs"))
            coeffs.emplace_back(rational_from_string(c.at(0).get<std::string>()),
                                rational_from_string(c.at(1).get<std::string>()));
        v.entries[w] = std::move(coeffs);
    }
    v.prune();
    return v;
}

// exact matrices as nested arrays of rational strings ("a" or "a+bi")
inline Json to_json(const QMat& m) {
    Json rows = Json::array();
    for (long i = 0; i < m.rows; ++i) {
        Json row = Json::array();
        for (long j = 0; j < m.cols; ++j) row.push_back(m.at(i, j).str());
        rows.push_back(row);
    }
    return rows;
}

inline QMat qmat_from_json(const Json& j) {
    QMat m(static_cast<long>(j.size()), j.empty() ? 0 : static_cast<long>(j.at(0).size()));
    for (long i = 0; i < m.rows; ++i)
        for (long jj = 0; jj < m.cols; ++jj)
            m.at(i, jj) = scalar_from_string(j.at(static_cast<std::size_t>(i)).at(static_cast<std::size_t>(jj)).get<std::string>());
    return m;
}

}  // namespace cftk

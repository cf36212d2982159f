#pragma once

// JSON forms: Rational -> "num/den", XiElement -> array of those (ascending
// powers of xi), complex -> {"re": x, "im": y}.

#include "rootseries/gkz.hpp"
#include "rootseries/root_series.hpp"
#include "rootseries/scalar.hpp"

#include "json.hpp"

#include <string>

namespace rootseries {

using Json = nlohmann::ordered_json;

inline Json to_json(const Rational& r) { return r.to_string(); }

inline Json to_json(const ComplexF& z) { return Json{{"re", z.real()}, {"im", z.imag()}}; }

inline Json to_json(const XiElement& x) {
    Json arr = Json::array();
    for (const auto& c : x.coeffs()) {
        arr.push_back(c.to_string());
    }
    return arr;
}

inline Json to_json(const MultiIndex& n) { return n.entries(); }

template <RootScalar S>
Json to_json(const AlphaMonomial<S>& m) {
    return Json{{"coeff", to_json(m.coeff)}, {"alpha_exp", to_json(m.alpha_exp)}};
}

/// [{multi_index, coeff, alpha_exp[, value]}, ...] in graded order; value is
/// the numeric coefficient on the branch when one is given.
template <RootScalar S>
Json to_json(const SeriesTable<S>& table, const AlphaBranch* branch = nullptr) {
    Json entries = Json::array();
    for (const auto& [n, m] : table.entries) {
        Json e{{"multi_index", to_json(n)}, {"coeff", to_json(m.coeff)}, {"alpha_exp", to_json(m.alpha_exp)}};
        if (branch != nullptr) {
            e["value"] = to_json(evaluate(m, *branch));
        }
        entries.push_back(std::move(e));
    }
    return entries;
}

inline Json to_json(const AlphaBranch& br) {
    return Json{{"r", br.r}, {"theta", br.theta}, {"n", br.n}, {"value", to_json(br.value)}};
}

inline Json to_json(const XCoefficient& c) {
    return Json{{"n_free", c.n_free}, {"coeff", to_json(c.coeff)}, {"a_i1_exp", to_json(c.p)}, {"a_i2_exp", to_json(c.q)}};
}

} // namespace rootseries

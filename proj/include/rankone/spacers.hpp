#pragma once

#include "params.hpp"

#include <string>

namespace rankone {

// (a<>b)(i) = a(j) for i = j mod r, 1 <= j < r;  (a<>b)(r*k) = a(r) + b(k).
// Realizing a<>b over a column of height h gives C_a + C_b (b over the height a produces).
inline SpacerMap diamond(const SpacerMap& a, const SpacerMap& b) {
    const std::size_t r = a.r(), t = b.r();
    std::vector<Int> out(r * t);
    for (std::size_t i = 1; i <= r * t; ++i) {
        const std::size_t j = i % r;
        out[i - 1] = j != 0 ? a(j) : a(r) + b(i / r);
    }
    return SpacerMap(std::move(out));
}

inline bool is_periodic(const SpacerMap& a, std::size_t i) {
    const std::size_t r = a.r();
    if (i < 1 || r < 3 || i > r - 2)
        throw Error(ErrorKind::OutOfRange, "period " + std::to_string(i) + " outside 1.." + std::to_string(r >= 2 ? r - 2 : 0));
    for (std::size_t j = 1; j + i <= r - 1; ++j)
        if (a(i + j) != a(j)) return false;
    return true;
}

struct AdaptedResult {
    ParamSpec spec;
    bool stabilized = false;  // carries settle, output is cyclic again
    std::string note;
};

// Moves every top spacer into the interior spacers of all later stages:
// sigma~_n(i) = carry_n + sigma_n(i) for i < r_n, sigma~_n(r_n) = 0, where
// carry_n = sum_{j<n} sigma_j(r_j).  The C-sequence is unchanged; heights drop by carry_{n+1}.
inline AdaptedResult adapted_transform(const ParamSpec& spec, std::size_t depth) {
    auto adapt = [](const SpacerMap& m, const Int& carry) {
        std::vector<Int> v(m.values());
        for (std::size_t i = 0; i + 1 < v.size(); ++i) v[i] += carry;
        v.back() = 0;
        return SpacerMap(std::move(v));
    };

    AdaptedResult res;
    res.spec.h0 = spec.h0;
    Int carry = 0;
    bool cycle_tops_zero = spec.cyclic();
    if (spec.cyclic())
        for (const auto& m : *spec.cycle) cycle_tops_zero = cycle_tops_zero && m.top() == 0;

    if (cycle_tops_zero) {
        for (const auto& m : spec.prefix) {
            res.spec.prefix.push_back(adapt(m, carry));
            carry += m.top();
        }
        std::vector<SpacerMap> cyc;
        for (const auto& m : *spec.cycle) cyc.push_back(adapt(m, carry));
        res.spec.cycle = std::move(cyc);
        res.stabilized = true;
        res.note = "carry settles at " + carry.get_str() + " after the prefix; output is cyclic";
        return res;
    }

    const std::size_t d = std::min(depth, spec.horizon());
    if (d == 0 && !spec.prefix.empty()) throw Error(ErrorKind::InvalidArgument, "depth must be >= 1");
    for (std::size_t k = 1; k <= d; ++k) {
        const auto& m = spec.stage(k);
        res.spec.prefix.push_back(adapt(m, carry));
        carry += m.top();
    }
    if (spec.cyclic())
        res.note = "carries grow without bound; emitted " + std::to_string(d) + " stages as a finite prefix";
    return res;
}

inline bool is_adapted(const ParamSpec& spec, std::size_t depth) {
    const std::size_t d = spec.cyclic() ? spec.q() + spec.period() : std::min(depth, spec.horizon());
    for (std::size_t k = 1; k <= d; ++k)
        if (spec.stage(k).top() != 0) return false;
    return true;
}

}  // namespace rankone

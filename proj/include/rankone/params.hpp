#pragma once

#include "core.hpp"

#include <optional>
#include <string>
#include <vector>

namespace rankone {

// One cutting-and-stacking step: r subcolumns, sigma(i) spacers above the i-th.
class SpacerMap {
public:
    SpacerMap() = default;
    explicit SpacerMap(std::vector<Int> sigma) : sigma_(std::move(sigma)) {
        if (sigma_.empty()) throw Error(ErrorKind::InvalidArgument, "spacer map needs r >= 1 entries");
        for (const auto& v : sigma_)
            if (v < 0) throw Error(ErrorKind::InvalidArgument, "negative spacer count " + v.get_str());
    }
    SpacerMap(std::initializer_list<long> sigma) : SpacerMap(std::vector<Int>(sigma.begin(), sigma.end())) {}

    static SpacerMap zeros(std::size_t r) { return SpacerMap(std::vector<Int>(r, Int(0))); }

    std::size_t r() const { return sigma_.size(); }
    // 1-based, as in sigma(1..r)
    const Int& operator()(std::size_t i) const { return sigma_.at(i - 1); }
    const Int& top() const { return sigma_.back(); }
    const std::vector<Int>& values() const { return sigma_; }

    Int total() const {
        Int t = 0;
        for (const auto& v : sigma_) t += v;
        return t;
    }
    Int max_interior() const {
        Int m = 0;
        for (std::size_t i = 0; i + 1 < sigma_.size(); ++i) m = std::max(m, sigma_[i]);
        return m;
    }
    Int max_value() const {
        Int m = 0;
        for (const auto& v : sigma_) m = std::max(m, v);
        return m;
    }

    bool operator==(const SpacerMap& o) const { return sigma_ == o.sigma_; }
    bool operator!=(const SpacerMap& o) const { return !(*this == o); }

private:
    std::vector<Int> sigma_;
};

// Stage k (1-based) of a spec carries the spacer map that builds (C_k, h_k)
// from h_{k-1}.
struct ParamSpec {
    Int h0 = 1;
    std::vector<SpacerMap> prefix;
    std::optional<std::vector<SpacerMap>> cycle;

    bool cyclic() const { return cycle.has_value() && !cycle->empty(); }
    std::size_t q() const { return prefix.size(); }
    std::size_t period() const { return cyclic() ? cycle->size() : 0; }

    // Largest stage index that exists, or SIZE_MAX for cyclic specs.
    std::size_t horizon() const { return cyclic() ? SIZE_MAX : prefix.size(); }

    const SpacerMap& stage(std::size_t k) const {
        if (k == 0) throw Error(ErrorKind::OutOfRange, "stages are numbered from 1");
        if (k <= prefix.size()) return prefix[k - 1];
        if (!cyclic())
            throw Error(ErrorKind::DepthExceeded,
                        "stage " + std::to_string(k) + " beyond cycle-less spec of length " + std::to_string(prefix.size()));
        return (*cycle)[(k - 1 - prefix.size()) % cycle->size()];
    }

    bool operator==(const ParamSpec& o) const { return h0 == o.h0 && prefix == o.prefix && cycle == o.cycle; }

    static ParamSpec cyclic_of(std::vector<SpacerMap> cyc, Int h0 = 1) {
        ParamSpec s;
        s.h0 = std::move(h0);
        s.cycle = std::move(cyc);
        return s;
    }
    static ParamSpec chacon2() { return cyclic_of({SpacerMap{0, 1}}); }
    static ParamSpec chacon3() { return cyclic_of({SpacerMap{0, 1, 0}}); }
    static ParamSpec odometer(std::size_t b = 2) { return cyclic_of({SpacerMap::zeros(b)}); }
};

// s(0)=0, s(i)=sigma(1)+...+sigma(i) for i<r.
inline std::vector<Int> integral(const SpacerMap& m) {
    std::vector<Int> s(m.r());
    s[0] = 0;
    for (std::size_t i = 1; i < m.r(); ++i) s[i] = s[i - 1] + m(i);
    return s;
}

// C = {i*h + s(i)}: the copy positions when cutting a column of height h.
inline IntSet stage_C(const SpacerMap& m, const Int& h) {
    auto s = integral(m);
    IntSet c(m.r());
    for (std::size_t i = 0; i < m.r(); ++i) c[i] = Int(static_cast<unsigned long>(i)) * h + s[i];
    return c;
}

inline Int stage_height(const SpacerMap& m, const Int& h) {
    return Int(static_cast<unsigned long>(m.r())) * h + m.total();
}

struct CFStage {
    std::size_t n = 0;
    IntSet C;
    Int h;       // h_n = #F_n
    Int h_prev;  // h_{n-1}
};

// Heights h_0..h_depth.
inline std::vector<Int> heights(const ParamSpec& spec, std::size_t depth) {
    std::vector<Int> h{spec.h0};
    h.reserve(depth + 1);
    for (std::size_t k = 1; k <= depth; ++k) h.push_back(stage_height(spec.stage(k), h.back()));
    return h;
}

inline CFStage realize_stage(const ParamSpec& spec, std::size_t n) {
    if (n == 0) throw Error(ErrorKind::OutOfRange, "realize_stage needs n >= 1");
    auto h = heights(spec, n - 1);
    const auto& m = spec.stage(n);
    return CFStage{n, stage_C(m, h.back()), stage_height(m, h.back()), h.back()};
}

inline std::vector<CFStage> realize(const ParamSpec& spec, std::size_t depth) {
    std::vector<CFStage> out;
    out.reserve(depth);
    Int h = spec.h0;
    for (std::size_t k = 1; k <= depth; ++k) {
        const auto& m = spec.stage(k);
        CFStage st{k, stage_C(m, h), stage_height(m, h), h};
        h = st.h;
        out.push_back(std::move(st));
    }
    return out;
}

// Recover (r, sigma) from a realized stage (the height recursion read backwards).
inline SpacerMap stage_of(const CFStage& st) {
    const auto r = st.C.size();
    std::vector<Int> sig(r);
    Int prev_s = 0;
    for (std::size_t i = 1; i < r; ++i) {
        Int s = st.C[i] - Int(static_cast<unsigned long>(i)) * st.h_prev;
        sig[i - 1] = s - prev_s;
        prev_s = s;
    }
    sig[r - 1] = st.h - Int(static_cast<unsigned long>(r)) * st.h_prev - prev_s;
    return SpacerMap(std::move(sig));
}

struct Violation {
    std::size_t stage;
    std::string condition;  // "I", "II" or "III"
    std::string detail;
};

// Checks (I)-(III) for explicit stages: C_n against the interval F_{n-1}=[0,h_{n-1}).
inline std::vector<Violation> validate_stages(const std::vector<CFStage>& stages) {
    std::vector<Violation> out;
    for (const auto& st : stages) {
        const bool has0 = std::binary_search(st.C.begin(), st.C.end(), Int(0));
        if (!has0 || st.C.size() < 2)
            out.push_back({st.n, "I", !has0 ? "0 not in C" : "#C = " + std::to_string(st.C.size()) + " < 2"});
        if (!st.C.empty() && st.C.back() + st.h_prev - 1 >= st.h)
            out.push_back({st.n, "II", "max(F+C) = " + Int(st.C.back() + st.h_prev - 1).get_str() + " >= h = " + st.h.get_str()});
        if (!st.C.empty() && st.C.front() < 0)
            out.push_back({st.n, "II", "negative element in C"});
        for (std::size_t i = 1; i < st.C.size(); ++i)
            if (st.C[i] - st.C[i - 1] < st.h_prev) {
                out.push_back({st.n, "III", "translates at " + st.C[i - 1].get_str() + " and " + st.C[i].get_str() + " overlap"});
                break;
            }
    }
    return out;
}

inline std::vector<Violation> validate(const ParamSpec& spec, std::size_t depth) {
    if (depth < 1) throw Error(ErrorKind::InvalidArgument, "depth must be >= 1");
    if (spec.h0 < 1) return {{0, "I", "h0 < 1"}};
    return validate_stages(realize(spec, std::min(depth, spec.horizon())));
}

struct MeasureReport {
    std::vector<Rat> phi;  // phi_0 .. phi_depth, phi_m = h_m / prod_{i<=m} |C_i|
    Rat total;             // exact limit when cyclic, else phi at the last stage (lower bound)
    bool exact = false;
    bool finite = true;
};

inline Int prod_r(const ParamSpec& spec, std::size_t m) {
    Int p = 1;
    for (std::size_t k = 1; k <= m; ++k) p *= static_cast<unsigned long>(spec.stage(k).r());
    return p;
}

// Exact total h_q/P_q + sum over periods, a geometric series in 1/prod(cycle r).
inline std::optional<Rat> total_measure_exact(const ParamSpec& spec) {
    if (!spec.cyclic()) return std::nullopt;
    const auto q = spec.q(), L = spec.period();
    auto h = heights(spec, q + L);
    Int Pq = prod_r(spec, q);
    Rat phi_q(h[q], Pq);
    phi_q.canonicalize();
    Rat X = 0;
    Int P = Pq;
    for (std::size_t j = 1; j <= L; ++j) {
        P *= static_cast<unsigned long>(spec.stage(q + j).r());
        Rat term(spec.stage(q + j).total(), P);
        term.canonicalize();
        X += term;
    }
    Int Pc = P / Pq;
    if (Pc == 1) {
        if (X == 0) return phi_q;
        return std::nullopt;  // diverges
    }
    Rat factor(Pc, Pc - 1);
    factor.canonicalize();
    return phi_q + X * factor;
}

inline Rat total_measure(const ParamSpec& spec) {
    if (!spec.cyclic()) throw Error(ErrorKind::DepthExceeded, "limit measure requested for a cycle-less spec");
    auto t = total_measure_exact(spec);
    if (!t) throw Error(ErrorKind::OutOfRange, "infinite measure: cycle has r=1 everywhere and spacers");
    return *t;
}

inline MeasureReport measure(const ParamSpec& spec, std::size_t depth) {
    if (depth < 1) throw Error(ErrorKind::InvalidArgument, "depth must be >= 1");
    MeasureReport rep;
    const std::size_t d = std::min(depth, spec.horizon());
    Int h = spec.h0, P = 1;
    rep.phi.emplace_back(h);
    for (std::size_t k = 1; k <= d; ++k) {
        const auto& m = spec.stage(k);
        h = stage_height(m, h);
        P *= static_cast<unsigned long>(m.r());
        Rat f(h, P);
        f.canonicalize();
        rep.phi.push_back(f);
    }
    if (spec.cyclic()) {
        auto t = total_measure_exact(spec);
        rep.finite = t.has_value();
        rep.exact = rep.finite;
        rep.total = rep.finite ? *t : rep.phi.back();
    } else {
        rep.total = rep.phi.back();
    }
    return rep;
}

// |A| / prod_{i<=level} |C_i| in the mu([0]_0)=1 normalization.
inline Rat cylinder_measure(const ParamSpec& spec, std::size_t level, const IntSet& A) {
    auto h = heights(spec, level);
    for (const auto& a : A)
        if (a < 0 || a >= h.back())
            throw Error(ErrorKind::OutOfRange, "level " + a.get_str() + " outside F_" + std::to_string(level));
    Rat r(Int(static_cast<unsigned long>(A.size())), prod_r(spec, level));
    r.canonicalize();
    return r;
}

namespace detail {
// #{x in F_n + C_{n+1} + ... + C_j : x < T}, using that the translates of the
// partial sumset by elements of C_j are disjoint, ordered blocks.
inline Int count_below(const std::vector<CFStage>& st, std::size_t n, std::size_t j, const Int& T,
                       const std::vector<Int>& h, const std::vector<Int>& card) {
    if (T <= 0) return 0;
    if (j == n) return T < h[n] ? T : h[n];
    const auto& C = st[j - 1].C;
    Int total = 0;
    for (const auto& c : C) {
        Int rest = T - c;
        if (rest <= 0) break;
        if (rest >= h[j - 1])
            total += card[j - 1];
        else
            total += count_below(st, n, j - 1, rest, h, card);
    }
    return total;
}
}  // namespace detail

struct StandardnessReport {
    bool holds = false;       // g + F_n + C_{n+1} + ... + C_m inside F_m for some m in (n, depth]
    std::size_t first_m = 0;  // smallest such m
    Rat ratio;                // #((g + S) ∩ F_depth) / #S at m = depth
};

inline StandardnessReport standardness_check(const ParamSpec& spec, const Int& g, std::size_t n, std::size_t depth) {
    if (depth <= n) throw Error(ErrorKind::InvalidArgument, "standardness_check needs depth > n");
    auto st = realize(spec, depth);
    auto h = heights(spec, depth);
    std::vector<Int> card(depth + 1);  // |F_n + C_{n+1} + ... + C_j|
    card[n] = h[n];
    for (std::size_t j = n + 1; j <= depth; ++j) card[j] = card[j - 1] * static_cast<unsigned long>(st[j - 1].C.size());

    StandardnessReport rep;
    Int maxS = h[n] - 1;
    for (std::size_t m = n + 1; m <= depth; ++m) {
        maxS += st[m - 1].C.back();
        if (!rep.holds && g >= 0 && g + maxS < h[m]) {
            rep.holds = true;
            rep.first_m = m;
        }
    }
    // #((g + S) ∩ [0, h_m)) = #{x in S : -g <= x < h_m - g}
    Int inside = detail::count_below(st, n, depth, h[depth] - g, h, card) - detail::count_below(st, n, depth, -g, h, card);
    rep.ratio = Rat(inside, card[depth]);
    rep.ratio.canonicalize();
    return rep;
}

}  // namespace rankone

#pragma once

#include "decide.hpp"

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

namespace rankone {

using Levels = std::vector<std::int64_t>;  // sorted

// Depth-m tower: heights, cut products and total mass, all exact.
struct Tower {
    const ParamSpec* spec = nullptr;
    std::size_t m = 0;
    std::vector<Int> h;   // h_0..h_m
    std::vector<Int> Pi;  // prod_{i<=n} |C_i| for n = 0..m
    Rat total;

    Tower(const ParamSpec& s, std::size_t depth) : spec(&s), m(depth) {
        if (depth > s.horizon()) throw Error(ErrorKind::DepthExceeded, "tower deeper than spec");
        h = heights(s, depth);
        Pi.push_back(1);
        for (std::size_t k = 1; k <= depth; ++k) Pi.push_back(Pi.back() * static_cast<unsigned long>(s.stage(k).r()));
        // finite specs: the depth-m tower is everything there is
        total = s.cyclic() ? total_measure(s) : measure(s, s.horizon()).total;
    }
    Rat phi() const { return Rat(h[m], Pi[m]); }
};

// A + C_{k+1} + ... + C_m.
inline Levels cylinder_levels(const ParamSpec& spec, std::size_t k, const IntSet& A, std::size_t m,
                              std::uint64_t budget = kDefaultBudget) {
    if (m < k) throw Error(ErrorKind::InvalidArgument, "depth below cylinder level");
    auto h = heights(spec, m);
    for (const auto& a : A)
        if (a < 0 || a >= h[k]) throw Error(ErrorKind::OutOfRange, "level " + a.get_str() + " outside F_" + std::to_string(k));
    to_i64(h[m]);
    double count = static_cast<double>(A.size());
    for (std::size_t i = k + 1; i <= m; ++i) count *= static_cast<double>(spec.stage(i).r());
    if (count > static_cast<double>(budget))
        throw Error(ErrorKind::CardinalityBudgetExceeded, "level set of size " + std::to_string(count));
    Levels L;
    for (const auto& a : A) L.push_back(to_i64(a));
    for (std::size_t i = k + 1; i <= m; ++i) {
        const IntSet C = stage_C(spec.stage(i), h[i - 1]);
        Levels next;
        next.reserve(L.size() * C.size());
        // translates by increasing c are disjoint and ordered, so this stays sorted
        for (const auto& c : C) {
            const std::int64_t cv = to_i64(c);
            for (auto x : L) next.push_back(x + cv);
        }
        L = std::move(next);
    }
    if (std::adjacent_find(L.begin(), L.end(), std::greater_equal<>()) != L.end())
        throw Error(ErrorKind::InvalidArgument, "copies overlap; spec is not a valid construction");
    return L;
}

struct CorrelationPoint {
    Int t;
    Int count;  // #((t + levels(A)) ∩ levels(B)) at depth m
    Int denom;  // prod_{i<=m} |C_i|
    Rat value;
    Rat error_bound;
};

inline std::int64_t shifted_overlap(const Levels& a, const Levels& b, std::int64_t t) {
    std::int64_t n = 0;
    std::size_t i = 0, j = 0;
    while (i < a.size() && j < b.size()) {
        const std::int64_t x = a[i] + t;
        if (x < b[j])
            ++i;
        else if (x > b[j])
            ++j;
        else {
            ++n;
            ++i;
            ++j;
        }
    }
    return n;
}

// Bound in the mu([0]_0)=1 normalization: the boundary levels of the depth-m
// tower plus the mass not yet in it, both scaled by total.
inline Rat correlation_bound(const Tower& tw, const Int& t) {
    Int at = abs(t);
    Rat b = tw.total * Rat(at, tw.h[tw.m]) + (tw.total - tw.phi());
    b.canonicalize();
    return b;
}

inline CorrelationPoint correlation_on(const Tower& tw, const Levels& LA, const Levels& LB, const Int& t) {
    if (4 * abs(t) >= tw.h[tw.m]) throw Error(ErrorKind::OutOfRange, "need |t| < h_m/4, got t=" + t.get_str());
    CorrelationPoint p;
    p.t = t;
    p.count = from_i64(shifted_overlap(LA, LB, to_i64(t)));
    p.denom = tw.Pi[tw.m];
    p.value = Rat(p.count, p.denom);
    p.value.canonicalize();
    p.error_bound = correlation_bound(tw, t);
    return p;
}

inline CorrelationPoint correlation(const ParamSpec& spec, const Int& t, std::size_t k, const IntSet& A, const IntSet& B,
                                    std::size_t m, std::uint64_t budget = kDefaultBudget) {
    Tower tw(spec, m);
    return correlation_on(tw, cylinder_levels(spec, k, A, m, budget), cylinder_levels(spec, k, B, m, budget), t);
}

struct RigidityPoint {
    CorrelationPoint point;
    bool flagged = false;
};

// mu(T_t[A] ∩ [A]) for each t; flagged when within `tolerance` of mu([A]_k).
// Default tolerance is mu([A]_k)/10.
inline std::vector<RigidityPoint> rigidity_scan(const ParamSpec& spec, std::size_t k, const IntSet& A,
                                                const std::vector<Int>& ts, std::size_t m,
                                                std::optional<Rat> tolerance = std::nullopt,
                                                std::uint64_t budget = kDefaultBudget) {
    Tower tw(spec, m);
    const auto L = cylinder_levels(spec, k, A, m, budget);
    Rat muA(Int(static_cast<unsigned long>(A.size())), tw.Pi[k]);
    muA.canonicalize();
    const Rat tol = tolerance ? *tolerance : muA / 10;
    std::vector<RigidityPoint> out;
    for (const auto& t : ts) {
        RigidityPoint rp{correlation_on(tw, L, L, t), false};
        rp.flagged = rp.point.value >= muA - tol;
        out.push_back(std::move(rp));
    }
    return out;
}

// theta(i) = #{j : sigma(j) = i} / r over all r slots.
inline std::map<Int, Rat> spacer_distribution(const SpacerMap& m) {
    std::map<Int, Int> cnt;
    for (const auto& v : m.values()) cnt[v] += 1;
    std::map<Int, Rat> th;
    for (const auto& [v, c] : cnt) {
        Rat w(c, Int(static_cast<unsigned long>(m.r())));
        w.canonicalize();
        th[v] = w;
    }
    return th;
}

struct WeakLimitReport {
    std::size_t r = 0;
    std::map<Int, Rat> theta;
    std::vector<CorrelationPoint> points;  // t = -h_n first, then each spacer value
    Rat residual;                          // |corr(-h_n) - sum theta(i) corr(i)| / total
    Rat bound;                             // 2/r + the matching correlation bounds / total
    bool holds = false;
};

// Cutting the height-h_n tower by stage n+1: on copy j, T_{-h_n} acts as T_{sigma(j)},
// except on the last copy.  So mu(T_{-h_n}A ∩ B) is the theta-average of
// mu(T_i A ∩ B) up to 2/r (probability normalization).
inline WeakLimitReport weak_limit_check(const ParamSpec& spec, std::size_t n, std::size_t k, const IntSet& A,
                                        const IntSet& B, std::size_t m, std::uint64_t budget = kDefaultBudget) {
    if (k > n || m <= n) throw Error(ErrorKind::InvalidArgument, "need k <= n < m");
    for (std::size_t j = 1; j <= m; ++j)
        if (spec.stage(j).top() != 0)
            throw Error(ErrorKind::NotAdapted, "stage " + std::to_string(j) + " has spacers over its last column");
    Tower tw(spec, m);
    const auto LA = cylinder_levels(spec, k, A, m, budget), LB = cylinder_levels(spec, k, B, m, budget);
    const auto& st = spec.stage(n + 1);

    WeakLimitReport rep;
    rep.r = st.r();
    rep.theta = spacer_distribution(st);
    auto lhs = correlation_on(tw, LA, LB, -tw.h[n]);
    Rat err = lhs.error_bound, avg = 0;
    rep.points.push_back(lhs);
    for (const auto& [i, w] : rep.theta) {
        auto p = correlation_on(tw, LA, LB, i);
        avg += w * p.value;
        err += w * p.error_bound;
        rep.points.push_back(std::move(p));
    }
    Rat diff = lhs.value - avg;
    rep.residual = abs(diff) / tw.total;
    rep.bound = Rat(2, Int(static_cast<unsigned long>(rep.r))) + err / tw.total;
    rep.residual.canonicalize();
    rep.bound.canonicalize();
    rep.holds = rep.residual <= rep.bound;
    return rep;
}

// ---- symbolic codes --------------------------------------------------------

// A point given by coordinates (f, c_{n+1}, ..., c_m): its level in the depth-m tower.
inline Int point_level(const ParamSpec& spec, std::size_t n, const Int& f, const std::vector<Int>& c) {
    auto h = heights(spec, n + c.size());
    if (f < 0 || f >= h[n]) throw Error(ErrorKind::OutOfRange, "f outside F_" + std::to_string(n));
    Int lvl = f;
    for (std::size_t j = 0; j < c.size(); ++j) {
        const IntSet C = stage_C(spec.stage(n + 1 + j), h[n + j]);
        if (!std::binary_search(C.begin(), C.end(), c[j]))
            throw Error(ErrorKind::OutOfRange, "coordinate " + c[j].get_str() + " not in C_" + std::to_string(n + 1 + j));
        lvl += c[j];
    }
    return lvl;
}

// w(i) = '0' when level+i is a level of [0]_k at depth m, '1' when it is another
// tower level, '_' when it leaves the depth-m tower.
inline std::string symbolic_code(const ParamSpec& spec, std::size_t k, const Int& level, std::size_t m, long t_lo,
                                 long t_hi, std::uint64_t budget = kDefaultBudget) {
    if (t_hi < t_lo) throw Error(ErrorKind::InvalidArgument, "empty window");
    auto h = heights(spec, m);
    if (level < 0 || level >= h[m]) throw Error(ErrorKind::OutOfRange, "level outside F_m");
    if (4 * Int(std::max(std::labs(t_lo), std::labs(t_hi))) >= h[m])
        throw Error(ErrorKind::OutOfRange, "window must lie inside (-h_m/4, h_m/4)");
    const auto zero = cylinder_levels(spec, k, IntSet{Int(0)}, m, budget);
    const std::int64_t base = to_i64(level), hm = to_i64(h[m]);
    std::string w;
    for (long i = t_lo; i <= t_hi; ++i) {
        const std::int64_t p = base + i;
        if (p < 0 || p >= hm)
            w += '_';
        else
            w += std::binary_search(zero.begin(), zero.end(), p) ? '0' : '1';
    }
    return w;
}

// ---- expansive re-presentation ---------------------------------------------

struct ExpansiveStage {
    std::size_t n = 0;
    std::size_t i = 0;  // copies dropped (0: stage already expansive, left alone)
    std::size_t r_star = 0;
    SpacerMap sigma_star;
};

struct ExpansiveResult {
    std::vector<ExpansiveStage> stages;
    ParamSpec spec;
    Rat drop_sum;  // sum i_n / r_n over the stages
};

// The unique i in 1..r-1 with
//   (i-1)h + sum_{j=r-i}^{r} sigma(j) <= M < i h + sum_{j=r-i+1}^{r} sigma(j),
// M the largest interior spacer, h the height being cut.
inline std::optional<std::size_t> drop_count(const SpacerMap& m, const Int& h) {
    const std::size_t r = m.r();
    const Int M = m.max_interior();
    for (std::size_t i = 1; i < r; ++i) {
        Int tail_incl = 0, tail_excl = 0;
        for (std::size_t j = r - i; j <= r; ++j) tail_incl += m(j);
        tail_excl = tail_incl - m(r - i);
        const Int ih = Int(static_cast<unsigned long>(i)) * h;
        if (ih - h + tail_incl <= M && M < ih + tail_excl) return i;
    }
    return std::nullopt;
}

// Drops the top i_n copies of every stage into spacers.  The new top spacer
// absorbs the old one, the dropped columns and everything above them, so
// heights are unchanged and the transported measure is the same.
inline ExpansiveResult expansive_transform(const ParamSpec& spec, bool allow_unit_stages = false) {
    if (spec.cyclic())
        throw Error(ErrorKind::NotTelescoped,
                    "cuts repeat with the cycle; unroll with growing strides first (transform telescope --growing)");
    if (spec.prefix.empty()) throw Error(ErrorKind::InvalidArgument, "empty spec");
    for (std::size_t k = 2; k <= spec.q(); ++k)
        if (spec.stage(k).r() <= spec.stage(k - 1).r())
            throw Error(ErrorKind::NotTelescoped, "cuts must increase strictly; stage " + std::to_string(k) + " does not");

    ExpansiveResult res;
    res.spec.h0 = spec.h0;
    res.drop_sum = 0;
    auto h = heights(spec, spec.q());
    for (std::size_t n = 1; n <= spec.q(); ++n) {
        const auto& m = spec.stage(n);
        ExpansiveStage es;
        es.n = n;
        if (m.top() > m.max_interior()) {
            es.i = 0;
            es.r_star = m.r();
            es.sigma_star = m;
        } else {
            auto i = drop_count(m, h[n - 1]);
            if (!i) throw Error(ErrorKind::DegenerateDrop, "no admissible drop count at stage " + std::to_string(n));
            es.i = *i;
            es.r_star = m.r() - *i;
            if (es.r_star < 2 && !allow_unit_stages)
                throw Error(ErrorKind::DegenerateDrop, "stage " + std::to_string(n) + " keeps fewer than 2 copies");
            std::vector<Int> v(m.values().begin(), m.values().begin() + static_cast<long>(es.r_star));
            Int extra = Int(static_cast<unsigned long>(es.i)) * h[n - 1];
            for (std::size_t j = es.r_star + 1; j <= m.r(); ++j) extra += m(j);
            v.back() += extra;
            es.sigma_star = SpacerMap(std::move(v));
        }
        Rat frac(Int(static_cast<unsigned long>(es.i)), Int(static_cast<unsigned long>(m.r())));
        frac.canonicalize();
        res.drop_sum += frac;
        res.spec.prefix.push_back(es.sigma_star);
        res.stages.push_back(std::move(es));
    }

    if (heights(res.spec, res.spec.q()) != h) throw std::logic_error("expansive transform changed a height");
    for (const auto& es : res.stages)
        if (es.i > 0 && es.r_star >= 2 && !(es.sigma_star.top() > es.sigma_star.max_interior()))
            throw std::logic_error("top spacer not dominant after the drop");
    const bool unit = std::any_of(res.stages.begin(), res.stages.end(), [](const auto& e) { return e.r_star < 2; });
    if (!unit && !validate(res.spec, res.spec.q()).empty()) throw std::logic_error("transformed spec fails validation");
    return res;
}

}  // namespace rankone

#pragma once

#include "params.hpp"
#include "spacers.hpp"
#include "verdict.hpp"

#include <numeric>
#include <optional>
#include <string>
#include <vector>

namespace rankone {

// ---- telescoping -----------------------------------------------------------

// Diamond of stages from..to (inclusive); realizes C_from + ... + C_to.
inline SpacerMap block(const ParamSpec& spec, std::size_t from, std::size_t to) {
    SpacerMap acc = spec.stage(from);
    for (std::size_t k = from + 1; k <= to; ++k) acc = diamond(acc, spec.stage(k));
    return acc;
}

// ks = k_1 < k_2 < ... (k_0 = 0 implied); output stage j merges k_{j-1}+1 .. k_j.
inline ParamSpec telescope(const ParamSpec& spec, const std::vector<std::size_t>& ks) {
    ParamSpec out;
    out.h0 = spec.h0;
    std::size_t prev = 0;
    for (auto k : ks) {
        if (k <= prev) throw Error(ErrorKind::InvalidArgument, "telescoping indices must increase strictly from 0");
        if (k > spec.horizon()) throw Error(ErrorKind::DepthExceeded, "telescoping index beyond spec");
        out.prefix.push_back(block(spec, prev + 1, k));
        prev = k;
    }
    return out;
}

// Fixed stride d.  For cyclic specs the output is cyclic again: blocks that start
// past the prefix repeat with period L / gcd(L, d).
inline ParamSpec telescope_stride(const ParamSpec& spec, std::size_t d) {
    if (d == 0) throw Error(ErrorKind::InvalidArgument, "stride must be >= 1");
    ParamSpec out;
    out.h0 = spec.h0;
    if (!spec.cyclic()) {
        for (std::size_t j = 1; j * d <= spec.prefix.size(); ++j) out.prefix.push_back(block(spec, (j - 1) * d + 1, j * d));
        return out;
    }
    const std::size_t q = spec.q(), L = spec.period();
    const std::size_t qp = (q + d - 1) / d;
    const std::size_t Lp = L / std::gcd(L, d);
    for (std::size_t j = 1; j <= qp; ++j) out.prefix.push_back(block(spec, (j - 1) * d + 1, j * d));
    std::vector<SpacerMap> cyc;
    for (std::size_t j = qp + 1; j <= qp + Lp; ++j) cyc.push_back(block(spec, (j - 1) * d + 1, j * d));
    out.cycle = std::move(cyc);
    return out;
}

// Stage n merges n consecutive input stages (k_n = n(n+1)/2): r grows geometrically.
inline ParamSpec unroll_growing(const ParamSpec& spec, std::size_t depth) {
    std::vector<std::size_t> ks;
    std::size_t k = 0;
    for (std::size_t n = 1; n <= depth; ++n) {
        k += n;
        if (k > spec.horizon()) break;
        ks.push_back(k);
    }
    return telescope(spec, ks);
}

// ---- boundedness -----------------------------------------------------------

struct Bounds {
    Int R = 0, K = 0;
};

inline Bounds stage_bounds(const ParamSpec& spec, std::size_t from, std::size_t to) {
    Bounds b;
    for (std::size_t k = from; k <= to; ++k) {
        const auto& m = spec.stage(k);
        b.R = std::max(b.R, Int(static_cast<unsigned long>(m.r())));
        b.K = std::max(b.K, m.max_value());
    }
    return b;
}

inline Bounds spec_bounds(const ParamSpec& spec) {
    const std::size_t last = spec.cyclic() ? spec.q() + spec.period() : spec.q();
    return last == 0 ? Bounds{} : stage_bounds(spec, 1, last);
}

inline Verdict is_bounded(const ParamSpec& spec) {
    auto b = spec_bounds(spec);
    json cert{{"R", to_json(b.R)}, {"K", to_json(b.K)}};
    if (spec.cyclic()) return Verdict::yes(cert);
    const std::size_t q = spec.q();
    cert["horizon"] = q;
    if (q < 2) {
        cert["note"] = "prefix too short to see a trend; bounded at horizon";
        return Verdict::yes(cert);
    }
    auto first = stage_bounds(spec, 1, q / 2), second = stage_bounds(spec, q / 2 + 1, q);
    if (second.R > first.R || second.K > first.K) {
        cert["note"] = "cuts or spacers still growing at the horizon";
        return Verdict::no(cert);
    }
    cert["note"] = "maxima attained in the first half of the prefix";
    return Verdict::yes(cert);
}

// ---- rigidity --------------------------------------------------------------

inline void require_cuts(const ParamSpec& spec) {
    const std::size_t last = spec.cyclic() ? spec.q() + spec.period() : spec.q();
    for (std::size_t k = 1; k <= last; ++k)
        if (spec.stage(k).r() < 2)
            throw Error(ErrorKind::InvalidArgument, "stage " + std::to_string(k) + " has r < 2");
}

// Common value of sigma(1..r-1), if constant.
inline std::optional<Int> interior_constant(const SpacerMap& m) {
    if (m.r() < 2) return std::nullopt;
    for (std::size_t i = 2; i < m.r(); ++i)
        if (m(i) != m(1)) return std::nullopt;
    return m(1);
}

// C_n + ... + C_m is an AP iff every stage has a constant interior c_j and
// c_{j+1} = c_j - sigma_j(r_j) along the window.  (Stage gaps exceed the span of
// the lower sumset, so each digit set must itself be an AP whose step is the
// full count of the lower window times its step: h_j + c_{j+1} = r_j (h_{j-1} + c_j).)
inline bool arithmetic_window(const ParamSpec& spec, std::size_t n, std::size_t m) {
    if (n < 1 || m < n) throw Error(ErrorKind::InvalidArgument, "window needs 1 <= n <= m");
    std::optional<Int> prev_c;
    Int prev_top;
    for (std::size_t k = n; k <= m; ++k) {
        const auto& st = spec.stage(k);
        if (st.r() < 2) throw Error(ErrorKind::InvalidArgument, "stage with r < 2 in window");
        auto c = interior_constant(st);
        if (!c) return false;
        if (prev_c && *c != *prev_c - prev_top) return false;
        prev_c = c;
        prev_top = st.top();
    }
    return true;
}

// Same predicate by materializing the sumset.
inline bool arithmetic_window_sumset(const ParamSpec& spec, std::size_t n, std::size_t m,
                                     std::uint64_t budget = kDefaultBudget) {
    if (n < 1 || m < n) throw Error(ErrorKind::InvalidArgument, "window needs 1 <= n <= m");
    auto st = realize(spec, m);
    IntSet S{Int(0)};
    for (std::size_t k = n; k <= m; ++k) S = sumset(S, st[k - 1].C, budget);
    for (std::size_t i = 2; i < S.size(); ++i)
        if (S[i] - S[i - 1] != S[1] - S[0]) return false;
    return true;
}

// Longest arithmetic window (capped).  Later starts repeat those in the first period.
inline std::size_t longest_window(const ParamSpec& spec, std::size_t cap) {
    std::size_t best = 0;
    for (std::size_t s = 1; s <= spec.q() + spec.period(); ++s) {
        std::size_t len = 0;
        while (len < cap && arithmetic_window(spec, s, s + len)) ++len;
        best = std::max(best, len);
    }
    return best;
}

inline Verdict is_rigid(const ParamSpec& spec) {
    if (!spec.cyclic()) return aperiodic_unknown("rigidity needs arbitrarily long windows; no finite horizon certifies them");
    require_cuts(spec);
    const std::size_t q = spec.q(), L = spec.period();
    std::optional<Int> common;
    for (std::size_t j = 1; j <= L; ++j) {
        const auto& st = spec.stage(q + j);
        auto c = interior_constant(st);
        std::string why;
        if (!c)
            why = "interior spacers not constant";
        else if (common && *c != *common)
            why = "interior constants differ across the cycle";
        else if (st.top() != 0)
            why = "nonzero top spacer";
        if (!why.empty()) {
            const std::size_t bound = longest_window(spec, 3 * (q + L) + 3);
            return Verdict::no({{"violating_stage", q + j}, {"reason", why}, {"window_bound", bound}});
        }
        common = c;
    }
    return Verdict::yes({{"c", to_json(*common)}, {"from_stage", q + 1}});
}

// ---- total ergodicity ------------------------------------------------------

// Divisibility data: d | every element of C_{j+1} iff d | u_j = h_j + s_{j+1}(1)
// and d | s_{j+1}(i) - i*s_{j+1}(1) for 2 <= i < r.  Also u_{j+1} = r u_j + K_{j+1}
// with K_j = sum(sigma_j) - r_j s_j(1) + s_{j+1}(1).  G is the gcd of all these
// constraint integers over one cycle.
struct DivisibilityData {
    Int G = 0;
    std::vector<Int> u;  // u_j for j = q .. q+L
    std::size_t q = 0;
};

inline DivisibilityData divisibility_data(const ParamSpec& spec) {
    const std::size_t q = spec.q(), L = spec.period();
    DivisibilityData d;
    d.q = q;
    for (std::size_t j = 1; j <= L; ++j) {
        const auto& st = spec.stage(q + j);
        const auto s = integral(st);
        for (std::size_t i = 2; i < st.r(); ++i) d.G = gcd(d.G, s[i] - Int(static_cast<unsigned long>(i)) * s[1]);
        const auto& nxt = spec.stage(q + j + 1);
        Int link = st.total() - Int(static_cast<unsigned long>(st.r())) * s[1] + nxt(1);
        d.G = gcd(d.G, link);
    }
    auto h = heights(spec, q + L);
    for (std::size_t j = q; j <= q + L; ++j) d.u.push_back(h[j] + spec.stage(j + 1)(1));
    return d;
}

// Stage index j with p | u_j, when p also divides every constraint integer.
inline std::optional<std::size_t> prime_blocks(const DivisibilityData& d, const Int& p) {
    if (d.G % p != 0) return std::nullopt;
    for (std::size_t i = 0; i < d.u.size(); ++i)
        if (d.u[i] % p == 0) return d.q + i;
    return std::nullopt;
}

inline Verdict is_totally_ergodic(const ParamSpec& spec) {
    if (!spec.cyclic()) return aperiodic_unknown("divisibility pattern needs the cycle");
    require_cuts(spec);
    auto d = divisibility_data(spec);
    if (d.G == 0) {
        const Int& u = d.u[1];  // u_{q+1} >= h_{q+1} >= 2
        auto ps = prime_factors(u);
        return Verdict::no({{"divisor", to_json(ps.front())}, {"G", 0}, {"u_stage", d.q + 1}, {"u", to_json(u)},
                            {"reason", "all constraint integers vanish"}});
    }
    json checked = json::array();
    for (const auto& p : prime_factors(d.G)) {
        checked.push_back(to_json(p));
        if (auto j = prime_blocks(d, p))
            return Verdict::no({{"divisor", to_json(p)}, {"G", to_json(d.G)}, {"u_stage", *j}});
    }
    return Verdict::yes({{"G", to_json(d.G)}, {"primes_checked", checked}});
}

inline Verdict power_ergodic(const ParamSpec& spec, const Int& dd) {
    if (dd < 1) throw Error(ErrorKind::InvalidArgument, "power must be >= 1");
    if (dd == 1) return Verdict::yes({{"reason", "T itself is ergodic"}});
    if (!spec.cyclic()) return aperiodic_unknown("divisibility pattern needs the cycle");
    require_cuts(spec);
    auto d = divisibility_data(spec);
    json checked = json::array();
    for (const auto& p : prime_factors(dd)) {
        checked.push_back(to_json(p));
        if (auto j = prime_blocks(d, p)) return Verdict::no({{"prime", to_json(p)}, {"u_stage", *j}});
    }
    return Verdict::yes({{"primes_checked", checked}, {"G", to_json(d.G)}});
}

// ---- inverse ---------------------------------------------------------------

struct InverseStage {
    std::size_t n;
    IntSet C, Cstar;
    Int Fstar_lo, Fstar_hi;  // F*_n = [sum max C_j - (h_n - 1), sum max C_j]
};

inline std::vector<InverseStage> inverse_params(const ParamSpec& spec, std::size_t depth) {
    if (depth < 1) throw Error(ErrorKind::InvalidArgument, "depth must be >= 1");
    if (depth > spec.horizon()) throw Error(ErrorKind::DepthExceeded, "depth beyond cycle-less spec");
    std::vector<InverseStage> out;
    Int summax = 0;
    for (const auto& st : realize(spec, depth)) {
        const Int& mx = st.C.back();
        IntSet cs;
        for (auto it = st.C.rbegin(); it != st.C.rend(); ++it) cs.push_back(mx - *it);
        summax += mx;
        out.push_back({st.n, st.C, cs, summax - (st.h - 1), summax});
    }
    return out;
}

// C* = C iff sigma(i) = sigma(r-i) for 1 <= i <= r-1.
inline bool reflection_symmetric(const SpacerMap& m) {
    for (std::size_t i = 1; i < m.r(); ++i)
        if (m(i) != m(m.r() - i)) return false;
    return true;
}

inline Verdict inverse_isomorphic(const ParamSpec& spec) {
    if (!spec.cyclic()) return aperiodic_unknown("eventual symmetry needs the cycle");
    if (is_rigid(spec).is_yes()) throw Error(ErrorKind::PreconditionRigid, "criterion applies to non-rigid maps only");
    const std::size_t q = spec.q(), L = spec.period();
    bool all_two = true;
    for (std::size_t j = 1; j <= L; ++j) {
        const auto& st = spec.stage(q + j);
        all_two = all_two && st.r() == 2;
        if (!reflection_symmetric(st)) {
            Verdict v = Verdict::no({{"asymmetric_stage", q + j}});
            if (is_totally_ergodic(spec).is_yes()) v.rider = "disjoint";
            return v;
        }
    }
    json cert{{"symmetric_from", q + 1}};
    if (all_two)
        cert["note"] = "every cycle stage has two cuts, so C*=C trivially; the criterion reports isomorphic";
    return Verdict::yes(cert);
}

// ---- commensurate isomorphism ---------------------------------------------

struct Alignment {
    long delta = 0;     // stage n of A pairs with stage n+delta of B
    std::size_t N0 = 0; // h^A_{N0} = h^B_{N0+delta}, both beyond their prefixes
    std::size_t P = 0;  // lcm of cycle lengths
};

// Heights agree forever from N0 iff they agree at N0 and (r, sum sigma) agree
// over one joint period afterwards; heights increase, so the shift is unique.
inline std::optional<Alignment> align_heights(const ParamSpec& A, const ParamSpec& B, long max_shift) {
    const std::size_t P = std::lcm(A.period(), B.period());
    const long qa = static_cast<long>(A.q()), qb = static_cast<long>(B.q());
    const std::size_t depth = static_cast<std::size_t>(std::max(qa, qb) + 2 * max_shift) + P + 2;
    auto ha = heights(A, depth), hb = heights(B, depth);
    for (long delta = -max_shift; delta <= max_shift; ++delta) {
        const long N0 = std::max({qa, qb - delta, -delta, 0L});
        if (static_cast<std::size_t>(N0 + std::max(delta, 0L)) + P >= depth) continue;
        if (ha[N0] != hb[N0 + delta]) continue;
        bool ok = true;
        for (std::size_t t = 1; t <= P && ok; ++t) {
            const auto& sa = A.stage(N0 + t);
            const auto& sb = B.stage(N0 + delta + t);
            ok = sa.r() == sb.r() && sa.total() == sb.total();
        }
        if (ok) return Alignment{delta, static_cast<std::size_t>(N0), P};
    }
    return std::nullopt;
}

inline bool same_interior(const SpacerMap& a, const SpacerMap& b) {
    if (a.r() != b.r()) return false;
    for (std::size_t i = 1; i < a.r(); ++i)
        if (a(i) != b(i)) return false;
    return true;
}

// Smallest M with C^A_n = C^B_{n+delta} for all n > M (given agreement past N0).
inline std::size_t agreement_start(const ParamSpec& A, const ParamSpec& B, const Alignment& al) {
    const std::size_t lo = static_cast<std::size_t>(std::max(1L, 1 - al.delta));
    std::size_t M = al.N0;
    while (M >= lo && realize_stage(A, M).C == realize_stage(B, M + al.delta).C) --M;
    return M;
}

inline Verdict commensurate_isomorphic(const ParamSpec& A, const ParamSpec& B) {
    if (!A.cyclic() || !B.cyclic()) return aperiodic_unknown("alignment needs both cycles");
    require_cuts(A);
    require_cuts(B);
    const bool rigA = is_rigid(A).is_yes(), rigB = is_rigid(B).is_yes();
    if (rigA && rigB) throw Error(ErrorKind::PreconditionRigid, "both maps are rigid");
    const long S = static_cast<long>(A.q() + B.q() + std::lcm(A.period(), B.period())) + 16;
    auto al = align_heights(A, B, S);
    if (!al) throw Error(ErrorKind::NotCommensurate, "no stage shift makes the heights agree eventually");
    for (std::size_t t = 1; t <= al->P; ++t) {
        const std::size_t n = al->N0 + t;
        if (!same_interior(A.stage(n), B.stage(n + al->delta))) {
            Verdict v = Verdict::no({{"shift", al->delta}, {"first_persistent_mismatch", n}, {"period", al->P}});
            // disjointness needs T_n or T'_n ergodic for every n; orders are bounded by K
            const Int K = std::max(spec_bounds(A).K, spec_bounds(B).K);
            v.rider = "unknown";
            for (const ParamSpec* s : {&A, &B}) {
                if (!is_totally_ergodic(*s).is_yes()) continue;
                bool all = true;
                for (Int d = 2; d <= K && all; ++d) all = power_ergodic(*s, d).is_yes();
                if (all) {
                    v.rider = "disjoint";
                    v.certificate["ergodic_powers_side"] = s == &A ? "A" : "B";
                    v.certificate["powers_checked_up_to"] = to_json(K);
                    break;
                }
            }
            return v;
        }
    }
    return Verdict::yes({{"shift", al->delta}, {"M", agreement_start(A, B, *al)}, {"period", al->P}});
}

// ---- classification --------------------------------------------------------

enum class Classification { MSJ, FiniteEigenvaluesNonRigid, RigidFiniteEigenvalues, OdometerBoundedType, Unknown };

inline const char* class_name(Classification c) {
    switch (c) {
        case Classification::MSJ: return "MSJ";
        case Classification::FiniteEigenvaluesNonRigid: return "FiniteEigenvaluesNonRigid";
        case Classification::RigidFiniteEigenvalues: return "RigidFiniteEigenvalues";
        case Classification::OdometerBoundedType: return "OdometerBoundedType";
        case Classification::Unknown: return "Unknown";
    }
    return "?";
}

struct AnalysisReport {
    Verdict bounded, rigid, totally_ergodic;
    Int R = 0, K = 0;
    Classification classification = Classification::Unknown;
    json details = json::object();
};

inline json to_json(const AnalysisReport& a) {
    json j;
    j["bounded"] = to_json(a.bounded);
    j["rigid"] = to_json(a.rigid);
    j["totally_ergodic"] = to_json(a.totally_ergodic);
    j["R"] = to_json(a.R);
    j["K"] = to_json(a.K);
    j["classification"] = class_name(a.classification);
    j["details"] = a.details;
    return j;
}

inline AnalysisReport classify(const ParamSpec& spec) {
    AnalysisReport rep;
    rep.bounded = is_bounded(spec);
    auto b = spec_bounds(spec);
    rep.R = b.R;
    rep.K = b.K;
    rep.rigid = is_rigid(spec);
    rep.totally_ergodic = is_totally_ergodic(spec);
    if (!spec.cyclic() || rep.rigid.is_unknown() || rep.totally_ergodic.is_unknown() || !rep.bounded.is_yes()) {
        rep.classification = Classification::Unknown;
        return rep;
    }
    if (rep.rigid.is_no()) {
        if (rep.totally_ergodic.is_yes()) {
            rep.classification = Classification::MSJ;
        } else {
            rep.classification = Classification::FiniteEigenvaluesNonRigid;
            rep.details["eigenvalue_order_bound"] = to_json(rep.K);
        }
        return rep;
    }
    // Rigid: look for an arithmetic tail C_{q+1} + C_{q+2} + ... (two periods suffice by periodicity).
    const std::size_t q = spec.q(), L = spec.period();
    if (arithmetic_window(spec, q + 1, q + 2 * L)) {
        rep.classification = Classification::OdometerBoundedType;
        const Int c = *interior_constant(spec.stage(q + 1));
        const Int step = heights(spec, q).back() + c;  // tower of this height over the tail odometer
        json pre = json::array(), cyc = json::array();
        if (step > 1) pre.push_back(to_json(step));
        for (std::size_t j = 1; j <= L; ++j) cyc.push_back(spec.stage(q + j).r());
        rep.details["base_prefix"] = pre;
        rep.details["base_cycle"] = cyc;
    } else {
        rep.classification = Classification::RigidFiniteEigenvalues;
        rep.details["eigenvalue_order_bound"] = to_json(rep.K);
    }
    return rep;
}

}  // namespace rankone

#pragma once

#include "decide.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace rankone {

// P_C = sum of t^c over c in C.  Coefficients are 0/1 by construction.
struct SetPolynomial {
    IntSet exponents;
    bool operator==(const SetPolynomial& o) const { return exponents == o.exponents; }
};

// P*Q, provided every coefficient stays 0/1 (i.e. (C-C) ∩ (D-D) = {0}).
inline SetPolynomial poly_mul_checked(const SetPolynomial& P, const SetPolynomial& Q,
                                      std::uint64_t budget = kDefaultBudget) {
    if (static_cast<double>(P.exponents.size()) * static_cast<double>(Q.exponents.size()) > static_cast<double>(budget))
        throw Error(ErrorKind::CardinalityBudgetExceeded, "polynomial product too large");
    std::vector<Int> all;
    all.reserve(P.exponents.size() * Q.exponents.size());
    for (const auto& a : P.exponents)
        for (const auto& b : Q.exponents) all.push_back(a + b);
    std::sort(all.begin(), all.end());
    auto dup = std::adjacent_find(all.begin(), all.end());
    if (dup != all.end())
        throw Error(ErrorKind::NotIndependent, "coefficient >= 2 at t^" + dup->get_str());
    return {std::move(all)};
}

// ---- two-sided supports ----------------------------------------------------

struct IntervalF {
    Int lo, hi;  // F = [lo, hi], lo <= 0 <= hi
    Int size() const { return hi - lo + 1; }
    bool contains(const Int& x) const { return lo <= x && x <= hi; }
};

// A rank-one spec whose towers are widened by `lo` levels below and `hi` levels
// above at every stage.  The carrier spec has the same C-sets built on the
// wider towers: its top spacer absorbs lo + hi, and F_n = [-n*lo, H_n - 1 - n*lo].
struct TopoSpec {
    ParamSpec base;
    Int lo = 0, hi = 0;

    ParamSpec carrier() const {
        auto widen = [&](const SpacerMap& m) {
            std::vector<Int> v(m.values());
            v.back() += lo + hi;
            return SpacerMap(std::move(v));
        };
        ParamSpec c;
        c.h0 = base.h0;
        for (const auto& m : base.prefix) c.prefix.push_back(widen(m));
        if (base.cycle) {
            std::vector<SpacerMap> cyc;
            for (const auto& m : *base.cycle) cyc.push_back(widen(m));
            c.cycle = std::move(cyc);
        }
        return c;
    }

    // F_0 .. F_depth
    std::vector<IntervalF> supports(std::size_t depth) const {
        auto H = heights(carrier(), depth);
        std::vector<IntervalF> out;
        for (std::size_t n = 0; n <= depth; ++n) {
            Int shift = lo * static_cast<unsigned long>(n);
            out.push_back({-shift, H[n] - 1 - shift});
        }
        return out;
    }
};

inline TopoSpec auto_pad(const ParamSpec& spec, long pad = 1) { return {spec, pad, pad}; }
inline TopoSpec unpadded(const ParamSpec& spec) { return {spec, 0, 0}; }

inline void require_nonnegative(const TopoSpec& t) {
    if (t.lo < 0 || t.hi < 0) throw Error(ErrorKind::NotPositive, "padding must be non-negative");
    if (t.base.h0 < 1) throw Error(ErrorKind::InvalidArgument, "h0 < 1");
}

// For g = +-1 and every n <= depth/2, some m in (n, depth] has g + F_n + C_{n+1} + ... + C_m
// inside F_m.  Intervals and min C = 0 make this a comparison of extremes.
// Returns the first (n, g) that fails.
inline std::optional<std::pair<std::size_t, int>> shift_inclusion_failure(const TopoSpec& t, std::size_t depth) {
    const auto F = t.supports(depth);
    const auto st = realize(t.carrier(), depth);
    for (std::size_t n = 0; 2 * n <= depth; ++n) {
        for (int g : {1, -1}) {
            bool ok = false;
            Int top = F[n].hi + g;
            for (std::size_t m = n + 1; m <= depth && !ok; ++m) {
                top += st[m - 1].C.back();
                ok = F[n].lo + g >= F[m].lo && top <= F[m].hi;
            }
            if (!ok) return std::make_pair(n, g);
        }
    }
    return std::nullopt;
}

// ---- truncated sumsets -----------------------------------------------------

using Bits = std::vector<std::uint8_t>;

struct Truncation {
    Bits ind;        // indicator of the sumset below `exact`
    std::uint64_t exact = 0;
};

// (C_from + C_{from+1} + ...) ∩ [0, D).  Nonzero elements of C_k are >= h_{k-1}, so
// only stages with h_{k-1} < D contribute.  A cycle-less spec that runs out of
// stages is exact only below its last height.
inline Truncation tail_indicator(const ParamSpec& carrier, std::size_t from, std::uint64_t D) {
    Truncation tr;
    tr.ind.assign(D, 0);
    tr.exact = D;
    if (D == 0) return tr;
    tr.ind[0] = 1;
    Int h = heights(carrier, from - 1).back();
    for (std::size_t k = from;; ++k) {
        if (h >= D) break;
        if (k > carrier.horizon()) {
            tr.exact = std::min<std::uint64_t>(D, h.get_ui());
            break;
        }
        const auto& m = carrier.stage(k);
        const IntSet C = stage_C(m, h);
        Bits next = tr.ind;
        for (std::size_t i = 1; i < C.size(); ++i) {
            if (C[i] >= D) break;
            const std::uint64_t c = C[i].get_ui();
            for (std::uint64_t x = 0; x + c < D; ++x)
                if (tr.ind[x]) next[x + c] = 1;
        }
        tr.ind = std::move(next);
        h = stage_height(m, h);
    }
    return tr;
}

struct DivisionResult {
    bool ok = false;
    IntSet R;
    std::uint64_t fail_degree = 0;
    std::string reason;
};

// Greedy R with R + T = S below D and R inside [0, Rmax]: the least uncovered
// element of S must itself lie in R (0 is in T), so the quotient is forced.
inline DivisionResult divide_truncated(const Bits& S, const Bits& T, std::uint64_t D, const Int& Rmax) {
    DivisionResult res;
    std::vector<std::uint64_t> tl;
    for (std::uint64_t x = 0; x < D; ++x)
        if (T[x]) tl.push_back(x);
    Bits cov(D, 0);
    for (std::uint64_t x = 0; x < D; ++x) {
        if (cov[x]) {
            if (!S[x]) {
                res.fail_degree = x;
                res.reason = "R + tail has an element missing from the sumset";
                return res;
            }
            continue;
        }
        if (!S[x]) continue;
        if (Int(static_cast<unsigned long>(x)) > Rmax) {
            res.fail_degree = x;
            res.reason = "sumset element not reachable from R inside F'";
            return res;
        }
        res.R.emplace_back(static_cast<unsigned long>(x));
        for (auto t : tl) {
            if (x + t >= D) break;
            if (cov[x + t]) {
                res.fail_degree = x + t;
                res.reason = "double coverage";
                return res;
            }
            cov[x + t] = 1;
        }
    }
    res.ok = true;
    return res;
}

// ---- witnesses -------------------------------------------------------------

// Index pairs 0 = l_0 < l'_1 < l_1 < l'_2 < ... with A_n inside F'_{l'_n}, B_n inside F_{l_n}.
struct TopoWitness {
    std::vector<std::size_t> l, lp;
    std::vector<IntSet> A, B;
};

inline json to_json(const TopoWitness& w) {
    json A = json::array(), B = json::array();
    for (const auto& a : w.A) A.push_back(to_json(a));
    for (const auto& b : w.B) B.push_back(to_json(b));
    return {{"l", w.l}, {"lp", w.lp}, {"A", A}, {"B", B}};
}

inline IntSet set_from_json(const json& j) {
    IntSet s;
    for (const auto& x : j) s.push_back(x.is_string() ? Int(x.get<std::string>()) : Int(x.get<long>()));
    normalize_set(s);
    return s;
}

inline TopoWitness witness_from_json(const json& j) {
    TopoWitness w;
    w.l = j.at("l").get<std::vector<std::size_t>>();
    w.lp = j.at("lp").get<std::vector<std::size_t>>();
    for (const auto& a : j.at("A")) w.A.push_back(set_from_json(a));
    for (const auto& b : j.at("B")) w.B.push_back(set_from_json(b));
    return w;
}

inline IntSet block_sumset(const ParamSpec& carrier, std::size_t from, std::size_t to, std::uint64_t budget) {
    IntSet S{Int(0)};
    auto st = realize(carrier, to);
    for (std::size_t k = from; k <= to; ++k) S = sumset(S, st[k - 1].C, budget);
    return S;
}

inline Int min_gap(const IntSet& s) {
    Int g = -1;
    for (std::size_t i = 1; i < s.size(); ++i)
        if (g < 0 || s[i] - s[i - 1] < g) g = s[i] - s[i - 1];
    return g;  // -1 for singletons
}

inline bool gap_ok(const IntSet& s, const Int& width) { return s.size() < 2 || min_gap(s) >= width; }

inline bool inside(const IntSet& s, const IntervalF& F) { return !s.empty() && F.lo <= s.front() && s.back() <= F.hi; }

// F + S inside G for an interval F and a finite set S.
inline bool shifted_inside(const IntervalF& F, const IntSet& S, const IntervalF& G) {
    return !S.empty() && F.lo + S.front() >= G.lo && F.hi + S.back() <= G.hi;
}

// Exact quotient Q with Q + D = X (unique representation), if any.
inline std::optional<IntSet> divide_sets(const IntSet& X, const IntSet& D, std::uint64_t budget) {
    if (X.empty() || D.empty() || D.front() != 0 || X.front() != 0) return std::nullopt;
    const Int span = X.back() + 1;
    if (span > Int(static_cast<unsigned long>(4 * budget)))
        throw Error(ErrorKind::CardinalityBudgetExceeded, "division span " + span.get_str());
    const std::uint64_t n = span.get_ui();
    Bits inX(n, 0), cov(n, 0);
    for (const auto& x : X) inX[x.get_ui()] = 1;
    std::vector<std::uint64_t> d;
    for (const auto& v : D) {
        if (v >= span) return std::nullopt;
        d.push_back(v.get_ui());
    }
    IntSet Q;
    for (const auto& xv : X) {
        const std::uint64_t x = xv.get_ui();
        if (cov[x]) continue;
        Q.push_back(xv);
        for (auto dd : d) {
            const std::uint64_t p = x + dd;
            if (p >= n || !inX[p] || cov[p]) return std::nullopt;
            cov[p] = 1;
        }
    }
    return Q;
}

struct WitnessLimits {
    std::size_t levels = 3;     // pairs (A_n, B_n)
    std::size_t max_extra = 8;  // how far past the previous index to look
    std::uint64_t budget = kDefaultBudget;
};

// Builds A_1 = R + C'_r and then alternately the least l_n, l'_{n+1} whose block
// sumset divides exactly by the previous set with the containment and gap
// conditions.  nullopt when the limits are hit first.
inline std::optional<TopoWitness> build_witness(const TopoSpec& a, const TopoSpec& b, std::size_t r, const IntSet& R,
                                                const WitnessLimits& lim) {
    const ParamSpec ca = a.carrier(), cb = b.carrier();
    const std::size_t span = r + (lim.levels + 1) * (lim.max_extra + 1) + 1;
    const std::size_t da = std::min(span, ca.horizon()), db = std::min(span, cb.horizon());
    const auto Fa = a.supports(da), Fb = b.supports(db);

    TopoWitness w;
    if (r > db) return std::nullopt;
    IntSet A1 = poly_mul_checked({R}, {realize_stage(cb, r).C}, lim.budget).exponents;
    if (!inside(A1, Fb[r]) || !gap_ok(A1, Fa[0].size())) return std::nullopt;
    w.lp.push_back(r);
    w.A.push_back(std::move(A1));
    std::size_t lprev = 0;
    for (std::size_t n = 1; n <= lim.levels; ++n) {
        const std::size_t lpn = w.lp.back();
        bool found = false;
        for (std::size_t l = lpn + 1; l <= std::min(lpn + lim.max_extra, da) && !found; ++l) {
            auto Q = divide_sets(block_sumset(ca, lprev + 1, l, lim.budget), w.A.back(), lim.budget);
            if (!Q || !inside(*Q, Fa[l]) || !shifted_inside(Fb[lpn], *Q, Fa[l]) || !gap_ok(*Q, Fb[lpn].size())) continue;
            w.l.push_back(l);
            w.B.push_back(std::move(*Q));
            found = true;
        }
        if (!found) return std::nullopt;
        if (n == lim.levels) break;
        const std::size_t ln = w.l.back();
        found = false;
        for (std::size_t lp = ln + 1; lp <= std::min(ln + lim.max_extra, db) && !found; ++lp) {
            auto Q = divide_sets(block_sumset(cb, lpn + 1, lp, lim.budget), w.B.back(), lim.budget);
            if (!Q || !inside(*Q, Fb[lp]) || !shifted_inside(Fa[ln], *Q, Fb[lp]) || !gap_ok(*Q, Fa[ln].size())) continue;
            w.lp.push_back(lp);
            w.A.push_back(std::move(*Q));
            found = true;
        }
        if (!found) return std::nullopt;
        lprev = ln;
    }
    return w;
}

// All five condition families, additively, for every n in the witness.
inline bool verify_witness(const TopoSpec& a, const TopoSpec& b, const TopoWitness& w,
                           std::uint64_t budget = kDefaultBudget) {
    const std::size_t N = w.l.size();
    if (N == 0 || w.lp.size() != N || w.A.size() != N || w.B.size() != N) return false;
    std::size_t prev = 0;
    for (std::size_t n = 0; n < N; ++n) {
        if (!(prev < w.lp[n] && w.lp[n] < w.l[n])) return false;
        prev = w.l[n];
    }
    const ParamSpec ca = a.carrier(), cb = b.carrier();
    const std::size_t da = w.l.back(), db = w.lp.back();
    if (da > ca.horizon() || db > cb.horizon())
        throw Error(ErrorKind::DepthExceeded, "witness indices beyond the specs");
    const auto Fa = a.supports(da), Fb = b.supports(db);
    for (std::size_t n = 0; n < N; ++n) {
        const auto& A = w.A[n];
        const auto& B = w.B[n];
        const std::size_t lpn = w.lp[n], ln = w.l[n], lprev = n == 0 ? 0 : w.l[n - 1];
        if (A.empty() || B.empty()) return false;
        if (!inside(A, Fb[lpn]) || !inside(B, Fa[ln])) return false;
        if (!gap_ok(A, Fa[lprev].size()) || !gap_ok(B, Fb[lpn].size())) return false;
        if (!shifted_inside(Fb[lpn], B, Fa[ln])) return false;
        if (sumset(A, B, budget) != block_sumset(ca, lprev + 1, ln, budget)) return false;
        try {
            poly_mul_checked({A}, {B}, budget);
        } catch (const Error& e) {
            if (e.kind() == ErrorKind::NotIndependent) return false;
            throw;
        }
        if (n + 1 < N) {
            const auto& A2 = w.A[n + 1];
            const std::size_t lp2 = w.lp[n + 1];
            if (!shifted_inside(Fa[ln], A2, Fb[lp2])) return false;
            if (sumset(B, A2, budget) != block_sumset(cb, lpn + 1, lp2, budget)) return false;
        }
    }
    return true;
}

// ---- Z-conjugacy search ----------------------------------------------------

struct TopoSearchOptions {
    std::size_t horizon = 8;
    std::uint64_t budget = kDefaultBudget;
    WitnessLimits witness{};
};

// Compares sum_{i>=1} C_i with R + sum_{i>=r} C'_i, R inside F'_{r-1} ∩ Z_+, as
// truncated indicator series.  Below the truncation degree both sides are
// exact, so a disagreement there is final for that r.
inline Verdict topo_iso_search(const TopoSpec& a, const TopoSpec& b, const TopoSearchOptions& opt = {}) {
    require_nonnegative(a);
    require_nonnegative(b);
    if (opt.horizon < 1) throw Error(ErrorKind::InvalidArgument, "horizon must be >= 1");
    const ParamSpec ca = a.carrier(), cb = b.carrier();
    const std::size_t ha = std::min(opt.horizon, ca.horizon()), hb = std::min(opt.horizon, cb.horizon());
    const auto Ha = heights(ca, ha), Hb = heights(cb, hb);
    Int target = 4 * std::max(Ha.back(), Hb.back());
    target = std::min(target, Int(static_cast<unsigned long>(4 * opt.budget)));
    const std::uint64_t D0 = target.get_ui();

    const Truncation S = tail_indicator(ca, 1, D0);
    const auto Fb = b.supports(hb);
    json attempts = json::array();
    bool undecided = false;
    std::optional<std::uint64_t> first_degree;
    std::uint64_t safe = S.exact;
    for (std::size_t r = 1; r <= hb; ++r) {
        const Truncation T = tail_indicator(cb, r, D0);
        const std::uint64_t D = std::min(S.exact, T.exact);
        safe = std::min(safe, D);
        const Int& Rmax = Fb[r - 1].hi;
        auto div = divide_truncated(S.ind, T.ind, D, Rmax);
        if (div.ok) {
            if (Rmax + 1 >= D) {
                undecided = true;
                attempts.push_back({{"r", r}, {"status", "truncation too shallow"}});
                continue;
            }
            json cert{{"r", r}, {"R", to_json(div.R)}, {"degree", D}};
            const IntSet Cr = realize_stage(cb, r).C;
            cert["exclusive_form"] = {{"r", r}, {"R", to_json(sumset(div.R, Cr, opt.budget))}};
            auto w = build_witness(a, b, r, div.R, opt.witness);
            if (!w) {
                cert["reason"] = "series agree but no witness within limits";
                return Verdict::unknown(cert);
            }
            cert["witness"] = to_json(*w);
            cert["witness_verified"] = verify_witness(a, b, *w, opt.budget);
            if (!cert["witness_verified"].get<bool>()) return Verdict::unknown(cert);
            return Verdict::yes(cert);
        }
        if (!first_degree) first_degree = div.fail_degree;
        attempts.push_back({{"r", r}, {"mismatch_degree", div.fail_degree}, {"reason", div.reason}});
    }
    json cert{{"attempts", attempts}, {"safe_degree", safe}, {"horizon", hb}};
    if (first_degree) cert["mismatch_degree"] = *first_degree;
    if (undecided) return Verdict::unknown(cert);
    return Verdict::no(cert);
}

// Realized C-sets eventually equal under the height alignment.
inline Verdict commensurate_topo_iso(const ParamSpec& A, const ParamSpec& B) {
    if (!A.cyclic() || !B.cyclic()) return aperiodic_unknown("alignment needs both cycles");
    const long S = static_cast<long>(A.q() + B.q() + std::lcm(A.period(), B.period())) + 16;
    auto al = align_heights(A, B, S);
    if (!al) throw Error(ErrorKind::NotCommensurate, "no stage shift makes the heights agree eventually");
    for (std::size_t t = 1; t <= al->P; ++t) {
        const std::size_t n = al->N0 + t;
        if (realize_stage(A, n).C != realize_stage(B, n + al->delta).C)
            return Verdict::no({{"shift", al->delta}, {"first_persistent_mismatch", n}, {"period", al->P}});
    }
    return Verdict::yes({{"shift", al->delta}, {"M", agreement_start(A, B, *al)}, {"period", al->P}});
}

// Inverse conjugacy over Z: C*_n = C_n on every cycle stage, once the shifted
// inclusions have been checked to the given depth for the widened towers.
inline Verdict topo_inverse_iso(const TopoSpec& t, std::size_t depth) {
    require_nonnegative(t);
    if (!t.base.cyclic()) return aperiodic_unknown("eventual symmetry needs the cycle");
    if (depth < 2) throw Error(ErrorKind::InvalidArgument, "depth must be >= 2");
    // C* has the same extremes as C, so one check covers both families.
    if (auto f = shift_inclusion_failure(t, depth))
        throw Error(ErrorKind::StandardnessUnverified,
                    "shift " + std::to_string(f->second) + " of F_" + std::to_string(f->first) + " never fits by depth " +
                        std::to_string(depth) + "; widen the towers");
    const std::size_t q = t.base.q(), L = t.base.period();
    for (std::size_t j = 1; j <= L; ++j)
        if (!reflection_symmetric(t.base.stage(q + j))) return Verdict::no({{"asymmetric_stage", q + j}});
    return Verdict::yes({{"symmetric_from", q + 1}, {"checked_depth", depth}});
}

}  // namespace rankone

#pragma once

#include <gmpxx.h>

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace rankone {

using Int = mpz_class;
using Rat = mpq_class;
using IntSet = std::vector<Int>;  // sorted, distinct

enum class ErrorKind {
    InvalidArgument,
    DepthExceeded,
    OutOfRange,
    CardinalityBudgetExceeded,
    NotIndependent,
    NotPositive,
    NotCommensurate,
    PreconditionRigid,
    StandardnessUnverified,
    NotAdapted,
    DegenerateDrop,
    NotTelescoped,
    UnknownForAperiodicSpec,
    UnknownForUnboundedSpec,
};

inline const char* kind_name(ErrorKind k) {
    switch (k) {
        case ErrorKind::InvalidArgument: return "InvalidArgument";
        case ErrorKind::DepthExceeded: return "DepthExceeded";
        case ErrorKind::OutOfRange: return "OutOfRange";
        case ErrorKind::CardinalityBudgetExceeded: return "CardinalityBudgetExceeded";
        case ErrorKind::NotIndependent: return "NotIndependent";
        case ErrorKind::NotPositive: return "NotPositive";
        case ErrorKind::NotCommensurate: return "NotCommensurate";
        case ErrorKind::PreconditionRigid: return "PreconditionRigid";
        case ErrorKind::StandardnessUnverified: return "StandardnessUnverified";
        case ErrorKind::NotAdapted: return "NotAdapted";
        case ErrorKind::DegenerateDrop: return "DegenerateDrop";
        case ErrorKind::NotTelescoped: return "NotTelescoped";
        case ErrorKind::UnknownForAperiodicSpec: return "UnknownForAperiodicSpec";
        case ErrorKind::UnknownForUnboundedSpec: return "UnknownForUnboundedSpec";
    }
    return "?";
}

class Error : public std::runtime_error {
public:
    Error(ErrorKind k, const std::string& what)
        : std::runtime_error(std::string(kind_name(k)) + ": " + what), kind_(k) {}
    ErrorKind kind() const { return kind_; }

private:
    ErrorKind kind_;
};

// Budget for any materialized set.
inline constexpr std::uint64_t kDefaultBudget = std::uint64_t{1} << 23;

inline std::string str(const Int& x) { return x.get_str(); }

// Rationals print as "p/q" (q always present) in machine output.
inline std::string str(const Rat& q) {
    Rat c = q;
    c.canonicalize();
    return c.get_num().get_str() + "/" + c.get_den().get_str();
}

inline bool fits_i64(const Int& x) {
    static const Int lo("-4611686018427387904"), hi("4611686018427387903");  // +-2^62
    return x >= lo && x <= hi;
}

inline std::int64_t to_i64(const Int& x) {
    if (!fits_i64(x)) throw Error(ErrorKind::OutOfRange, "integer " + x.get_str() + " exceeds 62-bit simulation range");
    return static_cast<std::int64_t>(x.get_si());
}

inline Int from_i64(std::int64_t v) {
    Int r;
    mpz_set_si(r.get_mpz_t(), static_cast<long>(v));
    return r;
}

inline Int gcd(const Int& a, const Int& b) {
    Int r;
    mpz_gcd(r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return r;
}

inline Int lcm(const Int& a, const Int& b) {
    Int r;
    mpz_lcm(r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return r;
}

inline Int pow2(unsigned long e) {
    Int r;
    mpz_ui_pow_ui(r.get_mpz_t(), 2, e);
    return r;
}

// Distinct prime factors by trial division; the inputs here are spacer
// combinations, so they stay small.  Large cofactors are reported as-is.
inline std::vector<Int> prime_factors(Int n) {
    std::vector<Int> ps;
    if (n < 0) n = -n;
    if (n < 2) return ps;
    for (Int p = 2; p * p <= n; ++p) {
        if (n % p == 0) {
            ps.push_back(p);
            while (n % p == 0) n /= p;
        }
    }
    if (n > 1) ps.push_back(n);
    return ps;
}

inline void normalize_set(IntSet& s) {
    std::sort(s.begin(), s.end());
    s.erase(std::unique(s.begin(), s.end()), s.end());
}

inline IntSet make_set(std::vector<Int> v) {
    normalize_set(v);
    return v;
}

inline IntSet make_set(std::initializer_list<long> v) {
    IntSet s;
    for (long x : v) s.emplace_back(x);
    normalize_set(s);
    return s;
}

// A + B with budget; duplicates collapse.
inline IntSet sumset(const IntSet& a, const IntSet& b, std::uint64_t budget = kDefaultBudget) {
    if (static_cast<double>(a.size()) * static_cast<double>(b.size()) > static_cast<double>(budget))
        throw Error(ErrorKind::CardinalityBudgetExceeded,
                    "sumset of sizes " + std::to_string(a.size()) + " x " + std::to_string(b.size()));
    IntSet out;
    out.reserve(a.size() * b.size());
    for (const auto& y : b)
        for (const auto& x : a) out.push_back(x + y);
    normalize_set(out);
    return out;
}

inline IntSet translate(const IntSet& a, const Int& t) {
    IntSet out;
    out.reserve(a.size());
    for (const auto& x : a) out.push_back(x + t);
    return out;
}

}  // namespace rankone

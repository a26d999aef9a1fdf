// One PASS/FAIL line per acceptance criterion.  Exit status is the number of failures.
#include "oracles.hpp"

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <iomanip>
#include <sstream>

using namespace rankone;

namespace {

struct Outcome {
    bool pass = true;
    std::string detail;
};

int failures = 0;

void report(int id, const std::string& name, const std::function<Outcome()>& fn) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
        o = fn();
    } catch (const std::exception& e) {
        o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (!o.pass) ++failures;
    std::printf("%s %2d %s (%.1fs)%s%s\n", o.pass ? "PASS" : "FAIL", id, name.c_str(), secs, o.detail.empty() ? "" : " :: ",
                o.detail.c_str());
    std::fflush(stdout);
}

std::vector<ParamSpec> corpus(std::size_t n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::vector<ParamSpec> out;
    for (std::size_t i = 0; i < n; ++i) out.push_back(oracle::random_spec(rng));
    return out;
}

Outcome builtins() {
    std::ostringstream bad;
    auto expect = [&](bool ok, const std::string& what) {
        if (!ok) bad << what << "; ";
    };
    for (auto [name, spec] : {std::pair{"chacon2", ParamSpec::chacon2()}, std::pair{"chacon3", ParamSpec::chacon3()}}) {
        const std::string n = name;
        expect(is_rigid(spec).is_no(), n + " rigid");
        expect(is_totally_ergodic(spec).is_yes(), n + " not totally ergodic");
        expect(classify(spec).classification == Classification::MSJ, n + " not MSJ");
    }
    auto inv = inverse_isomorphic(ParamSpec::chacon3());
    expect(inv.is_no() && inv.rider == std::optional<std::string>("disjoint"), "chacon3 inverse verdict/rider");
    const auto od = ParamSpec::odometer(2);
    expect(is_rigid(od).is_yes(), "odometer not rigid");
    expect(is_totally_ergodic(od).is_no(), "odometer totally ergodic");
    auto rep = classify(od);
    expect(rep.classification == Classification::OdometerBoundedType, "odometer class");
    expect(rep.details["base_prefix"] == json::array() && rep.details["base_cycle"] == json::array({2}),
           "odometer base " + rep.details.dump());
    return {bad.str().empty(), bad.str()};
}

Outcome rigidity_oracle(const std::vector<ParamSpec>& specs) {
    std::size_t dis = 0, rigid = 0;
    for (const auto& s : specs) {
        const bool v = is_rigid(s).is_yes();
        rigid += v;
        if (v != oracle::rigid_by_windows(s, 12)) ++dis;
    }
    return {dis == 0, std::to_string(specs.size()) + " specs, " + std::to_string(rigid) + " rigid, " +
                          std::to_string(dis) + " disagreements"};
}

Outcome ergodic_oracle(const std::vector<ParamSpec>& specs) {
    std::size_t dis = 0, te = 0;
    for (const auto& s : specs) {
        const bool v = is_totally_ergodic(s).is_yes();
        te += v;
        if (v != oracle::totally_ergodic_by_scan(s)) ++dis;
    }
    return {dis == 0, std::to_string(specs.size()) + " specs, " + std::to_string(te) + " totally ergodic, " +
                          std::to_string(dis) + " disagreements"};
}

Outcome diamond_sumset() {
    std::mt19937_64 rng(4);
    std::uniform_int_distribution<std::size_t> R(1, 6);
    std::uniform_int_distribution<long> H(1, 20);
    std::size_t bad = 0;
    for (int i = 0; i < 500; ++i) {
        auto a = oracle::random_map(rng, R(rng), 5), b = oracle::random_map(rng, R(rng), 5);
        const Int h = H(rng);
        const IntSet lhs = stage_C(diamond(a, b), h);
        const IntSet rhs = sumset(stage_C(a, h), stage_C(b, stage_height(a, h)));
        if (lhs != rhs || stage_height(diamond(a, b), h) != stage_height(b, stage_height(a, h))) ++bad;
    }
    return {bad == 0, "500 pairs, " + std::to_string(bad) + " mismatches"};
}

Outcome telescoping(const std::vector<ParamSpec>& specs) {
    std::size_t bad = 0;
    for (const auto& s : specs) {
        const auto base = classify(s);
        for (std::size_t d : {2, 3}) {
            const auto t = telescope_stride(s, d);
            const auto rep = classify(t);
            if (rep.rigid.value != base.rigid.value || rep.totally_ergodic.value != base.totally_ergodic.value ||
                rep.classification != base.classification)
                ++bad;
        }
    }
    return {bad == 0, std::to_string(specs.size()) + " specs x strides {2,3}, " + std::to_string(bad) + " changes"};
}

Outcome weak_limit() {
    const auto spec = telescope_stride(ParamSpec::chacon3(), 6);
    std::mt19937_64 rng(6);
    const Int h1 = heights(spec, 1).back();
    // A and B drawn from one short window so the correlations are not all zero
    std::uniform_int_distribution<long> base(0, h1.get_si() - 8), off(0, 7);
    std::uniform_int_distribution<int> sz(1, 4);
    std::size_t bad = 0, nontrivial = 0;
    Rat worst = 0;
    for (int i = 0; i < 9; ++i) {
        const long b = base(rng);
        IntSet A, B;
        for (int j = sz(rng); j > 0; --j) A.emplace_back(b + off(rng));
        for (int j = sz(rng); j > 0; --j) B.emplace_back(b + off(rng));
        normalize_set(A);
        normalize_set(B);
        auto rep = weak_limit_check(spec, 2, 1, A, B, 3);
        if (rep.r != 729 || !rep.holds) ++bad;
        if (rep.points.front().value != 0) ++nontrivial;
        Rat slack = rep.residual / rep.bound;
        if (slack > worst) worst = slack;
    }
    std::ostringstream w;
    w << std::scientific << std::setprecision(2) << worst.get_d();
    return {bad == 0, "9 pairs, r=729, " + std::to_string(nontrivial) + " with nonzero mu(T_{-h_n}A & B), max residual/bound = " + w.str()};
}

Outcome measure_exact() {
    std::ostringstream out;
    bool ok = true;
    for (auto [spec, expected] : {std::pair{ParamSpec::chacon2(), Rat(2)}, std::pair{ParamSpec::chacon3(), Rat(3, 2)}}) {
        const Rat total = total_measure(spec);
        const auto rep = measure(spec, 40);
        Int P = 1;
        for (const auto& m : *spec.cycle) P *= static_cast<unsigned long>(m.r());
        Rat tol(1, 1);
        for (int i = 0; i < 38; ++i) tol /= P;
        const bool here = total == expected && abs(Rat(rep.phi[40] - total)) <= tol;
        ok = ok && here;
        out << str(total) << (here ? " ok; " : " BAD; ");
    }
    return {ok, out.str()};
}

ParamSpec dyadic_growing(std::size_t stages) {
    ParamSpec s;
    for (std::size_t n = 1; n <= stages; ++n) s.prefix.push_back(SpacerMap::zeros(std::size_t{1} << n));
    return s;
}

Outcome expansive() {
    std::ostringstream out;
    bool ok = true;
    const auto src = dyadic_growing(7);
    const auto res = expansive_transform(src, /*allow_unit_stages=*/true);
    std::size_t r_ok = 0, sig_ok = 0;
    std::string got;
    for (std::size_t n = 1; n <= 6; ++n) {
        const auto& st = res.stages[n - 1];
        r_ok += st.r_star == (std::size_t{1} << n) - 1;
        const bool s_ok = st.sigma_star.top() == pow2(n * (n + 1) / 2);
        sig_ok += s_ok;
        got += "2^" + std::to_string(mpz_sizeinbase(st.sigma_star.top().get_mpz_t(), 2) - 1) + (n < 6 ? "," : "");
    }
    bool dominant = true;
    for (const auto& st : res.stages) dominant = dominant && st.sigma_star.top() > st.sigma_star.max_interior();
    ok = r_ok == 6 && sig_ok == 6 && dominant;
    out << "r* ok " << r_ok << "/6; top spacer 2^{n(n+1)/2} ok " << sig_ok << "/6 (got " << got << "); dominance "
        << (dominant ? "ok" : "BAD");

    // Codes of 32 points with distinct level in F_4, coordinates down to depth 6.
    const auto& T = res.spec;
    const auto h = heights(T, 6);
    const long h4 = h[4].get_si();
    std::mt19937_64 rng(8);
    std::vector<long> fs(static_cast<std::size_t>(h4));
    std::iota(fs.begin(), fs.end(), 0L);
    std::shuffle(fs.begin(), fs.end(), rng);
    std::set<std::string> codes;
    for (int i = 0; i < 32; ++i) {
        std::vector<Int> c;
        for (std::size_t j = 5; j <= 6; ++j) {
            const IntSet C = stage_C(T.stage(j), h[j - 1]);
            std::uniform_int_distribution<std::size_t> pick(0, C.size() - 1);
            c.push_back(C[pick(rng)]);
        }
        const Int lvl = point_level(T, 4, fs[static_cast<std::size_t>(i)], c);
        codes.insert(symbolic_code(T, 0, lvl, 6, -h4, h4));
    }
    const bool distinct = codes.size() == 32;
    out << "; 32 codes distinct: " << (distinct ? "yes" : "no (" + std::to_string(codes.size()) + ")");

    const auto od = ParamSpec::odometer(2);
    const auto ho = heights(od, 8);
    const long o4 = ho[4].get_si();
    bool zeros = true;
    for (long f = o4; f < ho[8].get_si() - o4; f += 7) {
        auto w = symbolic_code(od, 0, f, 8, -o4, o4);
        zeros = zeros && w.find_first_not_of('0') == std::string::npos;
    }
    out << "; odometer codes all zero: " << (zeros ? "yes" : "no");
    ok = ok && distinct && zeros;
    return {ok, out.str()};
}

Outcome topo_search() {
    std::ostringstream out;
    const auto od = ParamSpec::odometer(2);
    auto yes = topo_iso_search(unpadded(od), unpadded(telescope_stride(od, 2)));
    const bool y_ok = yes.is_yes() && yes.certificate["r"] == 1 && yes.certificate["R"] == json::array({0}) &&
                      yes.certificate.value("witness_verified", false);
    out << "odometer/stride-2: " << value_name(yes.value) << (y_ok ? " ok" : " BAD " + yes.certificate.dump());

    const auto a = auto_pad(ParamSpec::chacon2()), b = auto_pad(ParamSpec::chacon3());
    auto no = topo_iso_search(a, b);
    const Int h3 = std::min(heights(a.carrier(), 3).back(), heights(b.carrier(), 3).back());
    bool n_ok = no.is_no() && no.certificate.contains("mismatch_degree") &&
                Int(no.certificate["mismatch_degree"].get<long>()) < h3;
    out << "; chacon2/chacon3 padded: " << value_name(no.value);
    if (no.certificate.contains("mismatch_degree"))
        out << " at degree " << no.certificate["mismatch_degree"].get<long>() << " < h_3=" << h3.get_str();
    if (!n_ok) out << " BAD";
    return {y_ok && n_ok, out.str()};
}

Outcome correlation_convergence(const std::vector<ParamSpec>& specs) {
    std::mt19937_64 rng(10);
    std::size_t bad = 0;
    for (int i = 0; i < 20; ++i) {
        const auto& s = specs[rng() % specs.size()];
        std::size_t m = 2;
        auto h = heights(s, m + 2);
        while (h[m] < 64) h = heights(s, ++m + 2);
        const long h1 = heights(s, 1).back().get_si();
        std::uniform_int_distribution<long> lvl(0, h1 - 1), shift(-(h[m].get_si() / 8), h[m].get_si() / 8);
        IntSet A{Int(lvl(rng))}, B{Int(lvl(rng)), Int(lvl(rng))};
        normalize_set(B);
        const Int t = shift(rng);
        auto p = correlation(s, t, 1, A, B, m), q = correlation(s, t, 1, A, B, m + 2);
        if (abs(Rat(p.value - q.value)) > p.error_bound) ++bad;
    }
    return {bad == 0, "20 triples, " + std::to_string(bad) + " violations"};
}

}  // namespace

int main() {
    const auto specs = corpus(200, 2);
    report(1, "builtin verdicts", builtins);
    report(2, "rigidity vs window oracle", [&] { return rigidity_oracle(specs); });
    report(3, "total ergodicity vs divisibility scan", [&] { return ergodic_oracle(specs); });
    report(4, "diamond equals sumset", diamond_sumset);
    report(5, "telescoping invariance", [&] { return telescoping(specs); });
    report(6, "weak-limit inequality", weak_limit);
    report(7, "exact total measure", measure_exact);
    report(8, "expansive re-presentation", expansive);
    report(9, "Z-conjugacy search", topo_search);
    report(10, "correlation convergence", [&] { return correlation_convergence(specs); });
    std::printf("%d of 10 criteria failed\n", failures);
    return failures;
}

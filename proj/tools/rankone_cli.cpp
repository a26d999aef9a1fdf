// rankone_cli: validate | analyze | iso | simulate | transform
// Exit status: 0 definite result, 2 unknown, 1 input error.
#include <rankone/rankone.hpp>

#include <CLI11.hpp>

#include <cstdio>
#include <iomanip>
#include <iostream>
#include <random>
#include <regex>
#include <sstream>

using namespace rankone;

namespace {

enum Exit { kOk = 0, kInput = 1, kUnknown = 2 };

struct Globals {
    std::size_t depth = 12;
    std::size_t horizon = 8;
    std::uint64_t budget = kDefaultBudget;
    std::string format = "json";
    std::uint64_t seed = 0;
    bool normalize = false;
};

Globals G;

// "p/q" strings get an approximate decimal in text mode.
void render_text(const json& j, std::ostream& os, int indent) {
    static const std::regex rat(R"(^-?\d+/\d+$)");
    const std::string pad(static_cast<std::size_t>(std::max(indent, 0)), ' ');
    auto nested = [](const json& x) {
        return (x.is_object() && !x.empty()) ||
               (x.is_array() && std::any_of(x.begin(), x.end(), [](const json& y) { return y.is_structured(); }));
    };
    if (j.is_object()) {
        for (auto it = j.begin(); it != j.end(); ++it) {
            if (nested(*it)) {
                os << pad << it.key() << ":\n";
                render_text(*it, os, indent + 2);
            } else {
                os << pad << it.key() << ": ";
                render_text(*it, os, -1);
                os << "\n";
            }
        }
    } else if (indent >= 0 && nested(j) && j.is_array()) {
        for (const auto& x : j) {
            os << pad << "-\n";
            render_text(x, os, indent + 2);
        }
    } else if (j.is_string() && std::regex_match(j.get<std::string>(), rat)) {
        const auto s = j.get<std::string>();
        Rat q(s);
        q.canonicalize();
        std::ostringstream approx;
        approx << std::setprecision(6) << q.get_d();
        os << s << " (approx " << approx.str() << ")";
        if (indent >= 0) os << "\n";
    } else {
        os << (j.is_string() ? j.get<std::string>() : j.dump());
        if (indent >= 0) os << "\n";
    }
}

void emit(const json& j) {
    if (G.format == "text")
        render_text(j, std::cout, 0);
    else
        std::cout << j.dump() << "\n";
}

int verdict_exit(const Verdict& v) { return v.is_unknown() ? kUnknown : kOk; }

IntSet parse_set(const std::string& s) {
    IntSet out;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        if (tok.empty()) continue;
        Int v;
        if (v.set_str(tok, 10) != 0) throw Error(ErrorKind::InvalidArgument, "bad integer '" + tok + "'");
        out.push_back(v);
    }
    normalize_set(out);
    return out;
}

// "a..b" (inclusive) or a comma list.
std::vector<Int> parse_shifts(const std::string& s) {
    const auto dots = s.find("..");
    if (dots == std::string::npos) {
        IntSet v = parse_set(s);
        return {v.begin(), v.end()};
    }
    Int a, b;
    if (a.set_str(s.substr(0, dots), 10) != 0 || b.set_str(s.substr(dots + 2), 10) != 0 || b < a)
        throw Error(ErrorKind::InvalidArgument, "bad range '" + s + "'");
    if (b - a > 1000000) throw Error(ErrorKind::InvalidArgument, "range too long");
    std::vector<Int> out;
    for (Int t = a; t <= b; ++t) out.push_back(t);
    return out;
}

Rat scale(const Rat& x, const Rat& total) {
    if (!G.normalize) return x;
    Rat y = x / total;
    y.canonicalize();
    return y;
}

json correlation_json(const CorrelationPoint& p, const Rat& total) {
    return {{"t", to_json(p.t)}, {"value", str(scale(p.value, total))}, {"error_bound", str(scale(p.error_bound, total))}};
}

void correlation_csv(const std::vector<CorrelationPoint>& pts, const Rat& total, const std::vector<int>* flags) {
    std::cout << "t,numerator,denominator,error_num,error_den" << (flags ? ",flagged" : "") << "\n";
    for (std::size_t i = 0; i < pts.size(); ++i) {
        const Rat v = scale(pts[i].value, total), e = scale(pts[i].error_bound, total);
        std::cout << pts[i].t.get_str() << ',' << v.get_num().get_str() << ',' << v.get_den().get_str() << ','
                  << e.get_num().get_str() << ',' << e.get_den().get_str();
        if (flags) std::cout << ',' << (*flags)[i];
        std::cout << "\n";
    }
}

Rat tower_total(const ParamSpec& s) { return s.cyclic() ? total_measure(s) : measure(s, s.horizon()).total; }

// ---- subcommands -----------------------------------------------------------

int cmd_validate(const std::string& src) {
    const auto spec = load_spec(src);
    const auto viol = validate(spec, G.depth);
    const auto mr = measure(spec, G.depth);
    json v = json::array();
    for (const auto& x : viol) v.push_back({{"stage", x.stage}, {"condition", x.condition}, {"detail", x.detail}});
    json phi = json::array();
    for (const auto& p : mr.phi) phi.push_back(str(scale(p, mr.total)));
    json out{{"valid", viol.empty()},
             {"violations", v},
             {"spec", to_json(spec)},
             {"measure", {{"phi", phi}, {"total", str(G.normalize ? Rat(1) : mr.total)}, {"exact", mr.exact}, {"finite", mr.finite}}}};
    const std::size_t d = std::min(G.depth, spec.horizon());
    if (d >= 2) {
        const auto sr = standardness_check(spec, 1, 0, d);
        out["shift_check"] = {{"g", 1}, {"n", 0}, {"depth", d}, {"inclusion", sr.holds}, {"ratio", str(sr.ratio)}};
    }
    emit(out);
    return viol.empty() ? kOk : kInput;
}

int cmd_analyze(const std::string& src) {
    const auto rep = classify(load_spec(src));
    emit(to_json(rep));
    return rep.classification == Classification::Unknown ? kUnknown : kOk;
}

int cmd_iso(const std::string& mode, const std::vector<std::string>& srcs, long pad) {
    auto need = [&](std::size_t n) {
        if (srcs.size() != n)
            throw Error(ErrorKind::InvalidArgument, "mode " + mode + " takes " + std::to_string(n) + " spec(s)");
    };
    Verdict v;
    if (mode == "measure") {
        need(2);
        v = commensurate_isomorphic(load_spec(srcs[0]), load_spec(srcs[1]));
    } else if (mode == "inverse") {
        need(1);
        v = inverse_isomorphic(load_spec(srcs[0]));
    } else if (mode == "topo") {
        need(2);
        TopoSearchOptions opt;
        opt.horizon = G.horizon;
        opt.budget = G.budget;
        opt.witness.budget = G.budget;
        v = topo_iso_search(auto_pad(load_spec(srcs[0]), pad), auto_pad(load_spec(srcs[1]), pad), opt);
    } else if (mode == "topo-commensurate") {
        need(2);
        v = commensurate_topo_iso(load_spec(srcs[0]), load_spec(srcs[1]));
    } else if (mode == "topo-inverse") {
        need(1);
        v = topo_inverse_iso(auto_pad(load_spec(srcs[0]), pad), G.depth);
    } else {
        throw Error(ErrorKind::InvalidArgument, "unknown mode '" + mode + "'");
    }
    emit(to_json(v));
    return verdict_exit(v);
}

struct SimArgs {
    std::string spec, A, B, t = "0", c, tol;
    std::size_t k = 0, m = 8, n = 0;
    long f = -1;
    long level = -1;
    std::size_t sample = 0;
};

int cmd_corr(const SimArgs& a) {
    const auto spec = load_spec(a.spec);
    const IntSet A = parse_set(a.A), B = a.B.empty() ? A : parse_set(a.B);
    Tower tw(spec, a.m);
    const auto LA = cylinder_levels(spec, a.k, A, a.m, G.budget), LB = cylinder_levels(spec, a.k, B, a.m, G.budget);
    std::vector<CorrelationPoint> pts;
    for (const auto& t : parse_shifts(a.t)) pts.push_back(correlation_on(tw, LA, LB, t));
    if (G.format == "csv") {
        correlation_csv(pts, tw.total, nullptr);
    } else {
        json arr = json::array();
        for (const auto& p : pts) arr.push_back(correlation_json(p, tw.total));
        emit({{"points", arr}, {"k", a.k}, {"m", a.m}});
    }
    return kOk;
}

int cmd_rigidity(const SimArgs& a) {
    const auto spec = load_spec(a.spec);
    const IntSet A = parse_set(a.A);
    std::optional<Rat> tol;
    if (!a.tol.empty()) tol = Rat(a.tol);
    const auto scan = rigidity_scan(spec, a.k, A, parse_shifts(a.t), a.m, tol, G.budget);
    const Rat total = tower_total(spec);
    if (G.format == "csv") {
        std::vector<CorrelationPoint> pts;
        std::vector<int> flags;
        for (const auto& s : scan) {
            pts.push_back(s.point);
            flags.push_back(s.flagged);
        }
        correlation_csv(pts, total, &flags);
    } else {
        json arr = json::array();
        for (const auto& s : scan) {
            auto j = correlation_json(s.point, total);
            j["flagged"] = s.flagged;
            arr.push_back(j);
        }
        emit({{"points", arr}});
    }
    return kOk;
}

int cmd_weaklimit(const SimArgs& a) {
    const auto spec = load_spec(a.spec);
    const IntSet A = parse_set(a.A), B = a.B.empty() ? A : parse_set(a.B);
    const auto rep = weak_limit_check(spec, a.n, a.k, A, B, a.m, G.budget);
    const Rat total = tower_total(spec);
    json theta = json::object(), pts = json::array();
    for (const auto& [i, w] : rep.theta) theta[i.get_str()] = str(w);
    for (const auto& p : rep.points) pts.push_back(correlation_json(p, total));
    emit({{"r", rep.r}, {"theta", theta}, {"points", pts}, {"residual", str(rep.residual)}, {"bound", str(rep.bound)},
          {"holds", rep.holds}});
    return kOk;
}

int cmd_code(const SimArgs& a) {
    const auto spec = load_spec(a.spec);
    const auto ts = parse_shifts(a.t);
    const long lo = ts.front().get_si(), hi = ts.back().get_si();
    json words = json::array();
    auto word_for = [&](const Int& lvl) { return symbolic_code(spec, a.k, lvl, a.m, lo, hi, G.budget); };
    if (a.sample > 0) {
        std::mt19937_64 rng(G.seed);
        const auto h = heights(spec, a.m);
        for (std::size_t s = 0; s < a.sample; ++s) {
            std::uniform_int_distribution<long> F(0, to_i64(h[a.n]) - 1);
            const Int f = F(rng);
            std::vector<Int> c;
            for (std::size_t j = a.n + 1; j <= a.m; ++j) {
                const IntSet C = stage_C(spec.stage(j), h[j - 1]);
                c.push_back(C[std::uniform_int_distribution<std::size_t>(0, C.size() - 1)(rng)]);
            }
            const Int lvl = point_level(spec, a.n, f, c);
            words.push_back({{"f", to_json(f)}, {"c", to_json(IntSet(c))}, {"level", to_json(lvl)}, {"word", word_for(lvl)}});
        }
        emit({{"seed", G.seed}, {"codes", words}});
        return kOk;
    }
    Int lvl;
    if (a.level >= 0) {
        lvl = a.level;
    } else {
        if (a.f < 0) throw Error(ErrorKind::InvalidArgument, "give --level, --f/--c, or --sample");
        std::vector<Int> c;
        std::stringstream ss(a.c);
        std::string tok;
        while (std::getline(ss, tok, ','))
            if (!tok.empty()) c.emplace_back(tok);
        lvl = point_level(spec, a.n, a.f, c);
    }
    if (G.format == "json")
        emit({{"level", to_json(lvl)}, {"word", word_for(lvl)}});
    else
        std::cout << word_for(lvl) << "\n";
    return kOk;
}

struct TransformArgs {
    std::size_t stride = 0, growing = 0;
    std::string ks;
    bool allow_unit = false;
};

int cmd_transform(const std::string& which, const std::string& src, const TransformArgs& t) {
    const auto spec = load_spec(src);
    if (which == "telescope") {
        ParamSpec out;
        if (!t.ks.empty()) {
            std::vector<std::size_t> ks;
            for (const auto& k : parse_set(t.ks)) ks.push_back(k.get_ui());
            out = telescope(spec, ks);
        } else if (t.growing > 0) {
            out = unroll_growing(spec, t.growing);
        } else {
            out = telescope_stride(spec, t.stride ? t.stride : 2);
        }
        emit(to_json(out));
    } else if (which == "adapted") {
        emit(to_json(adapted_transform(spec, G.depth).spec));
    } else if (which == "expansive") {
        const auto res = expansive_transform(spec, t.allow_unit);
        if (G.format == "text") {
            json st = json::array();
            for (const auto& e : res.stages) st.push_back({{"n", e.n}, {"dropped", e.i}, {"r_star", e.r_star}});
            emit({{"spec", to_json(res.spec)}, {"stages", st}, {"drop_sum", str(res.drop_sum)}});
        } else {
            emit(to_json(res.spec));
        }
    } else if (which == "inverse") {
        json arr = json::array();
        for (const auto& st : inverse_params(spec, std::min(G.depth, spec.horizon())))
            arr.push_back({{"n", st.n}, {"C", to_json(st.C)}, {"C_star", to_json(st.Cstar)},
                           {"F_star", {to_json(st.Fstar_lo), to_json(st.Fstar_hi)}}});
        emit({{"stages", arr}});
    } else {
        throw Error(ErrorKind::InvalidArgument, "unknown transform '" + which + "'");
    }
    return kOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"rank-one (C,F) construction toolkit"};
    app.require_subcommand(1);
    app.fallthrough();
    app.add_option("--depth", G.depth, "stages to realize")->check(CLI::PositiveNumber);
    app.add_option("--horizon", G.horizon, "stages searched for conjugacies")->check(CLI::PositiveNumber);
    app.add_option("--budget", G.budget, "largest materialized set")->check(CLI::Range(std::uint64_t{1} << 10, std::uint64_t{1} << 40));
    app.add_option("--format", G.format, "json | csv | text")->check(CLI::IsMember({"json", "csv", "text"}));
    app.add_option("--seed", G.seed, "seed for samplers");
    app.add_flag("--normalize", G.normalize, "report measures as probabilities");

    std::string spec_src;
    auto* validate_cmd = app.add_subcommand("validate", "check conditions (I)-(III), measure, shift inclusion");
    validate_cmd->add_option("spec", spec_src)->required();

    auto* analyze_cmd = app.add_subcommand("analyze", "boundedness, rigidity, total ergodicity, classification");
    analyze_cmd->add_option("spec", spec_src)->required();

    std::string mode = "measure";
    std::vector<std::string> iso_specs;
    long pad = 0;
    auto* iso_cmd = app.add_subcommand("iso", "isomorphism verdicts");
    iso_cmd->add_option("--mode", mode)->check(CLI::IsMember({"measure", "topo", "inverse", "topo-commensurate", "topo-inverse"}));
    iso_cmd->add_option("--pad", pad, "levels added below and above each tower (topo modes)")->check(CLI::NonNegativeNumber);
    iso_cmd->add_option("specs", iso_specs)->required()->expected(1, 2);

    SimArgs sa;
    auto* sim_cmd = app.add_subcommand("simulate", "finite-tower computations");
    sim_cmd->require_subcommand(1);
    auto add_common = [&](CLI::App* c) {
        c->add_option("--spec", sa.spec)->required();
        c->add_option("--k", sa.k, "cylinder level");
        c->add_option("--m", sa.m, "tower depth");
    };
    auto* corr_cmd = sim_cmd->add_subcommand("corr", "correlation series");
    add_common(corr_cmd);
    corr_cmd->add_option("--A", sa.A)->required();
    corr_cmd->add_option("--B", sa.B);
    corr_cmd->add_option("--t", sa.t, "a..b or list");
    auto* rig_cmd = sim_cmd->add_subcommand("rigidity", "self-correlation scan");
    add_common(rig_cmd);
    rig_cmd->add_option("--A", sa.A)->required();
    rig_cmd->add_option("--t", sa.t, "a..b or list");
    rig_cmd->add_option("--tol", sa.tol, "p/q");
    auto* wl_cmd = sim_cmd->add_subcommand("weaklimit", "shift by -h_n against the spacer average");
    add_common(wl_cmd);
    wl_cmd->add_option("--n", sa.n)->required();
    wl_cmd->add_option("--A", sa.A)->required();
    wl_cmd->add_option("--B", sa.B);
    auto* code_cmd = sim_cmd->add_subcommand("code", "0/1 code of a point");
    add_common(code_cmd);
    code_cmd->add_option("--t", sa.t, "window a..b");
    code_cmd->add_option("--level", sa.level);
    code_cmd->add_option("--n", sa.n, "stage of --f");
    code_cmd->add_option("--f", sa.f);
    code_cmd->add_option("--c", sa.c, "coordinates c_{n+1},...,c_m");
    code_cmd->add_option("--sample", sa.sample, "sample this many points (seeded)");

    std::string which;
    TransformArgs ta;
    auto* tr_cmd = app.add_subcommand("transform", "telescope | adapted | expansive | inverse");
    tr_cmd->add_option("which", which)->required()->check(CLI::IsMember({"telescope", "adapted", "expansive", "inverse"}));
    tr_cmd->add_option("spec", spec_src)->required();
    tr_cmd->add_option("--stride", ta.stride);
    tr_cmd->add_option("--ks", ta.ks, "explicit cut indices");
    tr_cmd->add_option("--growing", ta.growing, "stage n merges n stages; this many output stages");
    tr_cmd->add_flag("--allow-unit-stages", ta.allow_unit);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kInput;
    }

    try {
        if (*validate_cmd) return cmd_validate(spec_src);
        if (*analyze_cmd) return cmd_analyze(spec_src);
        if (*iso_cmd) return cmd_iso(mode, iso_specs, pad);
        if (*tr_cmd) return cmd_transform(which, spec_src, ta);
        if (*corr_cmd) return cmd_corr(sa);
        if (*rig_cmd) return cmd_rigidity(sa);
        if (*wl_cmd) return cmd_weaklimit(sa);
        if (*code_cmd) return cmd_code(sa);
    } catch (const Error& e) {
        json err{{"error", kind_name(e.kind())}, {"message", e.what()}};
        std::cout << err.dump() << "\n";
        std::cerr << e.what() << "\n";
        return kInput;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kInput;
    }
    return kInput;
}

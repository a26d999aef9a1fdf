#pragma once

#include "params.hpp"
#include "verdict.hpp"

#include <fstream>
#include <sstream>
#include <string>

namespace rankone {

inline Int int_from_json(const json& j) {
    if (j.is_number_integer()) return Int(j.get<long>());
    if (j.is_string()) {
        Int v;
        if (v.set_str(j.get<std::string>(), 10) != 0) throw Error(ErrorKind::InvalidArgument, "not an integer: " + j.dump());
        return v;
    }
    throw Error(ErrorKind::InvalidArgument, "expected an integer, got " + j.dump());
}

inline SpacerMap stage_from_json(const json& j) {
    if (!j.is_object() || !j.contains("sigma")) throw Error(ErrorKind::InvalidArgument, "stage needs \"sigma\": " + j.dump());
    std::vector<Int> sig;
    for (const auto& v : j.at("sigma")) sig.push_back(int_from_json(v));
    if (j.contains("r") && int_from_json(j.at("r")) != static_cast<unsigned long>(sig.size()))
        throw Error(ErrorKind::InvalidArgument, "r does not match the length of sigma in " + j.dump());
    return SpacerMap(std::move(sig));
}

inline json to_json(const SpacerMap& m) {
    json sig = json::array();
    for (const auto& v : m.values()) sig.push_back(to_json(v));
    return {{"r", m.r()}, {"sigma", sig}};
}

inline json to_json(const ParamSpec& s) {
    json pre = json::array();
    for (const auto& m : s.prefix) pre.push_back(to_json(m));
    json cyc = nullptr;
    if (s.cycle) {
        cyc = json::array();
        for (const auto& m : *s.cycle) cyc.push_back(to_json(m));
    }
    return {{"h0", to_json(s.h0)}, {"prefix", pre}, {"cycle", cyc}};
}

// Keys sorted, no whitespace: byte-stable for round trips.
inline std::string canonical(const ParamSpec& s) { return to_json(s).dump(); }

inline ParamSpec spec_from_json(const json& j) {
    if (!j.is_object()) throw Error(ErrorKind::InvalidArgument, "spec must be a JSON object");
    ParamSpec s;
    if (j.contains("h0")) s.h0 = int_from_json(j.at("h0"));
    if (s.h0 < 1) throw Error(ErrorKind::InvalidArgument, "h0 must be >= 1");
    if (j.contains("prefix") && !j.at("prefix").is_null())
        for (const auto& st : j.at("prefix")) s.prefix.push_back(stage_from_json(st));
    if (j.contains("cycle") && !j.at("cycle").is_null()) {
        std::vector<SpacerMap> cyc;
        for (const auto& st : j.at("cycle")) cyc.push_back(stage_from_json(st));
        if (cyc.empty()) throw Error(ErrorKind::InvalidArgument, "cycle must be null or non-empty");
        s.cycle = std::move(cyc);
    }
    if (s.prefix.empty() && !s.cyclic()) throw Error(ErrorKind::InvalidArgument, "spec has no stages");
    return s;
}

inline std::optional<ParamSpec> builtin(const std::string& name) {
    if (name == "chacon2") return ParamSpec::chacon2();
    if (name == "chacon3") return ParamSpec::chacon3();
    if (name == "odometer") return ParamSpec::odometer(2);
    if (name.rfind("odometer:", 0) == 0) {
        const std::string b = name.substr(9);
        if (b.empty() || b.find_first_not_of("0123456789") != std::string::npos)
            throw Error(ErrorKind::InvalidArgument, "bad odometer base '" + b + "'");
        const unsigned long v = std::stoul(b);
        if (v < 2) throw Error(ErrorKind::InvalidArgument, "odometer base must be >= 2");
        return ParamSpec::odometer(v);
    }
    return std::nullopt;
}

// Builtin name, inline JSON object, or path to a JSON file.
inline ParamSpec load_spec(const std::string& src) {
    if (auto b = builtin(src)) return *b;
    std::string text;
    if (!src.empty() && src.front() == '{') {
        text = src;
    } else {
        std::ifstream in(src);
        if (!in) throw Error(ErrorKind::InvalidArgument, "unknown builtin or unreadable file '" + src + "'");
        std::stringstream ss;
        ss << in.rdbuf();
        text = ss.str();
    }
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw Error(ErrorKind::InvalidArgument, std::string("malformed JSON: ") + e.what());
    }
    return spec_from_json(j);
}

}  // namespace rankone

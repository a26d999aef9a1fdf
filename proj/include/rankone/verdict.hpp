#pragma once

#include "core.hpp"

#include <json.hpp>

#include <optional>
#include <string>

namespace rankone {

using json = nlohmann::json;

// Integers go out as JSON numbers while they fit, as decimal strings otherwise.
inline json to_json(const Int& x) {
    if (x.fits_slong_p()) return json(static_cast<long long>(x.get_si()));
    return json(x.get_str());
}
inline json to_json(const Rat& q) { return json(str(q)); }
inline json to_json(const IntSet& s) {
    json a = json::array();
    for (const auto& x : s) a.push_back(to_json(x));
    return a;
}

struct Verdict {
    enum class Value { Yes, No, Unknown };
    Value value = Value::Unknown;
    json certificate = json::object();
    std::optional<std::string> rider;

    static Verdict yes(json cert = json::object()) { return {Value::Yes, std::move(cert), std::nullopt}; }
    static Verdict no(json cert = json::object()) { return {Value::No, std::move(cert), std::nullopt}; }
    static Verdict unknown(json cert = json::object()) { return {Value::Unknown, std::move(cert), std::nullopt}; }

    bool is_yes() const { return value == Value::Yes; }
    bool is_no() const { return value == Value::No; }
    bool is_unknown() const { return value == Value::Unknown; }
};

inline const char* value_name(Verdict::Value v) {
    switch (v) {
        case Verdict::Value::Yes: return "yes";
        case Verdict::Value::No: return "no";
        case Verdict::Value::Unknown: return "unknown";
    }
    return "?";
}

inline json to_json(const Verdict& v) {
    json j;
    j["value"] = value_name(v.value);
    j["certificate"] = v.certificate;
    if (v.rider) j["rider"] = *v.rider;
    return j;
}

inline Verdict aperiodic_unknown(const std::string& what) {
    return Verdict::unknown({{"reason", "UnknownForAperiodicSpec"}, {"detail", what}});
}

}  // namespace rankone

#include "asap/sport_profile.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "asap/errors.hpp"

namespace asap {
namespace {

using nlohmann::json;

std::vector<std::string> lowercase_list(const json& arr, const std::string& path) {
    if (!arr.is_array()) throw SchemaError(path, "expected an array of strings");
    std::vector<std::string> out;
    for (std::size_t i = 0; i < arr.size(); ++i) {
        if (!arr[i].is_string()) throw SchemaError(path + "[" + std::to_string(i) + "]", "expected a string");
        std::string s = arr[i].get<std::string>();
        for (auto& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
        out.push_back(std::move(s));
    }
    return out;
}

SportProfile profile_from_json(const json& j, const std::string& path) {
    if (!j.is_object()) throw SchemaError(path, "expected an object");
    SportProfile p;
    if (!j.contains("sport") || !j["sport"].is_string()) throw SchemaError(path + ".sport", "missing sport id");
    p.sport = j["sport"].get<std::string>();

    const std::string grammar = j.value("state_grammar", "over-ball");
    if (grammar == "over-ball") {
        p.grammar = StateGrammar::over_ball;
    } else if (grammar == "clock") {
        p.grammar = StateGrammar::clock;
    } else {
        throw SchemaError(path + ".state_grammar", "unknown grammar \"" + grammar + "\"");
    }

    const std::string direction = j.value("clock_direction", "counts-down");
    if (direction == "counts-down") {
        p.clock_direction = ClockDirection::counts_down;
    } else if (direction == "counts-up") {
        p.clock_direction = ClockDirection::counts_up;
    } else {
        throw SchemaError(path + ".clock_direction", "unknown direction \"" + direction + "\"");
    }

    if (j.contains("taxonomy")) {
        for (const auto& label : j["taxonomy"]) p.taxonomy.push_back(label.get<std::string>());
    }
    if (j.contains("keywords")) {
        const auto& kw = j["keywords"];
        for (std::size_t i = 0; i < kw.size(); ++i) {
            const std::string kpath = path + ".keywords[" + std::to_string(i) + "]";
            if (!kw[i].contains("label")) throw SchemaError(kpath, "missing label");
            p.keywords.push_back({kw[i]["label"].get<std::string>(),
                                  lowercase_list(kw[i].value("triggers", json::array()), kpath + ".triggers")});
        }
    }
    if (j.contains("verification")) {
        const auto& v = j["verification"];
        const std::string mode = v.value("mode", "interval");
        if (mode == "interval") {
            p.verification = VerificationMode::interval;
        } else if (mode == "minute") {
            p.verification = VerificationMode::minute;
        } else {
            throw SchemaError(path + ".verification.mode", "unknown mode \"" + mode + "\"");
        }
        p.tolerance_s = v.value("tolerance_s", 1.0);
    }
    if (j.contains("gradual_step")) {
        p.max_step_balls = j["gradual_step"].value("max_balls", 12);
        p.clock_slack_s = j["gradual_step"].value("clock_slack_s", 60);
    }
    if (j.contains("token_aliases")) {
        for (const auto& [k, v] : j["token_aliases"].items()) {
            const auto target = v.get<std::string>();
            if (k.size() != 1 || target.size() != 1) {
                throw SchemaError(path + ".token_aliases", "aliases map single characters");
            }
            p.token_aliases[k[0]] = target[0];
        }
    }
    if (j.contains("timestamp_rules")) {
        const auto& r = j["timestamp_rules"];
        p.anchor_to_previous =
            lowercase_list(r.value("anchor_to_previous", json::array()), path + ".timestamp_rules.anchor_to_previous");
        p.low_confidence =
            lowercase_list(r.value("low_confidence", json::array()), path + ".timestamp_rules.low_confidence");
    }
    validate_profile(p);
    return p;
}

}  // namespace

void validate_profile(const SportProfile& profile) {
    std::set<std::string> seen;
    for (const auto& label : profile.taxonomy) {
        if (!seen.insert(label).second) {
            throw SchemaError(profile.sport + ".taxonomy", "duplicate label \"" + label + "\"");
        }
    }
    for (const auto& rule : profile.keywords) {
        if (!seen.contains(rule.label)) {
            throw SchemaError(profile.sport + ".keywords", "label \"" + rule.label + "\" not in taxonomy");
        }
    }
}

ProfileRegistry ProfileRegistry::from_json(std::string_view text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw SchemaError("$", e.what());
    }
    if (!doc.contains("profiles") || !doc["profiles"].is_array()) {
        throw SchemaError("$.profiles", "expected an array");
    }
    ProfileRegistry reg;
    for (std::size_t i = 0; i < doc["profiles"].size(); ++i) {
        auto p = profile_from_json(doc["profiles"][i], "$.profiles[" + std::to_string(i) + "]");
        const std::string name = p.sport;
        reg.profiles_.insert_or_assign(name, std::move(p));
    }
    return reg;
}

ProfileRegistry ProfileRegistry::from_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open profile table " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return from_json(ss.str());
}

const ProfileRegistry& ProfileRegistry::builtin() {
    static const ProfileRegistry reg = from_file(ASAP_PROFILES_PATH);
    return reg;
}

const SportProfile& ProfileRegistry::get(std::string_view sport) const {
    const auto it = profiles_.find(sport);
    if (it == profiles_.end()) throw Error("unknown sport profile \"" + std::string(sport) + "\"");
    return it->second;
}

bool ProfileRegistry::contains(std::string_view sport) const { return profiles_.find(sport) != profiles_.end(); }

std::vector<std::string> ProfileRegistry::names() const {
    std::vector<std::string> out;
    for (const auto& [name, _] : profiles_) out.push_back(name);
    return out;
}

}  // namespace asap

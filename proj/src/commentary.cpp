#include "asap/commentary.hpp"

#include <algorithm>
#include <cctype>

#include <json.hpp>

#include "asap/errors.hpp"

namespace asap {
namespace {

using nlohmann::json;

std::string lower(std::string_view text) {
    std::string out(text);
    std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) { return std::tolower(c); });
    return out;
}

bool contains_any(const std::string& haystack, const std::vector<std::string>& needles) {
    return std::any_of(needles.begin(), needles.end(),
                       [&](const std::string& n) { return !n.empty() && haystack.find(n) != std::string::npos; });
}

bool is_wide(const CommentaryEntry& e) { return e.event && std::holds_alternative<Wide>(*e.event); }

template <typename T>
std::optional<T> optional_field(const json& obj, const char* key, const std::string& path) {
    const auto it = obj.find(key);
    if (it == obj.end() || it->is_null()) return std::nullopt;
    try {
        return it->get<T>();
    } catch (const json::exception&) {
        throw SchemaError(path + "/" + key, "wrong type");
    }
}

CommentaryEntry parse_entry(const json& item, const std::string& path, const SportProfile& profile) {
    if (!item.is_object()) throw SchemaError(path, "entry must be an object");
    const auto state_text = optional_field<std::string>(item, "state", path);
    if (!state_text) throw SchemaError(path + "/state", "missing");

    CommentaryEntry entry;
    try {
        entry.state = parse_match_state(*state_text, profile);
    } catch (const ParseError& e) {
        throw SchemaError(path + "/state", e.what());
    }
    entry.text = optional_field<std::string>(item, "text", path).value_or("");

    if (const auto period = optional_field<int>(item, "period", path)) {
        auto* clock = std::get_if<GameClock>(&entry.state);
        if (!clock) throw SchemaError(path + "/period", "period given for an over-ball state");
        if (*period < 1) throw SchemaError(path + "/period", "must be positive");
        if (clock->period && *clock->period != *period) {
            throw SchemaError(path + "/period", "conflicts with the period in the state text");
        }
        clock->period = *period;
    }

    if (profile.is_cricket()) {
        const bool wide = optional_field<bool>(item, "wide", path).value_or(false);
        const bool out = optional_field<bool>(item, "out", path).value_or(false);
        const auto runs = optional_field<int>(item, "runs", path);
        if (runs && (*runs < 0 || *runs > 9)) throw SchemaError(path + "/runs", "must be in 0..9");
        if (wide) {
            entry.event = Wide{};
        } else if (out) {
            entry.event = Wicket{};
        } else if (runs) {
            entry.event = Runs{*runs};
        } else {
            throw SchemaError(path, "cricket entry needs runs, out or wide");
        }
    }
    return entry;
}

}  // namespace

const char* confidence_name(Confidence c) {
    switch (c) {
        case Confidence::normal: return "normal";
        case Confidence::adjusted: return "adjusted";
        case Confidence::low: return "low";
    }
    return "normal";
}

Confidence confidence_from_name(std::string_view name) {
    if (name == "normal") return Confidence::normal;
    if (name == "adjusted") return Confidence::adjusted;
    if (name == "low") return Confidence::low;
    throw ParseError("unknown confidence '" + std::string(name) + "'");
}

CommentaryDocument load_commentary(std::string_view document, const SportProfile& profile) {
    json root;
    try {
        root = json::parse(document);
    } catch (const json::parse_error& e) {
        throw SchemaError("", std::string("invalid JSON: ") + e.what());
    }
    if (!root.is_object()) throw SchemaError("", "document must be an object");

    CommentaryDocument doc;
    doc.sport = optional_field<std::string>(root, "sport", "").value_or(profile.sport);
    if (doc.sport != profile.sport) {
        throw SchemaError("/sport", "document is for '" + doc.sport + "', profile is '" + profile.sport + "'");
    }
    doc.match_id = optional_field<std::string>(root, "match_id", "").value_or("");

    const auto entries = root.find("entries");
    if (entries == root.end() || !entries->is_array()) throw SchemaError("/entries", "missing or not an array");
    for (std::size_t i = 0; i < entries->size(); ++i) {
        doc.entries.push_back(parse_entry((*entries)[i], "/entries/" + std::to_string(i), profile));
    }

    // Wides sort ahead of the legal delivery that shares their displayed state.
    std::stable_sort(doc.entries.begin(), doc.entries.end(), [](const CommentaryEntry& a, const CommentaryEntry& b) {
        const auto order = compare_states(a.state, b.state);
        if (order != 0) return order < 0;
        return is_wide(a) && !is_wide(b);
    });

    if (profile.is_cricket()) {
        for (std::size_t i = 1; i < doc.entries.size(); ++i) {
            const auto& prev = doc.entries[i - 1];
            if (prev.state == doc.entries[i].state && !is_wide(prev)) {
                throw DuplicateStateError("two deliveries keyed at " + format_state(prev.state));
            }
        }
    }
    return doc;
}

std::string dump_commentary(const CommentaryDocument& doc) {
    json root{{"sport", doc.sport}, {"match_id", doc.match_id}, {"entries", json::array()}};
    for (const auto& e : doc.entries) {
        json item{{"state", format_state(e.state)}};
        if (!e.text.empty()) item["text"] = e.text;
        if (e.event) {
            if (std::holds_alternative<Wide>(*e.event)) item["wide"] = true;
            if (std::holds_alternative<Wicket>(*e.event)) item["out"] = true;
            if (const auto* r = std::get_if<Runs>(&*e.event)) item["runs"] = r->n;
        }
        root["entries"].push_back(std::move(item));
    }
    return root.dump(2) + "\n";
}

std::optional<AtomicEvent> classify_event(std::string_view text, const SportProfile& profile) {
    const std::string haystack = lower(text);
    for (const auto& label : profile.taxonomy) {
        for (const auto& rule : profile.keywords) {
            if (rule.label == label && contains_any(haystack, rule.triggers)) return PlayLabel{label};
        }
    }
    return std::nullopt;
}

std::vector<CommentaryEntry> adjust_timestamps(std::vector<CommentaryEntry> entries, const SportProfile& profile) {
    for (std::size_t i = 0; i < entries.size(); ++i) {
        auto& e = entries[i];
        if (e.confidence != Confidence::normal) continue;
        const std::string text = lower(e.text);
        if (i > 0 && contains_any(text, profile.anchor_to_previous)) {
            e.state = entries[i - 1].state;
            e.confidence = Confidence::adjusted;
            continue;
        }
        const auto* label = e.event ? std::get_if<PlayLabel>(&*e.event) : nullptr;
        const bool flagged_label = label && std::find(profile.low_confidence.begin(), profile.low_confidence.end(),
                                                      label->name) != profile.low_confidence.end();
        if (flagged_label || contains_any(text, profile.low_confidence)) e.confidence = Confidence::low;
    }
    return entries;
}

}  // namespace asap

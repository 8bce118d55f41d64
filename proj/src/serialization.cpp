#include "asap/serialization.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "asap/errors.hpp"

namespace asap {
namespace {

using nlohmann::json;

template <typename Fn>
void for_each_line(std::string_view text, Fn&& fn) {
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos < text.size()) {
        const std::size_t nl = text.find('\n', pos);
        const std::string_view line = text.substr(pos, nl == std::string_view::npos ? text.size() - pos : nl - pos);
        pos = nl == std::string_view::npos ? text.size() : nl + 1;
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string_view::npos) continue;
        const std::string where = "line " + std::to_string(line_no);
        json j;
        try {
            j = json::parse(line);
            fn(j, where);
        } catch (const json::exception& e) {
            throw SchemaError(where, e.what());
        } catch (const ParseError& e) {
            throw SchemaError(where, e.what());
        }
    }
}

}  // namespace

std::string read_text_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot read " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_text_file(const std::filesystem::path& path, std::string_view text) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write " + path.string());
    out.write(text.data(), static_cast<std::streamsize>(text.size()));
    if (!out) throw IoError("write failed for " + path.string());
}

std::string intervals_to_jsonl(std::span<const StateInterval> intervals) {
    std::string out;
    for (const auto& iv : intervals) {
        out += json{{"state", format_state(iv.state)}, {"frame_start", iv.frame_start}, {"frame_end", iv.frame_end}}
                   .dump();
        out += '\n';
    }
    return out;
}

std::vector<StateInterval> intervals_from_jsonl(std::string_view text, const SportProfile& profile) {
    std::vector<StateInterval> out;
    for_each_line(text, [&](const json& j, const std::string&) {
        out.push_back({parse_match_state(j.at("state").get<std::string>(), profile),
                       j.at("frame_start").get<std::int64_t>(), j.at("frame_end").get<std::int64_t>()});
    });
    return out;
}

std::string aligned_to_jsonl(std::span<const AlignedEvent> events, double fps) {
    std::string out;
    for (const auto& e : events) {
        json j{{"event", event_label(e.event)},
               {"state", format_state(e.interval.state)},
               {"frame_start", e.interval.frame_start},
               {"frame_end", e.interval.frame_end},
               {"t_start_ms", event_start_ms(e.interval, fps)},
               {"t_end_ms", event_end_ms(e.interval, fps)},
               {"text", e.text ? json(*e.text) : json(nullptr)},
               {"confidence", confidence_name(e.confidence)}};
        out += j.dump();
        out += '\n';
    }
    return out;
}

std::vector<AlignedEvent> aligned_from_jsonl(std::string_view text, const SportProfile& profile) {
    std::vector<AlignedEvent> out;
    for_each_line(text, [&](const json& j, const std::string&) {
        AlignedEvent e{event_from_label(j.at("event").get<std::string>()),
                       {parse_match_state(j.at("state").get<std::string>(), profile),
                        j.at("frame_start").get<std::int64_t>(), j.at("frame_end").get<std::int64_t>()},
                       std::nullopt,
                       Confidence::normal};
        if (j.contains("text") && !j["text"].is_null()) e.text = j["text"].get<std::string>();
        if (j.contains("confidence")) e.confidence = confidence_from_name(j["confidence"].get<std::string>());
        out.push_back(std::move(e));
    });
    return out;
}

std::string marks_to_jsonl(std::span<const TimestampMark> marks) {
    std::string out;
    for (const auto& m : marks) {
        out += json{{"event", event_label(m.event)}, {"t_ms", m.timestamp_ms}}.dump();
        out += '\n';
    }
    return out;
}

std::vector<TimestampMark> marks_from_jsonl(std::string_view text) {
    std::vector<TimestampMark> out;
    for_each_line(text, [&](const json& j, const std::string&) {
        out.push_back({event_from_label(j.at("event").get<std::string>()), j.at("t_ms").get<std::int64_t>()});
    });
    return out;
}

std::string observations_to_csv(std::span<const RawObservation> observations) {
    std::string out = "frame,verdict,state\n";
    for (const auto& o : observations) {
        out += std::to_string(o.frame) + "," + verdict_name(o.verdict) + "," +
               (o.parsed ? format_state(*o.parsed) : std::string()) + "\n";
    }
    return out;
}

}  // namespace asap

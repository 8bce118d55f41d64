#include <cstdio>

#include "asap/aligner.hpp"

namespace asap {

std::string srt_timestamp(std::int64_t ms) {
    if (ms < 0) ms = 0;
    char buf[32];
    std::snprintf(buf, sizeof buf, "%02lld:%02lld:%02lld,%03lld", static_cast<long long>(ms / 3600000),
                  static_cast<long long>(ms / 60000 % 60), static_cast<long long>(ms / 1000 % 60),
                  static_cast<long long>(ms % 1000));
    return buf;
}

std::string to_srt(std::span<const AlignedEvent> events, double fps) {
    std::string out;
    for (std::size_t i = 0; i < events.size(); ++i) {
        const auto& e = events[i];
        out += std::to_string(i + 1) + "\n";
        out += srt_timestamp(event_start_ms(e.interval, fps)) + " --> " + srt_timestamp(event_end_ms(e.interval, fps)) +
               "\n";
        std::string line = event_label(e.event);
        if (e.text && !e.text->empty()) {
            std::string text = *e.text;
            // Cue text stays on one line.
            for (auto& c : text) {
                if (c == '\n' || c == '\r') c = ' ';
            }
            line += ": " + text;
        }
        out += line + "\n\n";
    }
    return out;
}

}  // namespace asap

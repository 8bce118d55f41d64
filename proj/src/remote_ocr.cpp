#include "asap/ocr.hpp"

#include <algorithm>
#include <cstdlib>
#include <semaphore>
#include <thread>

#include <httplib.h>
#include <json.hpp>

#include "asap/errors.hpp"
#include "asap/png_io.hpp"

namespace asap {
namespace {

constexpr char kAlphabet[] = "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789+/";

class HttplibTransport final : public HttpTransport {
public:
    explicit HttplibTransport(std::chrono::milliseconds timeout) : timeout_(timeout) {}

    HttpResponse post(const std::string& url, const std::string& body,
                      const std::map<std::string, std::string>& headers) override {
        const auto scheme_end = url.find("://");
        if (scheme_end == std::string::npos) throw ServiceError("endpoint is not an absolute URL: " + url);
        const auto path_start = url.find('/', scheme_end + 3);
        const std::string origin = url.substr(0, path_start);
        const std::string path = path_start == std::string::npos ? "/" : url.substr(path_start);

        httplib::Client client(origin);
        if (!client.is_valid()) throw ServiceError("unsupported endpoint " + origin);
        client.set_connection_timeout(timeout_);
        client.set_read_timeout(timeout_);
        client.set_write_timeout(timeout_);
        httplib::Headers h;
        for (const auto& [k, v] : headers) h.emplace(k, v);
        auto res = client.Post(path, h, body, "application/json");
        if (!res) throw TransportError("POST " + url + " failed: " + httplib::to_string(res.error()));
        return {res->status, res->body};
    }

private:
    std::chrono::milliseconds timeout_;
};

}  // namespace

std::string base64_encode(std::span<const std::uint8_t> bytes) {
    std::string out;
    out.reserve((bytes.size() + 2) / 3 * 4);
    std::size_t i = 0;
    for (; i + 2 < bytes.size(); i += 3) {
        const std::uint32_t v = (bytes[i] << 16) | (bytes[i + 1] << 8) | bytes[i + 2];
        out += kAlphabet[(v >> 18) & 63];
        out += kAlphabet[(v >> 12) & 63];
        out += kAlphabet[(v >> 6) & 63];
        out += kAlphabet[v & 63];
    }
    if (i + 1 == bytes.size()) {
        const std::uint32_t v = bytes[i] << 16;
        out += kAlphabet[(v >> 18) & 63];
        out += kAlphabet[(v >> 12) & 63];
        out += "==";
    } else if (i + 2 == bytes.size()) {
        const std::uint32_t v = (bytes[i] << 16) | (bytes[i + 1] << 8);
        out += kAlphabet[(v >> 18) & 63];
        out += kAlphabet[(v >> 12) & 63];
        out += kAlphabet[(v >> 6) & 63];
        out += '=';
    }
    return out;
}

std::vector<std::uint8_t> base64_decode(std::string_view text) {
    std::vector<std::uint8_t> out;
    std::uint32_t acc = 0;
    int bits = 0;
    for (char c : text) {
        if (c == '=') break;
        const char* p = std::find(std::begin(kAlphabet), std::end(kAlphabet) - 1, c);
        if (p == std::end(kAlphabet) - 1) {
            if (c == '\n' || c == '\r' || c == ' ') continue;
            throw ParseError("invalid base64 character");
        }
        acc = (acc << 6) | static_cast<std::uint32_t>(p - kAlphabet);
        bits += 6;
        if (bits >= 8) {
            bits -= 8;
            out.push_back(static_cast<std::uint8_t>((acc >> bits) & 0xff));
        }
    }
    return out;
}

std::string encode_ocr_request(const Raster& image) {
    nlohmann::json body;
    body["image"] = base64_encode(encode_png(image));
    return body.dump();
}

std::vector<TextBlock> parse_ocr_response(const std::string& body, int image_width, int image_height) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(body);
    } catch (const nlohmann::json::parse_error& e) {
        throw ServiceError(std::string("malformed OCR response: ") + e.what());
    }
    const nlohmann::json* list = &doc;
    if (doc.is_object() && doc.contains("blocks")) list = &doc["blocks"];
    if (!list->is_array()) throw ServiceError("OCR response is not a list of blocks");

    std::vector<TextBlock> blocks;
    for (const auto& item : *list) {
        if (!item.is_object() || !item.contains("text") || !item.contains("vertices")) {
            throw ServiceError("OCR block lacks text or vertices");
        }
        const std::string text = item["text"].get<std::string>();
        const auto& vertices = item["vertices"];
        if (text.empty() || !vertices.is_array() || vertices.empty()) continue;
        int x0 = image_width, y0 = image_height, x1 = 0, y1 = 0;
        for (const auto& v : vertices) {
            const int x = v.value("x", 0);
            const int y = v.value("y", 0);
            x0 = std::min(x0, x);
            y0 = std::min(y0, y);
            x1 = std::max(x1, x);
            y1 = std::max(y1, y);
        }
        // Clamp into the submitted image.
        x0 = std::clamp(x0, 0, image_width - 1);
        y0 = std::clamp(y0, 0, image_height - 1);
        x1 = std::clamp(x1, x0 + 1, image_width);
        y1 = std::clamp(y1, y0 + 1, image_height);
        blocks.push_back({text, {x0, y0, x1 - x0, y1 - y0}});
    }
    return blocks;
}

std::unique_ptr<HttpTransport> make_http_transport(std::chrono::milliseconds timeout) {
    return std::make_unique<HttplibTransport>(timeout);
}

struct RemoteRecognizer::Gate {
    explicit Gate(int n) : slots(n) {}
    std::counting_semaphore<> slots;
};

RemoteRecognizer::RemoteRecognizer(RemoteOcrConfig config, std::shared_ptr<HttpTransport> transport, Sleeper sleeper)
    : config_(std::move(config)), transport_(std::move(transport)), sleeper_(std::move(sleeper)) {
    if (config_.max_in_flight < 1) throw Error("max_in_flight must be >= 1");
    if (config_.max_attempts < 1) throw Error("max_attempts must be >= 1");
    if (!transport_) throw Error("remote OCR needs a transport");
    gate_ = std::make_unique<Gate>(config_.max_in_flight);
    if (!sleeper_) sleeper_ = [](std::chrono::milliseconds d) { std::this_thread::sleep_for(d); };
    if (!config_.api_key_env.empty()) {
        if (const char* key = std::getenv(config_.api_key_env.c_str())) api_key_ = key;
    }
}

RemoteRecognizer::~RemoteRecognizer() = default;

std::vector<TextBlock> RemoteRecognizer::recognize(const Raster& image) {
    if (image.size() == 0) throw Error("recognize needs a non-empty raster");
    const std::string body = encode_ocr_request(image);
    std::map<std::string, std::string> headers;
    if (!api_key_.empty()) headers["X-Api-Key"] = api_key_;

    std::chrono::milliseconds backoff = config_.initial_backoff;
    for (int attempt = 1;; ++attempt) {
        std::string failure;
        {
            gate_->slots.acquire();
            struct Release {
                Gate& g;
                ~Release() { g.slots.release(); }
            } release{*gate_};
            attempts_.fetch_add(1, std::memory_order_relaxed);
            try {
                const HttpResponse res = transport_->post(config_.endpoint, body, headers);
                if (res.status >= 200 && res.status < 300) {
                    return parse_ocr_response(res.body, static_cast<int>(image.cols()), static_cast<int>(image.rows()));
                }
                if (res.status == 429) throw QuotaError("OCR quota exhausted (HTTP 429)");
                if (res.status != 408 && res.status < 500) {
                    throw ServiceError("OCR service rejected request (HTTP " + std::to_string(res.status) + ")");
                }
                failure = "HTTP " + std::to_string(res.status);
            } catch (const TransportError& e) {
                failure = e.what();
            }
        }
        if (attempt >= config_.max_attempts) {
            throw TransportError("OCR request failed after " + std::to_string(attempt) + " attempts: " + failure);
        }
        sleeper_(backoff);
        backoff = std::min(backoff * 2, config_.max_backoff);
    }
}

}  // namespace asap

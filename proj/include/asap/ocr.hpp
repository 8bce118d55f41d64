#pragma once

#include <atomic>
#include <chrono>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "asap/raster.hpp"

namespace asap {

struct TextBlock {
    std::string text;
    Roi box;  // in the coordinates of the submitted image
    bool operator==(const TextBlock&) const = default;
};

// Geometry of a composite image holding many scorecard crops. Slot i sits at
// row i / columns, column i % columns; each cell is followed by `padding`
// blank pixels to the right and below.
struct StackLayout {
    int cell_width = 0;
    int cell_height = 0;
    int columns = 1;
    int rows = 1;
    int padding = 8;
    std::vector<std::int64_t> entries;  // slot -> source frame index

    int stride_x() const { return cell_width + padding; }
    int stride_y() const { return cell_height + padding; }
    Roi slot_box(std::size_t slot) const;
};

struct IndexedCrop {
    std::int64_t frame_index = 0;
    Raster pixels;
};

struct StackedImage {
    Raster composite;
    StackLayout layout;
};

/// Composites crops row-major into a columns-wide grid. Crops smaller than the
/// largest are zero-padded at the bottom/right of their cell.
StackedImage stack_crops(std::span<const IndexedCrop> crops, int columns, int padding = 8);

struct DestackResult {
    std::map<std::int64_t, std::string> texts;  // every stacked frame appears, possibly with ""
    int orphans = 0;                             // blocks centred in a gutter, dropped
};

/// Assigns each block to the slot containing its box centre and joins the texts
/// of a slot in reading order (top-to-bottom, then left-to-right) with one space.
DestackResult destack(std::span<const TextBlock> blocks, const StackLayout& layout);

class Recognizer {
public:
    virtual ~Recognizer() = default;
    /// Must be safe to call concurrently.
    virtual std::vector<TextBlock> recognize(const Raster& image) = 0;
};

struct MockOcrOptions {
    int scale = 2;                  // glyph pixel size the renderer used
    std::uint8_t ink_threshold = 128;
    double corruption_rate = 0.0;   // per digit: replace with a different digit
    std::uint64_t seed = 0;
};

// Exact template matcher for the synthetic bitmap font. Emits one block per
// horizontal glyph run; a single blank cell inside a run becomes a space.
class MockRecognizer final : public Recognizer {
public:
    explicit MockRecognizer(MockOcrOptions options = {});
    std::vector<TextBlock> recognize(const Raster& image) override;

private:
    MockOcrOptions options_;
};

// Decorator counting recognize calls; used to check the request economy.
class CountingRecognizer final : public Recognizer {
public:
    explicit CountingRecognizer(Recognizer& inner) : inner_(inner) {}
    std::vector<TextBlock> recognize(const Raster& image) override {
        calls_.fetch_add(1, std::memory_order_relaxed);
        return inner_.recognize(image);
    }
    long calls() const { return calls_.load(); }
    void reset() { calls_ = 0; }

private:
    Recognizer& inner_;
    std::atomic<long> calls_{0};
};

// ---- remote service ------------------------------------------------------

struct HttpResponse {
    int status = 0;
    std::string body;
};

class HttpTransport {
public:
    virtual ~HttpTransport() = default;
    /// Throws TransportError when no response was received.
    virtual HttpResponse post(const std::string& url, const std::string& body,
                              const std::map<std::string, std::string>& headers) = 0;
};

/// cpp-httplib backed transport; accepts http:// and https:// URLs.
std::unique_ptr<HttpTransport> make_http_transport(std::chrono::milliseconds timeout = std::chrono::seconds(30));

struct RemoteOcrConfig {
    std::string endpoint;
    std::string api_key_env = "ASAP_OCR_API_KEY";
    int max_in_flight = 4;
    int max_attempts = 4;
    std::chrono::milliseconds initial_backoff{200};
    std::chrono::milliseconds max_backoff{5000};
};

// Request body: {"image": "<base64 PNG>"}. Response: [{"text": ..., "vertices":
// [{"x":..,"y":..}, ...]}, ...] (an object with a "blocks" array is also accepted).
// Status mapping: 2xx ok; 408/5xx and transport failures retried with capped
// exponential backoff; 429 QuotaError; any other status ServiceError.
class RemoteRecognizer final : public Recognizer {
public:
    using Sleeper = std::function<void(std::chrono::milliseconds)>;

    RemoteRecognizer(RemoteOcrConfig config, std::shared_ptr<HttpTransport> transport, Sleeper sleeper = {});
    ~RemoteRecognizer() override;

    std::vector<TextBlock> recognize(const Raster& image) override;

    long attempts() const { return attempts_.load(); }

private:
    struct Gate;
    RemoteOcrConfig config_;
    std::shared_ptr<HttpTransport> transport_;
    Sleeper sleeper_;
    std::unique_ptr<Gate> gate_;
    std::string api_key_;
    std::atomic<long> attempts_{0};
};

std::string encode_ocr_request(const Raster& image);
std::vector<TextBlock> parse_ocr_response(const std::string& body, int image_width, int image_height);

std::string base64_encode(std::span<const std::uint8_t> bytes);
std::vector<std::uint8_t> base64_decode(std::string_view text);

}  // namespace asap

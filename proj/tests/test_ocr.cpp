#include <doctest.h>

#include <algorithm>
#include <atomic>
#include <mutex>
#include <numeric>
#include <random>
#include <thread>

#include "asap/errors.hpp"
#include "asap/glyph_font.hpp"
#include "asap/ocr.hpp"
#include "asap/png_io.hpp"
#include "asap/raster.hpp"

// After Eigen: resolv.h (pulled in by httplib) defines a _res macro.
#include <httplib.h>
#include <json.hpp>

using namespace asap;

namespace {

constexpr int kScale = 2;

// A dark crop with `text` drawn at a fixed inset.
Raster text_crop(const std::string& text, int width = 64, int height = 24) {
    Raster r = Raster::Constant(height, width, 20);
    font::draw_text(r, text, 4, 4, kScale, 220);
    return r;
}

Raster random_raster(std::mt19937_64& rng, int h, int w) {
    std::uniform_int_distribution<int> px(0, 255);
    Raster r(h, w);
    for (Eigen::Index i = 0; i < r.size(); ++i) r.data()[i] = static_cast<std::uint8_t>(px(rng));
    return r;
}

// Composite built pixel by pixel from the documented grid geometry.
Raster hand_composite(const std::vector<Raster>& crops, int columns, int padding) {
    int cw = 0, ch = 0;
    for (const auto& c : crops) {
        cw = std::max(cw, static_cast<int>(c.cols()));
        ch = std::max(ch, static_cast<int>(c.rows()));
    }
    const int n = static_cast<int>(crops.size());
    const int rows = (n + columns - 1) / columns;
    Raster out(rows * (ch + padding), columns * (cw + padding));
    for (int y = 0; y < out.rows(); ++y) {
        for (int x = 0; x < out.cols(); ++x) {
            const int col = x / (cw + padding), row = y / (ch + padding);
            const int lx = x % (cw + padding), ly = y % (ch + padding);
            const int slot = row * columns + col;
            std::uint8_t v = 0;
            if (slot < n && lx < crops[slot].cols() && ly < crops[slot].rows()) v = crops[slot](ly, lx);
            out(y, x) = v;
        }
    }
    return out;
}

std::vector<IndexedCrop> indexed(const std::vector<Raster>& crops, std::int64_t first = 100) {
    std::vector<IndexedCrop> out;
    for (std::size_t i = 0; i < crops.size(); ++i) out.push_back({first + static_cast<std::int64_t>(i), crops[i]});
    return out;
}

}  // namespace

TEST_CASE("mean_l1 examples") {
    Raster a = Raster::Constant(3, 5, 77);
    CHECK(mean_l1(a, a) == 0.0);
    CHECK(mean_l1(Raster::Zero(4, 7), Raster::Constant(4, 7, 255)) == 255.0);
    Raster x(2, 2), y(2, 2);
    x << 0, 10, 20, 30;
    y << 10, 10, 10, 10;
    CHECK(mean_l1(x, y) == 10.0);
    CHECK_THROWS_AS(mean_l1(Raster::Zero(2, 2), Raster::Zero(2, 3)), DimensionMismatchError);
}

TEST_CASE("resize_area averages source blocks") {
    Raster src(4, 4);
    src << 0, 0, 100, 100,  //
        0, 0, 100, 100,     //
        50, 50, 255, 255,   //
        50, 51, 255, 255;
    const Raster half = resize_area(src, 2, 2);
    CHECK(half(0, 0) == 0);
    CHECK(half(0, 1) == 100);
    CHECK(half(1, 0) == 50);  // 201 / 4 = 50.25
    CHECK(half(1, 1) == 255);
    const Raster same = resize_area(src, 4, 4);
    CHECK(same == src);
}

TEST_CASE("png round-trip") {
    std::mt19937_64 rng(5);
    const Raster r = random_raster(rng, 17, 23);
    CHECK(decode_png(encode_png(r)) == r);
}

TEST_CASE("iou and expand") {
    CHECK(iou({0, 0, 10, 10}, {0, 0, 10, 10}) == 1.0);
    CHECK(iou({0, 0, 10, 10}, {20, 20, 5, 5}) == 0.0);
    CHECK(iou({0, 0, 10, 10}, {5, 0, 10, 10}) == doctest::Approx(50.0 / 150.0));
    CHECK(expand({2, 2, 4, 4}, 4, 100, 100) == Roi{0, 0, 10, 10});
}

TEST_CASE("stack_crops matches a hand-assembled composite") {
    std::mt19937_64 rng(11);
    SUBCASE("one crop, four columns") {
        const std::vector<Raster> crops{random_raster(rng, 12, 30)};
        const auto stacked = stack_crops(indexed(crops), 4);
        CHECK(stacked.layout.rows == 1);
        CHECK(stacked.composite.block(0, 0, 12, 30) == crops[0]);
        CHECK(stacked.composite == hand_composite(crops, 4, 8));
    }
    SUBCASE("sixteen crops, four columns") {
        std::vector<Raster> crops;
        for (int i = 0; i < 16; ++i) crops.push_back(random_raster(rng, 12, 30));
        const auto stacked = stack_crops(indexed(crops), 4);
        CHECK(stacked.layout.rows == 4);
        CHECK(stacked.composite == hand_composite(crops, 4, 8));
        for (int i = 0; i < 16; ++i) CHECK(stacked.layout.entries[i] == 100 + i);
    }
    SUBCASE("five crops, four columns") {
        std::vector<Raster> crops;
        for (int i = 0; i < 5; ++i) crops.push_back(random_raster(rng, 12, 30));
        const auto stacked = stack_crops(indexed(crops), 4);
        CHECK(stacked.layout.rows == 2);
        CHECK(stacked.composite == hand_composite(crops, 4, 8));
        for (int slot = 5; slot < 8; ++slot) {
            const Roi b = stacked.layout.slot_box(slot);
            CHECK(stacked.composite.block(b.y, b.x, b.h, b.w).cast<int>().sum() == 0);
        }
    }
    SUBCASE("mixed sizes pad bottom and right") {
        const std::vector<Raster> crops{random_raster(rng, 10, 20), random_raster(rng, 14, 12),
                                        random_raster(rng, 9, 25)};
        const auto stacked = stack_crops(indexed(crops), 2, 3);
        CHECK(stacked.composite == hand_composite(crops, 2, 3));
    }
}

TEST_CASE("destack examples") {
    StackLayout layout;
    layout.cell_width = 40;
    layout.cell_height = 20;
    layout.columns = 2;
    layout.rows = 2;
    layout.padding = 8;
    layout.entries = {10, 11, 12, 13};

    SUBCASE("one block in slot 0") {
        const std::vector<TextBlock> blocks{{"30.4", {2, 2, 30, 14}}};
        const auto r = destack(blocks, layout);
        CHECK(r.texts.at(10) == "30.4");
        CHECK(r.texts.at(11).empty());
        CHECK(r.texts.size() == 4);
        CHECK(r.orphans == 0);
    }
    SUBCASE("two blocks in slot 3 join top-first") {
        const Roi cell = layout.slot_box(3);
        const std::vector<TextBlock> blocks{{"lower", {cell.x + 1, cell.y + 11, 20, 6}},
                                            {"upper", {cell.x + 5, cell.y + 1, 20, 6}}};
        const auto r = destack(blocks, layout);
        CHECK(r.texts.at(13) == "upper lower");
    }
    SUBCASE("same line joins left-first") {
        const std::vector<TextBlock> blocks{{"B", {20, 2, 6, 10}}, {"A", {2, 2, 6, 10}}};
        CHECK(destack(blocks, layout).texts.at(10) == "A B");
    }
    SUBCASE("block centred in the gutter is an orphan") {
        // Centre x = 44, inside the 40..47 gutter between columns.
        const std::vector<TextBlock> blocks{{"x", {42, 2, 4, 10}}};
        const auto r = destack(blocks, layout);
        CHECK(r.orphans == 1);
        for (const auto& [frame, text] : r.texts) CHECK(text.empty());
    }
    SUBCASE("centre on the last cell pixel still belongs to the cell") {
        const std::vector<TextBlock> blocks{{"edge", {38, 0, 3, 4}}};  // centre x = 39.5
        const auto r = destack(blocks, layout);
        CHECK(r.orphans == 0);
        CHECK(r.texts.at(10) == "edge");
    }
}

TEST_CASE("mock OCR") {
    MockRecognizer mock;
    CHECK(mock.recognize(Raster::Zero(30, 80)).empty());

    Raster canvas = Raster::Constant(30, 80, 30);
    font::draw_text(canvas, "30.4", 7, 5, kScale, 210);
    const auto blocks = mock.recognize(canvas);
    REQUIRE(blocks.size() == 1);
    CHECK(blocks[0].text == "30.4");
    CHECK(blocks[0].box == Roi{7, 5, font::text_width("30.4", kScale), font::text_height(kScale)});

    Raster spaced = Raster::Constant(30, 200, 30);
    font::draw_text(spaced, "OV 30.4", 4, 4, kScale, 210);
    font::draw_text(spaced, "LIVE", 120, 4, kScale, 210);
    const auto two = mock.recognize(spaced);
    REQUIRE(two.size() == 2);
    CHECK(two[0].text == "OV 30.4");
    CHECK(two[1].text == "LIVE");
}

TEST_CASE("stacked 2-crop composite round-trips through mock OCR") {
    MockRecognizer mock;
    const std::vector<Raster> crops{text_crop("30.4"), text_crop("30.5")};
    const auto stacked = stack_crops(indexed(crops, 0), 1);
    const auto r = destack(mock.recognize(stacked.composite), stacked.layout);
    CHECK(r.texts.at(0) == "30.4");
    CHECK(r.texts.at(1) == "30.5");
}

TEST_CASE("destack(recognize(stack)) recovers texts for any permutation") {
    MockRecognizer mock;
    std::mt19937_64 rng(42);
    std::uniform_int_distribution<int> over(0, 99), ball(1, 6), cols(1, 4), count(1, 16);
    for (int trial = 0; trial < 40; ++trial) {
        const int columns = cols(rng);
        const int n = count(rng);
        std::vector<std::string> texts;
        std::vector<IndexedCrop> crops;
        for (int i = 0; i < n; ++i) {
            texts.push_back(std::to_string(over(rng)) + "." + std::to_string(ball(rng)));
            crops.push_back({static_cast<std::int64_t>(i), text_crop(texts.back())});
        }
        std::vector<std::size_t> order(n);
        std::iota(order.begin(), order.end(), 0);
        std::shuffle(order.begin(), order.end(), rng);
        std::vector<IndexedCrop> permuted;
        for (auto i : order) permuted.push_back(crops[i]);
        const auto stacked = stack_crops(permuted, columns);
        const auto r = destack(mock.recognize(stacked.composite), stacked.layout);
        CHECK(r.orphans == 0);
        for (int i = 0; i < n; ++i) CHECK(r.texts.at(i) == texts[i]);
    }
}

TEST_CASE("mock corruption replaces digits with different digits") {
    const Raster crop = text_crop("12.34", 80);
    MockRecognizer always({kScale, 128, 1.0, 3});
    const auto blocks = always.recognize(crop);
    REQUIRE(blocks.size() == 1);
    const std::string clean = "12.34";
    REQUIRE(blocks[0].text.size() == clean.size());
    for (std::size_t i = 0; i < clean.size(); ++i) {
        if (clean[i] == '.') {
            CHECK(blocks[0].text[i] == '.');
        } else {
            CHECK(blocks[0].text[i] != clean[i]);
            CHECK(std::isdigit(static_cast<unsigned char>(blocks[0].text[i])));
        }
    }
    // Deterministic per image and seed.
    CHECK(always.recognize(crop) == blocks);
    MockRecognizer never({kScale, 128, 0.0, 3});
    CHECK(never.recognize(crop)[0].text == clean);
}

TEST_CASE("base64") {
    const std::string s = "any carnal pleasure.";
    for (std::size_t len = 0; len <= s.size(); ++len) {
        std::vector<std::uint8_t> bytes(s.begin(), s.begin() + static_cast<long>(len));
        CHECK(base64_decode(base64_encode(bytes)) == bytes);
    }
    const std::vector<std::uint8_t> man{'M', 'a', 'n'};
    CHECK(base64_encode(man) == "TWFu");
    const std::vector<std::uint8_t> ma{'M', 'a'};
    CHECK(base64_encode(ma) == "TWE=");
}

TEST_CASE("parse_ocr_response") {
    const std::string body = R"([{"text":"30.4","vertices":[{"x":2,"y":3},{"x":12,"y":3},{"x":12,"y":9},{"x":2,"y":9}]},
                                 {"text":"","vertices":[{"x":0,"y":0}]}])";
    const auto blocks = parse_ocr_response(body, 40, 20);
    REQUIRE(blocks.size() == 1);
    CHECK(blocks[0] == TextBlock{"30.4", {2, 3, 10, 6}});
    CHECK(parse_ocr_response(R"({"blocks":[]})", 4, 4).empty());
    CHECK_THROWS_AS(parse_ocr_response("not json", 4, 4), ServiceError);
}

namespace {

// Scripted transport: answers with the queued statuses, then 200 forever.
class FakeTransport final : public HttpTransport {
public:
    std::vector<int> statuses;
    std::vector<bool> drop;  // throw TransportError instead of answering
    std::atomic<int> in_flight{0};
    std::atomic<int> peak{0};
    std::atomic<int> calls{0};
    std::chrono::milliseconds hold{0};
    std::map<std::string, std::string> last_headers;
    std::mutex mu;

    HttpResponse post(const std::string&, const std::string& body,
                      const std::map<std::string, std::string>& headers) override {
        const int now = ++in_flight;
        int seen = peak.load();
        while (now > seen && !peak.compare_exchange_weak(seen, now)) {
        }
        const int i = calls++;
        {
            std::lock_guard lock(mu);
            last_headers = headers;
        }
        if (hold.count() > 0) std::this_thread::sleep_for(hold);
        --in_flight;
        if (i < static_cast<int>(drop.size()) && drop[i]) throw TransportError("connection reset");
        const int status = i < static_cast<int>(statuses.size()) ? statuses[i] : 200;
        // Echo the decoded image size back as one block.
        const auto png = base64_decode(nlohmann::json::parse(body).at("image").get<std::string>());
        const Raster r = decode_png(png);
        nlohmann::json block{{"text", "ok"},
                             {"vertices", {{{"x", 0}, {"y", 0}}, {{"x", r.cols()}, {"y", r.rows()}}}}};
        return {status, nlohmann::json::array({block}).dump()};
    }
};

RemoteOcrConfig fast_config() {
    RemoteOcrConfig c;
    c.endpoint = "http://ocr.invalid/v1/recognize";
    c.api_key_env = "";
    c.initial_backoff = std::chrono::milliseconds(100);
    c.max_backoff = std::chrono::milliseconds(300);
    return c;
}

}  // namespace

TEST_CASE("remote recognizer retries with capped exponential backoff") {
    auto transport = std::make_shared<FakeTransport>();
    transport->statuses = {503, 500, 408};
    transport->drop = {false, false, false};
    std::vector<long> sleeps;
    RemoteRecognizer remote(fast_config(), transport, [&](std::chrono::milliseconds d) { sleeps.push_back(d.count()); });
    const auto blocks = remote.recognize(Raster::Zero(6, 9));
    REQUIRE(blocks.size() == 1);
    CHECK(blocks[0].box == Roi{0, 0, 9, 6});
    CHECK(remote.attempts() == 4);
    CHECK(sleeps == std::vector<long>{100, 200, 300});
}

TEST_CASE("remote recognizer status mapping") {
    auto sleeper = [](std::chrono::milliseconds) {};
    SUBCASE("transport failures exhaust attempts") {
        auto transport = std::make_shared<FakeTransport>();
        transport->drop = {true, true, true, true, true};
        RemoteRecognizer remote(fast_config(), transport, sleeper);
        CHECK_THROWS_AS(remote.recognize(Raster::Zero(4, 4)), TransportError);
        CHECK(transport->calls == 4);
    }
    SUBCASE("429 is a quota error, not retried") {
        auto transport = std::make_shared<FakeTransport>();
        transport->statuses = {429};
        RemoteRecognizer remote(fast_config(), transport, sleeper);
        CHECK_THROWS_AS(remote.recognize(Raster::Zero(4, 4)), QuotaError);
        CHECK(transport->calls == 1);
    }
    SUBCASE("other 4xx is a service error") {
        auto transport = std::make_shared<FakeTransport>();
        transport->statuses = {403};
        RemoteRecognizer remote(fast_config(), transport, sleeper);
        CHECK_THROWS_AS(remote.recognize(Raster::Zero(4, 4)), ServiceError);
        CHECK(transport->calls == 1);
    }
    SUBCASE("empty raster") {
        auto transport = std::make_shared<FakeTransport>();
        RemoteRecognizer remote(fast_config(), transport, sleeper);
        CHECK_THROWS_AS(remote.recognize(Raster()), Error);
    }
}

TEST_CASE("remote recognizer sends the API key from the environment") {
    ::setenv("ASAP_TEST_OCR_KEY", "sekret", 1);
    auto transport = std::make_shared<FakeTransport>();
    auto cfg = fast_config();
    cfg.api_key_env = "ASAP_TEST_OCR_KEY";
    RemoteRecognizer remote(cfg, transport);
    remote.recognize(Raster::Zero(3, 3));
    CHECK(transport->last_headers.at("X-Api-Key") == "sekret");
}

TEST_CASE("remote recognizer never exceeds its in-flight cap") {
    auto transport = std::make_shared<FakeTransport>();
    transport->hold = std::chrono::milliseconds(5);
    auto cfg = fast_config();
    cfg.max_in_flight = 3;
    RemoteRecognizer remote(cfg, transport);
    std::vector<std::thread> threads;
    for (int t = 0; t < 8; ++t) {
        threads.emplace_back([&] {
            for (int i = 0; i < 5; ++i) remote.recognize(Raster::Zero(4, 4));
        });
    }
    for (auto& t : threads) t.join();
    CHECK(transport->calls == 40);
    CHECK(transport->peak <= 3);
    CHECK(transport->peak >= 2);
}

TEST_CASE("remote recognizer over real HTTP") {
    httplib::Server server;
    std::atomic<int> hits{0};
    std::string seen_key;
    server.Post("/v1/recognize", [&](const httplib::Request& req, httplib::Response& res) {
        if (hits++ == 0) {
            res.status = 503;
            return;
        }
        seen_key = req.get_header_value("X-Api-Key");
        const auto png = base64_decode(nlohmann::json::parse(req.body).at("image").get<std::string>());
        const Raster r = decode_png(png);
        MockRecognizer mock;
        nlohmann::json out = nlohmann::json::array();
        for (const auto& b : mock.recognize(r)) {
            out.push_back({{"text", b.text},
                           {"vertices", {{{"x", b.box.x}, {"y", b.box.y}}, {{"x", b.box.x + b.box.w}, {"y", b.box.y + b.box.h}}}}});
        }
        res.set_content(out.dump(), "application/json");
    });
    const int port = server.bind_to_any_port("127.0.0.1");
    REQUIRE(port > 0);
    std::thread listener([&] { server.listen_after_bind(); });
    server.wait_until_ready();

    ::setenv("ASAP_TEST_OCR_KEY2", "k2", 1);
    RemoteOcrConfig cfg;
    cfg.endpoint = "http://127.0.0.1:" + std::to_string(port) + "/v1/recognize";
    cfg.api_key_env = "ASAP_TEST_OCR_KEY2";
    cfg.initial_backoff = std::chrono::milliseconds(1);
    RemoteRecognizer remote(cfg, std::shared_ptr<HttpTransport>(make_http_transport(std::chrono::seconds(5))));
    const auto blocks = remote.recognize(text_crop("30.4"));
    server.stop();
    listener.join();

    REQUIRE(blocks.size() == 1);
    CHECK(blocks[0].text == "30.4");
    CHECK(blocks[0].box == Roi{4, 4, font::text_width("30.4", kScale), font::text_height(kScale)});
    CHECK(hits == 2);
    CHECK(seen_key == "k2");
}

TEST_CASE("unreachable endpoint is a transport error") {
    RemoteOcrConfig cfg;
    cfg.endpoint = "http://127.0.0.1:1/v1/recognize";
    cfg.api_key_env = "";
    cfg.max_attempts = 2;
    RemoteRecognizer remote(cfg, std::shared_ptr<HttpTransport>(make_http_transport(std::chrono::milliseconds(500))),
                            [](std::chrono::milliseconds) {});
    CHECK_THROWS_AS(remote.recognize(Raster::Zero(4, 4)), TransportError);
}

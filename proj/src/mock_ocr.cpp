#include "asap/ocr.hpp"

#include <algorithm>
#include <unordered_map>

#include "asap/glyph_font.hpp"

namespace asap {
namespace {

std::uint64_t splitmix(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

std::uint64_t content_hash(const Raster& image) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    const auto* p = image.data();
    for (Eigen::Index i = 0; i < image.size(); ++i) {
        h ^= p[i];
        h *= 0x100000001b3ULL;
    }
    return h ^ (static_cast<std::uint64_t>(image.rows()) << 32) ^ static_cast<std::uint64_t>(image.cols());
}

struct Hit {
    int x;
    int y;
    char symbol;
};

}  // namespace

MockRecognizer::MockRecognizer(MockOcrOptions options) : options_(options) {}

std::vector<TextBlock> MockRecognizer::recognize(const Raster& image) {
    const int s = options_.scale;
    const int H = static_cast<int>(image.rows());
    const int W = static_cast<int>(image.cols());
    const int gw = font::kGlyphWidth * s;
    const int gh = font::kGlyphHeight * s;
    if (H < gh || W < gw) return {};

    // Integral image of the binarized raster.
    Image<std::int32_t> sat = Image<std::int32_t>::Zero(H + 1, W + 1);
    for (int y = 0; y < H; ++y) {
        std::int32_t row = 0;
        for (int x = 0; x < W; ++x) {
            row += image(y, x) >= options_.ink_threshold ? 1 : 0;
            sat(y + 1, x + 1) = sat(y, x + 1) + row;
        }
    }
    const auto ink_in = [&](int x0, int y0, int w, int h) {
        const int x1 = std::min(W, x0 + w);
        const int y1 = std::min(H, y0 + h);
        x0 = std::max(0, x0);
        y0 = std::max(0, y0);
        if (x1 <= x0 || y1 <= y0) return 0;
        return sat(y1, x1) - sat(y0, x1) - sat(y1, x0) + sat(y0, x0);
    };

    std::unordered_map<std::uint64_t, char> by_signature;
    std::vector<int> ink_counts;
    for (const auto& g : font::glyphs()) {
        by_signature.emplace(font::signature(g), g.symbol);
        ink_counts.push_back(font::ink_count(g) * s * s);
    }
    std::sort(ink_counts.begin(), ink_counts.end());

    std::vector<Hit> hits;
    for (int y = 0; y + gh <= H; ++y) {
        for (int x = 0; x + gw <= W; ++x) {
            const int inside = ink_in(x, y, gw, gh);
            if (inside == 0 || !std::binary_search(ink_counts.begin(), ink_counts.end(), inside)) continue;
            // The one-pixel ring around the cell must be blank.
            if (ink_in(x - 1, y - 1, gw + 2, gh + 2) != inside) continue;
            std::uint64_t sig = 0;
            bool uniform = true;
            for (int r = 0; r < font::kGlyphHeight && uniform; ++r) {
                for (int c = 0; c < font::kGlyphWidth; ++c) {
                    const int n = ink_in(x + c * s, y + r * s, s, s);
                    if (n != 0 && n != s * s) {
                        uniform = false;
                        break;
                    }
                    sig = (sig << 1) | (n ? 1u : 0u);
                }
            }
            if (!uniform) continue;
            const auto it = by_signature.find(sig);
            if (it != by_signature.end()) hits.push_back({x, y, it->second});
        }
    }

    std::sort(hits.begin(), hits.end(), [](const Hit& a, const Hit& b) {
        return a.y != b.y ? a.y < b.y : a.x < b.x;
    });

    const std::uint64_t image_hash = options_.corruption_rate > 0.0 ? content_hash(image) : 0;
    const int advance = font::kAdvance * s;

    std::vector<TextBlock> blocks;
    int run_y = -1;
    int run_x0 = 0;
    int run_last = 0;
    std::string text;
    const auto close_run = [&] {
        if (!text.empty()) blocks.push_back({text, {run_x0, run_y, run_last + gw - run_x0, gh}});
        text.clear();
    };
    for (const auto& h : hits) {
        char symbol = h.symbol;
        if (options_.corruption_rate > 0.0 && symbol >= '0' && symbol <= '9') {
            const std::uint64_t k = splitmix(options_.seed ^ splitmix(image_hash ^ splitmix(
                                                 (static_cast<std::uint64_t>(h.y) << 32) | static_cast<std::uint32_t>(h.x))));
            const double u = static_cast<double>(k >> 11) * 0x1.0p-53;
            if (u < options_.corruption_rate) {
                const int shift = 1 + static_cast<int>(splitmix(k) % 9);
                symbol = static_cast<char>('0' + (symbol - '0' + shift) % 10);
            }
        }
        const bool continues = !text.empty() && h.y == run_y &&
                               (h.x == run_last + advance || h.x == run_last + 2 * advance);
        if (continues) {
            if (h.x == run_last + 2 * advance) text += ' ';
        } else {
            close_run();
            run_y = h.y;
            run_x0 = h.x;
        }
        text += symbol;
        run_last = h.x;
    }
    close_run();
    return blocks;
}

}  // namespace asap

#include "asap/glyph_font.hpp"

#include <algorithm>
#include <cctype>

namespace asap::font {
namespace {

constexpr std::uint8_t row(const char (&bits)[6]) {
    std::uint8_t v = 0;
    for (int i = 0; i < 5; ++i) v = static_cast<std::uint8_t>((v << 1) | (bits[i] == '1' ? 1 : 0));
    return v;
}

#define G(c, r0, r1, r2, r3, r4, r5, r6) \
    Glyph { c, { row(r0), row(r1), row(r2), row(r3), row(r4), row(r5), row(r6) } }

const std::array kGlyphs = {
    G('0', "01110", "10001", "10011", "10101", "11001", "10001", "01110"),
    G('1', "00100", "01100", "00100", "00100", "00100", "00100", "01110"),
    G('2', "01110", "10001", "00001", "00010", "00100", "01000", "11111"),
    G('3', "11111", "00010", "00100", "00010", "00001", "10001", "01110"),
    G('4', "00010", "00110", "01010", "10010", "11111", "00010", "00010"),
    G('5', "11111", "10000", "11110", "00001", "00001", "10001", "01110"),
    G('6', "00110", "01000", "10000", "11110", "10001", "10001", "01110"),
    G('7', "11111", "00001", "00010", "00100", "01000", "01000", "01000"),
    G('8', "01110", "10001", "10001", "01110", "10001", "10001", "01110"),
    G('9', "01110", "10001", "10001", "01111", "00001", "00010", "01100"),
    G('.', "00000", "00000", "00000", "00000", "00000", "01100", "01100"),
    G(':', "00000", "01100", "01100", "00000", "01100", "01100", "00000"),
    G('/', "00000", "00001", "00010", "00100", "01000", "10000", "00000"),
    G('-', "00000", "00000", "00000", "11111", "00000", "00000", "00000"),
    G('A', "01110", "10001", "10001", "11111", "10001", "10001", "10001"),
    G('B', "11110", "10001", "10001", "11110", "10001", "10001", "11110"),
    G('C', "01110", "10001", "10000", "10000", "10000", "10001", "01110"),
    G('D', "11100", "10010", "10001", "10001", "10001", "10010", "11100"),
    G('E', "11111", "10000", "10000", "11110", "10000", "10000", "11111"),
    G('F', "11111", "10000", "10000", "11110", "10000", "10000", "10000"),
    G('G', "01110", "10001", "10000", "10111", "10001", "10001", "01111"),
    G('H', "10001", "10001", "10001", "11111", "10001", "10001", "10001"),
    G('I', "01110", "00100", "00100", "00100", "00100", "00100", "01110"),
    G('J', "00111", "00010", "00010", "00010", "00010", "10010", "01100"),
    G('K', "10001", "10010", "10100", "11000", "10100", "10010", "10001"),
    G('L', "10000", "10000", "10000", "10000", "10000", "10000", "11111"),
    G('M', "10001", "11011", "10101", "10101", "10001", "10001", "10001"),
    G('N', "10001", "10001", "11001", "10101", "10011", "10001", "10001"),
    G('O', "01110", "10001", "10001", "10001", "10001", "10001", "01110"),
    G('P', "11110", "10001", "10001", "11110", "10000", "10000", "10000"),
    G('Q', "01110", "10001", "10001", "10001", "10101", "10010", "01101"),
    G('R', "11110", "10001", "10001", "11110", "10100", "10010", "10001"),
    G('S', "01111", "10000", "10000", "01110", "00001", "00001", "11110"),
    G('T', "11111", "00100", "00100", "00100", "00100", "00100", "00100"),
    G('U', "10001", "10001", "10001", "10001", "10001", "10001", "01110"),
    G('V', "10001", "10001", "10001", "10001", "10001", "01010", "00100"),
    G('W', "10001", "10001", "10001", "10101", "10101", "10101", "01010"),
    G('X', "10001", "10001", "01010", "00100", "01010", "10001", "10001"),
    G('Y', "10001", "10001", "10001", "01010", "00100", "00100", "00100"),
    G('Z', "11111", "00001", "00010", "00100", "01000", "10000", "11111"),
};

#undef G

}  // namespace

std::span<const Glyph> glyphs() { return kGlyphs; }

const Glyph* find_glyph(char symbol) {
    const char up = static_cast<char>(std::toupper(static_cast<unsigned char>(symbol)));
    const auto it = std::find_if(kGlyphs.begin(), kGlyphs.end(), [&](const Glyph& g) { return g.symbol == up; });
    return it == kGlyphs.end() ? nullptr : &*it;
}

std::uint64_t signature(const Glyph& g) {
    std::uint64_t sig = 0;
    for (auto r : g.rows) sig = (sig << kGlyphWidth) | r;
    return sig;
}

int ink_count(const Glyph& g) {
    int n = 0;
    for (auto r : g.rows) n += __builtin_popcount(r);
    return n;
}

int text_width(std::string_view text, int scale) {
    if (text.empty()) return 0;
    return static_cast<int>(text.size()) * kAdvance * scale - scale;
}

void draw_text(Raster& canvas, std::string_view text, int x, int y, int scale, std::uint8_t ink) {
    for (std::size_t i = 0; i < text.size(); ++i) {
        const Glyph* g = find_glyph(text[i]);
        if (!g) continue;
        const int gx = x + static_cast<int>(i) * kAdvance * scale;
        for (int r = 0; r < kGlyphHeight; ++r) {
            for (int c = 0; c < kGlyphWidth; ++c) {
                if (!((g->rows[r] >> (kGlyphWidth - 1 - c)) & 1)) continue;
                const int px = gx + c * scale;
                const int py = y + r * scale;
                if (px < 0 || py < 0 || px + scale > canvas.cols() || py + scale > canvas.rows()) continue;
                canvas.block(py, px, scale, scale).setConstant(ink);
            }
        }
    }
}

}  // namespace asap::font

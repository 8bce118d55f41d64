#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>

#include "asap/raster.hpp"

namespace asap::font {

inline constexpr int kGlyphWidth = 5;
inline constexpr int kGlyphHeight = 7;
// Horizontal advance per character, in font pixels (glyph + 1 px spacing).
inline constexpr int kAdvance = kGlyphWidth + 1;

struct Glyph {
    char symbol;
    std::array<std::uint8_t, kGlyphHeight> rows;  // bit 4 is the leftmost column
};

/// Digits, upper-case letters and . : / - ; the space character is not a glyph.
std::span<const Glyph> glyphs();
const Glyph* find_glyph(char symbol);

/// 35-bit row-major bitmap signature (bit 34 = top-left).
std::uint64_t signature(const Glyph& g);
int ink_count(const Glyph& g);

/// Pixel width of `text` rendered at `scale` (no trailing spacing).
int text_width(std::string_view text, int scale);
inline int text_height(int scale) { return kGlyphHeight * scale; }

/// Draws `text` with its top-left corner at (x, y); ink pixels are set to
/// `ink`, everything else is left untouched. Unknown characters advance as blanks.
void draw_text(Raster& canvas, std::string_view text, int x, int y, int scale, std::uint8_t ink);

}  // namespace asap::font

#include "asap/ocr.hpp"

#include <algorithm>

#include "asap/errors.hpp"

namespace asap {

Roi StackLayout::slot_box(std::size_t slot) const {
    const int s = static_cast<int>(slot);
    return {(s % columns) * stride_x(), (s / columns) * stride_y(), cell_width, cell_height};
}

StackedImage stack_crops(std::span<const IndexedCrop> crops, int columns, int padding) {
    if (crops.empty()) throw Error("stack_crops needs at least one crop");
    if (columns < 1) throw Error("stack_crops needs columns >= 1");
    if (padding < 0) throw Error("stack_crops padding must be >= 0");

    StackLayout layout;
    layout.padding = padding;
    for (const auto& c : crops) {
        layout.cell_width = std::max(layout.cell_width, static_cast<int>(c.pixels.cols()));
        layout.cell_height = std::max(layout.cell_height, static_cast<int>(c.pixels.rows()));
    }
    const int n = static_cast<int>(crops.size());
    layout.columns = columns;
    layout.rows = (n + columns - 1) / columns;

    StackedImage out;
    out.composite = Raster::Zero(layout.rows * layout.stride_y(), layout.columns * layout.stride_x());
    for (std::size_t i = 0; i < crops.size(); ++i) {
        const Roi cell = layout.slot_box(i);
        const auto& px = crops[i].pixels;
        out.composite.block(cell.y, cell.x, px.rows(), px.cols()) = px;
        layout.entries.push_back(crops[i].frame_index);
    }
    out.layout = std::move(layout);
    return out;
}

DestackResult destack(std::span<const TextBlock> blocks, const StackLayout& layout) {
    DestackResult result;
    for (auto frame : layout.entries) result.texts[frame];

    std::vector<std::vector<const TextBlock*>> per_slot(layout.entries.size());
    for (const auto& block : blocks) {
        // Doubled coordinates keep half-pixel centres exact.
        const long cx2 = 2L * block.box.x + block.box.w;
        const long cy2 = 2L * block.box.y + block.box.h;
        if (cx2 < 0 || cy2 < 0) {
            ++result.orphans;
            continue;
        }
        const long col = cx2 / (2L * layout.stride_x());
        const long row = cy2 / (2L * layout.stride_y());
        const bool inside_cell = cx2 - col * 2L * layout.stride_x() < 2L * layout.cell_width &&
                                 cy2 - row * 2L * layout.stride_y() < 2L * layout.cell_height;
        const long slot = row * layout.columns + col;
        if (!inside_cell || col >= layout.columns || slot >= static_cast<long>(per_slot.size())) {
            ++result.orphans;
            continue;
        }
        per_slot[static_cast<std::size_t>(slot)].push_back(&block);
    }

    for (std::size_t slot = 0; slot < per_slot.size(); ++slot) {
        auto& list = per_slot[slot];
        std::stable_sort(list.begin(), list.end(), [](const TextBlock* a, const TextBlock* b) {
            if (a->box.y != b->box.y) return a->box.y < b->box.y;
            return a->box.x < b->box.x;
        });
        std::string joined;
        for (const auto* b : list) {
            if (!joined.empty()) joined += ' ';
            joined += b->text;
        }
        auto& text = result.texts[layout.entries[slot]];
        if (!text.empty() && !joined.empty()) text += ' ';
        text += joined;
    }
    return result;
}

}  // namespace asap

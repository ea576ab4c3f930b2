#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

namespace lanekit {

/// Single-channel float raster, row-major. Row 0 is the y_min edge when the
/// image is a top view (row index grows with forward distance).
struct Image {
    int width = 0;
    int height = 0;
    std::vector<float> px;

    Image() = default;
    Image(int w, int h, float fill = 0.0f)
        : width(w), height(h), px(static_cast<size_t>(w) * h, fill) {
        if (w <= 0 || h <= 0) throw std::invalid_argument("Image: non-positive dims");
    }

    float& at(int row, int col) { return px[static_cast<size_t>(row) * width + col]; }
    float at(int row, int col) const { return px[static_cast<size_t>(row) * width + col]; }
    bool in_bounds(int row, int col) const {
        return row >= 0 && row < height && col >= 0 && col < width;
    }
    size_t size() const { return px.size(); }
};

/// Binary raster; 1 = counted in loss, 0 = ignored.
struct Mask {
    int width = 0;
    int height = 0;
    std::vector<uint8_t> px;

    Mask() = default;
    Mask(int w, int h, uint8_t fill = 0)
        : width(w), height(h), px(static_cast<size_t>(w) * h, fill) {
        if (w <= 0 || h <= 0) throw std::invalid_argument("Mask: non-positive dims");
    }

    uint8_t& at(int row, int col) { return px[static_cast<size_t>(row) * width + col]; }
    uint8_t at(int row, int col) const { return px[static_cast<size_t>(row) * width + col]; }
    size_t count_set() const {
        size_t n = 0;
        for (uint8_t v : px) n += v != 0;
        return n;
    }
};

using LaneImage = Image;

}  // namespace lanekit

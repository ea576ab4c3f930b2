#include "lanekit/image_ops.hpp"

#include <cmath>
#include <stdexcept>

namespace lanekit {

Image grad(const Image& image) {
    if (image.size() == 0) throw std::invalid_argument("grad: empty image");
    Image out(image.width, image.height);
    const int w = image.width, h = image.height;
    for (int r = 0; r < h; ++r) {
        for (int c = 0; c < w; ++c) {
            double gx, gy;
            if (w == 1)
                gx = 0.0;
            else if (c == 0)
                gx = image.at(r, 1) - image.at(r, 0);
            else if (c == w - 1)
                gx = image.at(r, w - 1) - image.at(r, w - 2);
            else
                gx = (image.at(r, c + 1) - image.at(r, c - 1)) / 2.0;
            if (h == 1)
                gy = 0.0;
            else if (r == 0)
                gy = image.at(1, c) - image.at(0, c);
            else if (r == h - 1)
                gy = image.at(h - 1, c) - image.at(h - 2, c);
            else
                gy = (image.at(r + 1, c) - image.at(r - 1, c)) / 2.0;
            out.at(r, c) = static_cast<float>(std::abs(gx) + std::abs(gy));
        }
    }
    return out;
}

Mask reconstruction_mask(const LaneImage& lane_image, const std::vector<PixelBox>& vehicle_boxes,
                         double lane_threshold, double dilation_m, double px_per_meter) {
    if (dilation_m < 0.0) throw std::invalid_argument("reconstruction_mask: dilation < 0");
    if (px_per_meter <= 0.0) throw std::invalid_argument("reconstruction_mask: px_per_meter <= 0");
    Mask mask(lane_image.width, lane_image.height, 0);

    std::vector<Vec2> lane_px;
    for (int r = 0; r < lane_image.height; ++r)
        for (int c = 0; c < lane_image.width; ++c)
            if (lane_image.at(r, c) > lane_threshold) lane_px.push_back({c + 0.5, r + 0.5});
    if (lane_px.empty()) return mask;  // nothing detected: ignore everything

    std::vector<Vec2> hull = convex_hull(std::move(lane_px));
    hull = dilate_convex_polygon(hull, dilation_m * px_per_meter);

    for (int r = 0; r < mask.height; ++r) {
        for (int c = 0; c < mask.width; ++c) {
            const Vec2 p{c + 0.5, r + 0.5};
            if (!point_in_convex_polygon(p, hull)) continue;
            bool in_box = false;
            for (const PixelBox& b : vehicle_boxes) {
                if (p.x >= b.x0 && p.x < b.x1 && p.y >= b.y0 && p.y < b.y1) {
                    in_box = true;
                    break;
                }
            }
            if (!in_box) mask.at(r, c) = 1;
        }
    }
    return mask;
}

double masked_l1(const Image& a, const Image& b, const Mask& mask) {
    if (a.width != b.width || a.height != b.height || a.width != mask.width ||
        a.height != mask.height)
        throw std::invalid_argument("masked_l1: dimension mismatch");
    double sum = 0.0;
    for (size_t i = 0; i < a.size(); ++i)
        if (mask.px[i]) sum += std::abs(static_cast<double>(a.px[i]) - b.px[i]);
    return sum;
}

}  // namespace lanekit

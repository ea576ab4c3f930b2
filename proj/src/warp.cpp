#include "lanekit/warp.hpp"

#include <cmath>

#include "lanekit/parallel.hpp"

namespace lanekit {

namespace {

float bilinear_sample(const Image& img, double u, double v) {
    // pixel centers sit at half-integer continuous coordinates
    const double uf = u - 0.5, vf = v - 0.5;
    const int c0 = static_cast<int>(std::floor(uf));
    const int r0 = static_cast<int>(std::floor(vf));
    const double fu = uf - c0, fv = vf - r0;
    auto tap = [&](int r, int c) -> double {
        return img.in_bounds(r, c) ? img.at(r, c) : 0.0;
    };
    const double top = tap(r0, c0) * (1.0 - fu) + tap(r0, c0 + 1) * fu;
    const double bot = tap(r0 + 1, c0) * (1.0 - fu) + tap(r0 + 1, c0 + 1) * fu;
    return static_cast<float>(top * (1.0 - fv) + bot * fv);
}

}  // namespace

Image warp_to_topview(const Image& image, const Homography& h, const TopViewGrid& grid,
                      int threads) {
    if (image.size() == 0) throw std::invalid_argument("warp_to_topview: empty image");
    grid.validate();
    Image out(grid.width_px(), grid.height_px());
    const Mat3& g2i = h.inverse();
    parallel_for(static_cast<size_t>(out.height), threads, [&](size_t row) {
        for (int col = 0; col < out.width; ++col) {
            const Vec2 g = grid.pixel_center(static_cast<int>(row), col);
            const double U = g2i(0, 0) * g.x + g2i(0, 1) * g.y + g2i(0, 2);
            const double V = g2i(1, 0) * g.x + g2i(1, 1) * g.y + g2i(1, 2);
            const double W = g2i(2, 0) * g.x + g2i(2, 1) * g.y + g2i(2, 2);
            if (std::abs(W) < 1e-12) continue;  // unreachable ground point, leave zero
            out.at(static_cast<int>(row), col) = bilinear_sample(image, U / W, V / W);
        }
    });
    return out;
}

const char* orientation_name(Orientation o) {
    switch (o) {
        case Orientation::left: return "left";
        case Orientation::center: return "center";
        case Orientation::right: return "right";
    }
    return "?";
}

Image crop_topview(const Image& topview, const TopViewGrid& grid, const CropRect& crop) {
    if (topview.width != grid.width_px() || topview.height != grid.height_px())
        throw std::invalid_argument("crop_topview: image does not match grid dims");
    const int c0 = static_cast<int>(std::lround((crop.x0 - grid.x_min) * grid.px_per_meter));
    const int c1 = static_cast<int>(std::lround((crop.x1 - grid.x_min) * grid.px_per_meter));
    const int r0 = static_cast<int>(std::lround((crop.y0 - grid.y_min) * grid.px_per_meter));
    const int r1 = static_cast<int>(std::lround((crop.y1 - grid.y_min) * grid.px_per_meter));
    if (c0 < 0 || r0 < 0 || c1 > topview.width || r1 > topview.height || c0 >= c1 || r0 >= r1)
        throw std::invalid_argument("crop_topview: crop rectangle outside the grid");
    Image out(c1 - c0, r1 - r0);
    for (int r = r0; r < r1; ++r)
        for (int c = c0; c < c1; ++c) out.at(r - r0, c - c0) = topview.at(r, c);
    return out;
}

OrientedView make_oriented_view(const Image& image, const CameraModel& camera,
                                const TopViewGrid& grid, Orientation orientation,
                                const CropRect& crop, double pan_deg, int threads) {
    CameraModel panned = camera;
    const double pan = pan_deg * M_PI / 180.0;
    if (orientation == Orientation::left) panned.yaw += pan;
    if (orientation == Orientation::right) panned.yaw -= pan;
    const Homography h = build_ipm(panned, grid);
    Image top = warp_to_topview(image, h, grid, threads);
    return {crop_topview(top, grid, crop), orientation};
}

}  // namespace lanekit

#include <doctest.h>

#include <cmath>

#include "lanekit/camera.hpp"
#include "lanekit/rng.hpp"
#include "lanekit/warp.hpp"

using namespace lanekit;

namespace {

CameraModel view_camera() {
    CameraModel c;
    c.fx = 800.0;
    c.fy = 800.0;
    c.cx = 320.0;  // image center for a 640-wide frame, keeps things mirror-symmetric
    c.cy = 240.0;
    c.height = 1.5;
    c.pitch = 0.12;
    c.yaw = 0.0;
    return c;
}

TopViewGrid view_grid() {
    TopViewGrid g;
    g.x_min = -8.0;
    g.x_max = 8.0;
    g.y_min = 3.2;
    g.y_max = 35.2;
    g.px_per_meter = 8.0;
    g.tile_size = 1.6;
    return g;
}

/// Synthesize the camera image of a ground-plane intensity pattern.
Image render_camera_view(const CameraModel& cam, const TopViewGrid& grid, int width, int height,
                         double (*pattern)(double, double)) {
    const Homography h = build_ipm(cam, grid);
    Image img(width, height);
    for (int r = 0; r < height; ++r) {
        for (int c = 0; c < width; ++c) {
            try {
                const Vec2 g = image_to_ground(h, {c + 0.5, r + 0.5});
                img.at(r, c) = static_cast<float>(pattern(g.x, g.y));
            } catch (const std::domain_error&) {
                // above the horizon stays black
            }
        }
    }
    return img;
}

double symmetric_pattern(double x, double y) {
    const double v = 0.5 + 0.5 * std::cos(x * 1.3) * std::cos(y * 0.7);
    return std::clamp(v, 0.0, 1.0);
}

}  // namespace

TEST_CASE("constant image warps to a constant top view in covered areas") {
    const CameraModel cam = view_camera();
    const TopViewGrid grid = view_grid();
    const Homography h = build_ipm(cam, grid);
    Image src(640, 480, 0.75f);
    const Image top = warp_to_topview(src, h, grid);
    // pixels whose sample point sits well inside the frame must be exactly
    // constant; pixels blending with the zero padding are skipped
    int covered = 0;
    for (int r = 0; r < top.height; ++r) {
        for (int c = 0; c < top.width; ++c) {
            const Vec2 uv = ground_to_image(h, grid.pixel_center(r, c));
            if (uv.x < 2.0 || uv.x > src.width - 2.0 || uv.y < 2.0 || uv.y > src.height - 2.0)
                continue;
            ++covered;
            CHECK(top.at(r, c) == doctest::Approx(0.75f));
        }
    }
    CHECK(covered > 500);
}

TEST_CASE("identity homography with aligned grid reproduces the source crop") {
    TopViewGrid grid;
    grid.x_min = 8.0;
    grid.x_max = 24.0;
    grid.y_min = 4.0;
    grid.y_max = 20.0;
    grid.px_per_meter = 1.0;
    grid.tile_size = 1.6;
    const Homography id;
    Image src(64, 64);
    Rng rng(3);
    for (float& v : src.px) v = static_cast<float>(rng.uniform());
    const Image top = warp_to_topview(src, id, grid);
    REQUIRE(top.width == 16);
    REQUIRE(top.height == 16);
    for (int r = 0; r < top.height; ++r)
        for (int c = 0; c < top.width; ++c)
            CHECK(top.at(r, c) == doctest::Approx(src.at(r + 4, c + 8)).epsilon(1e-6));
}

TEST_CASE("a single bright pixel lands at its predicted top-view location") {
    const CameraModel cam = view_camera();
    const TopViewGrid grid = view_grid();
    const Homography h = build_ipm(cam, grid);
    Image src(640, 480, 0.0f);
    // choose the source pixel nearest to the sample point of a known
    // top-view pixel, so the point warp cannot fall between sample taps
    const int target_row = 60, target_col = 70;
    const Vec2 uv = ground_to_image(h, grid.pixel_center(target_row, target_col));
    const int pr = static_cast<int>(std::floor(uv.y));
    const int pc = static_cast<int>(std::floor(uv.x));
    REQUIRE(src.in_bounds(pr, pc));
    src.at(pr, pc) = 1.0f;
    const Vec2 ground = image_to_ground(h, {pc + 0.5, pr + 0.5});
    const double exp_col = (ground.x - grid.x_min) * grid.px_per_meter - 0.5;
    const double exp_row = (ground.y - grid.y_min) * grid.px_per_meter - 0.5;

    const Image top = warp_to_topview(src, h, grid);
    int best_r = -1, best_c = -1;
    float best = 0.0f;
    for (int r = 0; r < top.height; ++r)
        for (int c = 0; c < top.width; ++c)
            if (top.at(r, c) > best) {
                best = top.at(r, c);
                best_r = r;
                best_c = c;
            }
    REQUIRE(best > 0.0f);
    CHECK(std::abs(best_r - exp_row) <= 1.0);
    CHECK(std::abs(best_c - exp_col) <= 1.0);
}

TEST_CASE("warping is linear in intensity") {
    const CameraModel cam = view_camera();
    const TopViewGrid grid = view_grid();
    const Homography h = build_ipm(cam, grid);
    Image src(320, 240);
    Rng rng(11);
    for (float& v : src.px) v = static_cast<float>(rng.uniform());
    Image scaled = src;
    for (float& v : scaled.px) v *= 0.37f;
    const Image a = warp_to_topview(src, h, grid);
    const Image b = warp_to_topview(scaled, h, grid);
    for (size_t i = 0; i < a.size(); ++i)
        CHECK(b.px[i] == doctest::Approx(0.37f * a.px[i]).epsilon(1e-5));
}

TEST_CASE("center orientation equals warp plus crop") {
    const CameraModel cam = view_camera();
    const TopViewGrid grid = view_grid();
    const Image src = render_camera_view(cam, grid, 640, 480, symmetric_pattern);
    const CropRect crop{-4.0, 8.0, 4.0, 19.2};
    const OrientedView v =
        make_oriented_view(src, cam, grid, Orientation::center, crop, 5.0);
    const Image manual = crop_topview(warp_to_topview(src, build_ipm(cam, grid), grid), grid, crop);
    REQUIRE(v.image.size() == manual.size());
    for (size_t i = 0; i < manual.size(); ++i) CHECK(v.image.px[i] == manual.px[i]);
    CHECK(v.orientation == Orientation::center);
}

TEST_CASE("zero pan makes all orientations identical") {
    const CameraModel cam = view_camera();
    const TopViewGrid grid = view_grid();
    const Image src = render_camera_view(cam, grid, 640, 480, symmetric_pattern);
    const CropRect crop{-4.0, 8.0, 4.0, 19.2};
    const Image l = make_oriented_view(src, cam, grid, Orientation::left, crop, 0.0).image;
    const Image c = make_oriented_view(src, cam, grid, Orientation::center, crop, 0.0).image;
    const Image r = make_oriented_view(src, cam, grid, Orientation::right, crop, 0.0).image;
    CHECK(l.px == c.px);
    CHECK(r.px == c.px);
}

TEST_CASE("opposite pans of a mirror-symmetric scene mirror each other") {
    const CameraModel cam = view_camera();
    const TopViewGrid grid = view_grid();
    const Image src = render_camera_view(cam, grid, 640, 480, symmetric_pattern);
    const CropRect crop{-4.0, 8.0, 4.0, 19.2};
    const Image left = make_oriented_view(src, cam, grid, Orientation::left, crop, 5.0).image;
    const Image right = make_oriented_view(src, cam, grid, Orientation::right, crop, 5.0).image;
    REQUIRE(left.width == right.width);
    REQUIRE(left.height == right.height);
    double sq_sum = 0.0;
    for (int r = 0; r < left.height; ++r)
        for (int c = 0; c < left.width; ++c) {
            const double d = left.at(r, c) - right.at(r, left.width - 1 - c);
            sq_sum += d * d;
        }
    const double rms = std::sqrt(sq_sum / left.size());
    CHECK(rms < 2.0 / 255.0);
}

TEST_CASE("warping is invariant to the worker thread count") {
    const CameraModel cam = view_camera();
    const TopViewGrid grid = view_grid();
    const Homography h = build_ipm(cam, grid);
    Image src(320, 240);
    Rng rng(21);
    for (float& v : src.px) v = static_cast<float>(rng.uniform());
    const Image seq = warp_to_topview(src, h, grid, 1);
    const Image par = warp_to_topview(src, h, grid, 8);
    CHECK(seq.px == par.px);
}

TEST_CASE("crop outside the grid is rejected") {
    const TopViewGrid grid = view_grid();
    Image top(grid.width_px(), grid.height_px(), 0.0f);
    CHECK_THROWS_AS(crop_topview(top, grid, {-20.0, 8.0, 4.0, 19.2}), std::invalid_argument);
    CHECK_THROWS_AS(crop_topview(top, grid, {-4.0, 8.0, 4.0, 99.0}), std::invalid_argument);
}

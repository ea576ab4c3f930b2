#include "lanekit/camera.hpp"

#include <cmath>
#include <string>

namespace lanekit {

namespace {

bool multiple_of(double extent, double step) {
    const double q = extent / step;
    return std::abs(q - std::lround(q)) < 1e-9;
}

Vec2 apply(const Mat3& m, const Vec2& p, const char* what) {
    const double X = m(0, 0) * p.x + m(0, 1) * p.y + m(0, 2);
    const double Y = m(1, 0) * p.x + m(1, 1) * p.y + m(1, 2);
    const double W = m(2, 0) * p.x + m(2, 1) * p.y + m(2, 2);
    if (std::abs(W) < 1e-12)
        throw std::domain_error(std::string(what) + ": point at or behind the horizon (w ~ 0)");
    return {X / W, Y / W};
}

}  // namespace

void TopViewGrid::validate() const {
    if (x_max <= x_min || y_max <= y_min)
        throw std::invalid_argument("TopViewGrid: empty extent");
    if (tile_size <= 0.0) throw std::invalid_argument("TopViewGrid: tile_size <= 0");
    if (px_per_meter <= 0.0) throw std::invalid_argument("TopViewGrid: px_per_meter <= 0");
    if (!multiple_of(x_max - x_min, tile_size) || !multiple_of(y_max - y_min, tile_size))
        throw std::invalid_argument("TopViewGrid: extent is not a whole number of tiles");
}

Mat3 Mat3::identity() {
    Mat3 r;
    r.m = {1, 0, 0, 0, 1, 0, 0, 0, 1};
    return r;
}

Mat3 Mat3::operator*(const Mat3& o) const {
    Mat3 r;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            double s = 0.0;
            for (int k = 0; k < 3; ++k) s += (*this)(i, k) * o(k, j);
            r(i, j) = s;
        }
    return r;
}

double Mat3::det() const {
    const auto& a = m;
    return a[0] * (a[4] * a[8] - a[5] * a[7]) - a[1] * (a[3] * a[8] - a[5] * a[6]) +
           a[2] * (a[3] * a[7] - a[4] * a[6]);
}

Mat3 Mat3::inverse() const {
    const double d = det();
    if (std::abs(d) < 1e-15) throw std::domain_error("Mat3::inverse: singular matrix");
    const auto& a = m;
    Mat3 r;
    r.m = {(a[4] * a[8] - a[5] * a[7]) / d, (a[2] * a[7] - a[1] * a[8]) / d,
           (a[1] * a[5] - a[2] * a[4]) / d, (a[5] * a[6] - a[3] * a[8]) / d,
           (a[0] * a[8] - a[2] * a[6]) / d, (a[2] * a[3] - a[0] * a[5]) / d,
           (a[3] * a[7] - a[4] * a[6]) / d, (a[1] * a[6] - a[0] * a[7]) / d,
           (a[0] * a[4] - a[1] * a[3]) / d};
    return r;
}

Homography::Homography(const Mat3& image_to_ground) : fwd_(image_to_ground) {
    inv_ = fwd_.inverse();
    const Mat3 check = fwd_ * inv_;
    const Mat3 id = Mat3::identity();
    for (int i = 0; i < 9; ++i)
        if (std::abs(check.m[i] - id.m[i]) > 1e-9)
            throw std::domain_error("Homography: inverse check failed (ill-conditioned matrix)");
}

Homography build_ipm(const CameraModel& camera, const TopViewGrid& grid) {
    camera.validate();
    grid.validate();

    const double ct = std::cos(camera.pitch), st = std::sin(camera.pitch);
    // camera axes in world coordinates, before yaw: x right, y down-ish, z forward
    const double axes0[3][3] = {
        {1.0, 0.0, 0.0},   // x_cam
        {0.0, -st, -ct},   // y_cam
        {0.0, ct, -st},    // z_cam (optical axis, pitched down)
    };
    const double cy_ = std::cos(camera.yaw), sy_ = std::sin(camera.yaw);
    Mat3 world_to_cam;  // rows = yawed camera axes
    for (int i = 0; i < 3; ++i) {
        const double ax = axes0[i][0], ay = axes0[i][1], az = axes0[i][2];
        world_to_cam(i, 0) = cy_ * ax - sy_ * ay;
        world_to_cam(i, 1) = sy_ * ax + cy_ * ay;
        world_to_cam(i, 2) = az;
    }

    Mat3 intrinsics;
    intrinsics.m = {camera.fx, 0.0, camera.cx, 0.0, camera.fy, camera.cy, 0.0, 0.0, 1.0};
    // (x, y, 1) on the ground maps to the ray (x, y, -height) from the camera
    Mat3 lift;
    lift.m = {1.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, -camera.height};

    const Mat3 ground_to_img = intrinsics * world_to_cam * lift;

    // every raster row must lie strictly in front of the camera; the
    // homogeneous w is the camera-frame depth and is linear in x, so the two
    // row ends bound the whole row
    for (int row = 0; row < grid.height_px(); ++row) {
        const double y = grid.y_min + (row + 0.5) / grid.px_per_meter;
        for (const double x : {grid.x_min, grid.x_max}) {
            const double w = ground_to_img(2, 0) * x + ground_to_img(2, 1) * y + ground_to_img(2, 2);
            if (w <= 1e-12)
                throw std::domain_error(
                    "build_ipm: top-view raster row " + std::to_string(row) + " (y = " +
                    std::to_string(y) + " m) is at or beyond the horizon for this pose");
        }
    }
    return Homography(ground_to_img.inverse());
}

Vec2 image_to_ground(const Homography& h, const Vec2& pixel) {
    return apply(h.forward(), pixel, "image_to_ground");
}

Vec2 ground_to_image(const Homography& h, const Vec2& ground) {
    return apply(h.inverse(), ground, "ground_to_image");
}

}  // namespace lanekit

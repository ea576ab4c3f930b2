#pragma once

#include <array>
#include <stdexcept>

#include "lanekit/geometry.hpp"

namespace lanekit {

// Conventions shared by every module:
//   - ground plane is z = 0, origin at the camera's ground projection
//   - +y forward (away from the camera), +x right, +z up
//   - positive pitch tilts the camera down, positive yaw pans it left
//     (counterclockwise about +z seen from above)
//   - continuous image coordinates put pixel (row, col) center at
//     (col + 0.5, row + 0.5)

struct CameraModel {
    double fx = 0.0, fy = 0.0;  // focal lengths, pixels
    double cx = 0.0, cy = 0.0;  // principal point, pixels
    double height = 0.0;        // meters above ground plane
    double pitch = 0.0;         // radians, downward positive
    double yaw = 0.0;           // radians, pan about the vertical axis

    void validate() const {
        if (fx <= 0.0 || fy <= 0.0) throw std::invalid_argument("CameraModel: focal length <= 0");
        if (height <= 0.0) throw std::invalid_argument("CameraModel: height <= 0");
        if (!(std::abs(pitch) < M_PI / 2.0))
            throw std::invalid_argument("CameraModel: |pitch| must be < pi/2");
    }
};

/// Metric top-view raster plus the tile lattice over it.
struct TopViewGrid {
    double x_min = -16.0, x_max = 16.0;  // lateral extent, meters
    double y_min = 0.0, y_max = 80.0;    // longitudinal extent, meters
    double px_per_meter = 4.0;
    double tile_size = 1.6;  // meters

    void validate() const;

    int width_px() const { return static_cast<int>(std::lround((x_max - x_min) * px_per_meter)); }
    int height_px() const { return static_cast<int>(std::lround((y_max - y_min) * px_per_meter)); }
    int tile_cols() const { return static_cast<int>(std::lround((x_max - x_min) / tile_size)); }
    int tile_rows() const { return static_cast<int>(std::lround((y_max - y_min) / tile_size)); }

    /// Ground coords of a raster pixel center; row 0 sits at the y_min edge.
    Vec2 pixel_center(int row, int col) const {
        return {x_min + (col + 0.5) / px_per_meter, y_min + (row + 0.5) / px_per_meter};
    }

    Box2 tile_box(int row, int col) const {
        return {x_min + col * tile_size, y_min + row * tile_size, x_min + (col + 1) * tile_size,
                y_min + (row + 1) * tile_size};
    }
    Vec2 tile_center(int row, int col) const {
        return {x_min + (col + 0.5) * tile_size, y_min + (row + 0.5) * tile_size};
    }
    bool tile_in_bounds(int row, int col) const {
        return row >= 0 && row < tile_rows() && col >= 0 && col < tile_cols();
    }
};

struct Mat3 {
    std::array<double, 9> m{};  // row-major

    static Mat3 identity();
    double& operator()(int r, int c) { return m[r * 3 + c]; }
    double operator()(int r, int c) const { return m[r * 3 + c]; }
    Mat3 operator*(const Mat3& o) const;
    double det() const;
    Mat3 inverse() const;  // throws on near-singular input
};

/// Plane-to-plane projective map with a cached inverse. `fwd` maps
/// homogeneous image pixels to ground-plane meters.
class Homography {
  public:
    Homography() : fwd_(Mat3::identity()), inv_(Mat3::identity()) {}
    explicit Homography(const Mat3& image_to_ground);

    const Mat3& forward() const { return fwd_; }
    const Mat3& inverse() const { return inv_; }

  private:
    Mat3 fwd_;
    Mat3 inv_;
};

/// IPM between image plane and the ground-plane top view. Throws when some
/// grid row is unreachable (at or beyond the horizon), naming the first
/// offending raster row.
Homography build_ipm(const CameraModel& camera, const TopViewGrid& grid);

/// Exact projective point maps; throw when the homogeneous w vanishes
/// (point at or behind the horizon).
Vec2 image_to_ground(const Homography& h, const Vec2& pixel);
Vec2 ground_to_image(const Homography& h, const Vec2& ground);

}  // namespace lanekit

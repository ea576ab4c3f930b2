#pragma once

#include "lanekit/camera.hpp"
#include "lanekit/image.hpp"

namespace lanekit {

/// Warp a camera image into the metric top view. Each top-view pixel is a
/// bilinear sample of the source at the ground point's image projection;
/// samples outside the source are zero. Deterministic, parallelizable.
Image warp_to_topview(const Image& image, const Homography& h, const TopViewGrid& grid,
                      int threads = 1);

enum class Orientation { left, center, right };

const char* orientation_name(Orientation o);

/// Crop window in grid (ground) coordinates, meters.
struct CropRect {
    double x0 = 0.0, y0 = 0.0, x1 = 0.0, y1 = 0.0;
};

struct OrientedView {
    Image image;
    Orientation orientation;
};

/// The self-supervision view transform: warp under a yaw-adjusted camera
/// (left pans +pan_deg, right pans -pan_deg), then a fixed crop. The crop
/// must lie inside the grid.
OrientedView make_oriented_view(const Image& image, const CameraModel& camera,
                                const TopViewGrid& grid, Orientation orientation,
                                const CropRect& crop, double pan_deg = 5.0, int threads = 1);

/// Crop, bounds-checked against the grid; shared by make_oriented_view and
/// the CLI.
Image crop_topview(const Image& topview, const TopViewGrid& grid, const CropRect& crop);

}  // namespace lanekit

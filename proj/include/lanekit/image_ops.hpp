#pragma once

#include <vector>

#include "lanekit/geometry.hpp"
#include "lanekit/image.hpp"

namespace lanekit {

/// |dI/dx| + |dI/dy| by central differences, one-sided at the borders.
Image grad(const Image& image);

/// Axis-aligned box in raster pixel coordinates, half-open over pixel
/// centers.
struct PixelBox {
    double x0 = 0.0, y0 = 0.0, x1 = 0.0, y1 = 0.0;
};

/// Reconstruction-loss mask: 1 inside the convex hull of lane pixels above
/// lane_threshold, dilated by dilation_m (16-gon Minkowski offset), minus
/// the vehicle boxes. All-zero when nothing exceeds the threshold.
Mask reconstruction_mask(const LaneImage& lane_image, const std::vector<PixelBox>& vehicle_boxes,
                         double lane_threshold, double dilation_m, double px_per_meter);

/// Sum of mask * |a - b|; raw L1, no normalization.
double masked_l1(const Image& a, const Image& b, const Mask& mask);

}  // namespace lanekit

#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "lanekit/camera.hpp"
#include "lanekit/geometry.hpp"
#include "lanekit/tile_codec.hpp"

namespace lanekit {

struct Range {
    double lo = 0.0;
    double hi = 0.0;
    bool valid() const { return hi >= lo; }
};

struct IntRange {
    int lo = 0;
    int hi = 0;
    bool valid() const { return hi >= lo; }
};

/// Ranges for the per-scene random draws. Scenes are constant-curvature
/// arcs, optionally blended in with a linear curvature ramp over the first
/// ramp stretch (clothoid-style).
struct SceneConfig {
    IntRange lane_count{2, 5};
    Range lane_width_m{3.0, 4.2};
    Range curvature{-0.02, 0.02};  // 1/m, positive bends left
    bool clothoid_blend = true;
    double clothoid_ramp_m = 20.0;
    Range camera_height_m{1.4, 1.6};
    Range camera_pitch_rad{0.05, 0.15};
    Range camera_yaw_rad{-0.02, 0.02};
    Range dash_on_m{1.0, 3.0};
    Range dash_gap_m{2.0, 6.0};
    double scene_length_m = 100.0;
    double sample_spacing_m = 0.5;

    void validate() const;
};

/// A generated scene: the delimiter (paint line) polylines in ground meters
/// plus the jittered camera. n lanes produce n+1 delimiters. Dash lengths
/// are appearance metadata only; labels always use the full polylines.
struct Scene {
    uint64_t seed = 0;
    std::vector<LanePolyline> lanes;
    CameraModel camera;
    double dash_on_m = 0.0;
    double dash_gap_m = 0.0;
};

/// Deterministic in seed; all sampled scalars stay inside their configured
/// closed ranges.
Scene generate_scene(uint64_t seed, const SceneConfig& config);

struct SceneLabels {
    TileMap tiles;
    LaneImage lane_image;
};

SceneLabels scene_to_labels(const Scene& scene, const TopViewGrid& grid,
                            double line_width_m = 0.15, int resolution_divisor = 4);

struct DatasetItem {
    size_t index = 0;
    std::string id;
    Scene scene;
    SceneLabels labels;
};

/// Generates `count` items with per-item seed mix_seed(seed, index). The
/// sink receives items strictly in index order regardless of thread count.
void generate_dataset(uint64_t seed, size_t count, const SceneConfig& config,
                      const TopViewGrid& grid, const std::function<void(const DatasetItem&)>& sink,
                      int threads = 1);

std::string dataset_item_id(size_t index);

}  // namespace lanekit

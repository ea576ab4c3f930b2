#include "lanekit/scene_gen.hpp"

#include <cmath>
#include <cstdio>
#include <map>
#include <mutex>
#include <stdexcept>

#include "lanekit/parallel.hpp"
#include "lanekit/rng.hpp"

namespace lanekit {

namespace {

constexpr double kMinDelimiterGap = 1.0;  // meters, adjacency invariant
constexpr double kIntegrationStep = 0.05;

struct PathSample {
    Vec2 pos;
    double heading;
};

/// Integrate the centerline with per-step exact arcs; curvature is treated
/// as constant inside each step.
std::vector<PathSample> integrate_centerline(double curvature_end, bool clothoid, double ramp_m,
                                             double length_m) {
    std::vector<PathSample> out;
    out.reserve(static_cast<size_t>(length_m / kIntegrationStep) + 2);
    Vec2 pos{0.0, 0.0};
    double heading = M_PI / 2.0;  // straight ahead, +y
    out.push_back({pos, heading});
    double s = 0.0;
    while (s < length_m - 1e-9) {
        const double h = std::min(kIntegrationStep, length_m - s);
        const double s_mid = s + h / 2.0;
        const double k = (clothoid && s_mid < ramp_m) ? curvature_end * (s_mid / ramp_m)
                                                      : curvature_end;
        const double dpsi = k * h;
        const double chord = std::abs(k) < 1e-12 ? h : 2.0 * std::sin(dpsi / 2.0) / k;
        const double dir = heading + dpsi / 2.0;
        pos = pos + Vec2{std::cos(dir), std::sin(dir)} * chord;
        heading += dpsi;
        s += h;
        out.push_back({pos, heading});
    }
    return out;
}

LanePolyline resample(const std::vector<Vec2>& pts, double spacing) {
    LanePolyline out;
    if (pts.empty()) return out;
    out.points.push_back(pts.front());
    double carried = 0.0;
    for (size_t i = 0; i + 1 < pts.size(); ++i) {
        const Vec2 a = pts[i], b = pts[i + 1];
        const double seg_len = distance(a, b);
        if (seg_len <= 0.0) continue;
        double t = spacing - carried;
        while (t <= seg_len) {
            out.points.push_back(a + (b - a) * (t / seg_len));
            t += spacing;
        }
        carried = seg_len - (t - spacing);
    }
    if (carried > spacing * 0.25) out.points.push_back(pts.back());
    return out;
}

}  // namespace

void SceneConfig::validate() const {
    auto check = [](bool ok, const char* what) {
        if (!ok) throw std::invalid_argument(std::string("SceneConfig: ") + what);
    };
    check(lane_count.valid() && lane_count.lo >= 1, "lane_count range empty or < 1");
    check(lane_width_m.valid(), "lane_width range empty");
    check(curvature.valid(), "curvature range empty");
    check(camera_height_m.valid() && camera_height_m.lo > 0.0, "camera height range invalid");
    check(camera_pitch_rad.valid(), "camera pitch range empty");
    check(camera_yaw_rad.valid(), "camera yaw range empty");
    check(dash_on_m.valid() && dash_on_m.lo > 0.0, "dash on-length range invalid");
    check(dash_gap_m.valid() && dash_gap_m.lo >= 0.0, "dash gap range invalid");
    check(scene_length_m > 0.0, "scene length <= 0");
    check(sample_spacing_m > 0.0, "sample spacing <= 0");
    check(clothoid_ramp_m > 0.0, "clothoid ramp <= 0");
    // the adjacency invariant must be satisfiable before any sampling
    check(lane_width_m.lo >= kMinDelimiterGap, "lane widths can fall below the 1 m delimiter gap");
    const double max_half_width = (lane_count.hi * lane_width_m.hi) / 2.0;
    const double max_kappa = std::max(std::abs(curvature.lo), std::abs(curvature.hi));
    check(max_kappa * max_half_width < 1.0,
          "curvature times half road width reaches 1; offset delimiters would fold");
}

Scene generate_scene(uint64_t seed, const SceneConfig& config) {
    config.validate();
    Rng rng(seed);

    Scene scene;
    scene.seed = seed;

    const int n_lanes = rng.uniform_int(config.lane_count.lo, config.lane_count.hi);
    std::vector<double> widths(static_cast<size_t>(n_lanes));
    for (double& w : widths) w = rng.uniform(config.lane_width_m.lo, config.lane_width_m.hi);
    const double curvature = rng.uniform(config.curvature.lo, config.curvature.hi);

    scene.camera.fx = 1000.0;
    scene.camera.fy = 1000.0;
    scene.camera.cx = 640.0;
    scene.camera.cy = 360.0;
    scene.camera.height = rng.uniform(config.camera_height_m.lo, config.camera_height_m.hi);
    scene.camera.pitch = rng.uniform(config.camera_pitch_rad.lo, config.camera_pitch_rad.hi);
    scene.camera.yaw = rng.uniform(config.camera_yaw_rad.lo, config.camera_yaw_rad.hi);

    scene.dash_on_m = rng.uniform(config.dash_on_m.lo, config.dash_on_m.hi);
    scene.dash_gap_m = rng.uniform(config.dash_gap_m.lo, config.dash_gap_m.hi);

    const auto center = integrate_centerline(curvature, config.clothoid_blend,
                                             config.clothoid_ramp_m, config.scene_length_m);

    double total = 0.0;
    for (double w : widths) total += w;
    std::vector<double> offsets;
    offsets.reserve(widths.size() + 1);
    offsets.push_back(-total / 2.0);
    for (double w : widths) offsets.push_back(offsets.back() + w);

    // offsets ascend left to right along the travel direction
    scene.lanes.reserve(offsets.size());
    for (double o : offsets) {
        std::vector<Vec2> pts;
        pts.reserve(center.size());
        for (const PathSample& ps : center) {
            const Vec2 right_normal{std::sin(ps.heading), -std::cos(ps.heading)};
            pts.push_back(ps.pos + right_normal * o);
        }
        scene.lanes.push_back(resample(pts, config.sample_spacing_m));
    }
    return scene;
}

SceneLabels scene_to_labels(const Scene& scene, const TopViewGrid& grid, double line_width_m,
                            int resolution_divisor) {
    return {encode_tiles(scene.lanes, grid),
            render_lane_image(scene.lanes, grid, line_width_m, resolution_divisor)};
}

std::string dataset_item_id(size_t index) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "scene_%06zu", index);
    return buf;
}

void generate_dataset(uint64_t seed, size_t count, const SceneConfig& config,
                      const TopViewGrid& grid, const std::function<void(const DatasetItem&)>& sink,
                      int threads) {
    config.validate();
    grid.validate();

    // items are produced in parallel but handed to the sink strictly in
    // index order, so the output stream is thread-count invariant
    std::mutex mu;
    std::map<size_t, DatasetItem> ready;
    size_t next_to_emit = 0;

    parallel_for(count, threads, [&](size_t i) {
        DatasetItem item;
        item.index = i;
        item.id = dataset_item_id(i);
        item.scene = generate_scene(mix_seed(seed, i), config);
        item.labels = scene_to_labels(item.scene, grid);
        std::unique_lock<std::mutex> lock(mu);
        ready.emplace(i, std::move(item));
        while (!ready.empty() && ready.begin()->first == next_to_emit) {
            const DatasetItem& front = ready.begin()->second;
            try {
                sink(front);
            } catch (const std::exception& e) {
                throw std::runtime_error("dataset item " + std::to_string(front.index) + " (" +
                                         front.id + "): " + e.what());
            }
            ready.erase(ready.begin());
            ++next_to_emit;
        }
    });
}

}  // namespace lanekit

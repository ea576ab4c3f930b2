#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "lanekit/camera.hpp"
#include "lanekit/cmd.hpp"
#include "lanekit/image_ops.hpp"
#include "lanekit/scene_gen.hpp"
#include "lanekit/seg_eval.hpp"
#include "lanekit/tile_codec.hpp"

namespace lanekit {

/// Bad input contents (schema, ranges, alignment). CLI exit code 1.
struct ValidationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Filesystem trouble (missing/unwritable files). CLI exit code 2.
struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

using json = nlohmann::json;

json camera_to_json(const CameraModel& c);
CameraModel camera_from_json(const json& j);

json grid_to_json(const TopViewGrid& g);
TopViewGrid grid_from_json(const json& j);

json scene_config_to_json(const SceneConfig& c);
SceneConfig scene_config_from_json(const json& j);

json scene_to_json(const std::string& id, const Scene& scene);
struct SceneRecord {
    std::string id;
    Scene scene;
};
SceneRecord scene_from_json(const json& j);

json tilemap_to_json(const std::string& image_id, const TileMap& map);
struct TileRecord {
    std::string image_id;
    TileMap map;
};
TileRecord tilemap_from_json(const json& j);

json segments_to_json(const SegmentRecord& rec);
SegmentRecord segments_from_json(const json& j);

struct LaneRecord {
    std::string image_id;
    std::vector<LanePolyline> lanes;
    std::vector<double> b_max;
};
json lanes_to_json(const LaneRecord& rec);
LaneRecord lanes_from_json(const json& j);

json map_report_to_json(const MapReport& report);

std::vector<PixelBox> boxes_from_json(const json& j);

/// Whole-file helpers. Readers throw IoError on filesystem problems and
/// ValidationError with "path:line:" context on malformed records.
std::vector<json> read_jsonl(const std::string& path);
void write_lines(const std::string& path, const std::vector<std::string>& lines);
json read_json_file(const std::string& path);
void write_json_file(const std::string& path, const json& j);
std::string read_text_file(const std::string& path);

/// CSV of doubles, one sample per row.
SampleSet read_samples_csv(const std::string& path);
void write_pr_csv(const std::string& path, const PRCurve& curve);

}  // namespace lanekit

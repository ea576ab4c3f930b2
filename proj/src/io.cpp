#include "lanekit/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace lanekit {

namespace {

double require_number(const json& j, const char* key, const char* ctx) {
    if (!j.contains(key) || !j.at(key).is_number())
        throw ValidationError(std::string(ctx) + ": missing or non-numeric field \"" + key + "\"");
    return j.at(key).get<double>();
}

const json& require(const json& j, const char* key, const char* ctx) {
    if (!j.contains(key))
        throw ValidationError(std::string(ctx) + ": missing field \"" + key + "\"");
    return j.at(key);
}

Range range_from_json(const json& j, const char* key, const char* ctx) {
    const json& v = require(j, key, ctx);
    if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number())
        throw ValidationError(std::string(ctx) + ": field \"" + key + "\" must be [lo, hi]");
    return {v[0].get<double>(), v[1].get<double>()};
}

}  // namespace

json camera_to_json(const CameraModel& c) {
    return {{"fx", c.fx},          {"fy", c.fy},          {"cx", c.cx},      {"cy", c.cy},
            {"height_m", c.height}, {"pitch_rad", c.pitch}, {"yaw_rad", c.yaw}};
}

CameraModel camera_from_json(const json& j) {
    CameraModel c;
    c.fx = require_number(j, "fx", "camera");
    c.fy = require_number(j, "fy", "camera");
    c.cx = require_number(j, "cx", "camera");
    c.cy = require_number(j, "cy", "camera");
    c.height = require_number(j, "height_m", "camera");
    c.pitch = require_number(j, "pitch_rad", "camera");
    c.yaw = require_number(j, "yaw_rad", "camera");
    c.validate();
    return c;
}

json grid_to_json(const TopViewGrid& g) {
    return {{"x_min", g.x_min}, {"x_max", g.x_max},
            {"y_min", g.y_min}, {"y_max", g.y_max},
            {"px_per_meter", g.px_per_meter}, {"tile_size", g.tile_size}};
}

TopViewGrid grid_from_json(const json& j) {
    TopViewGrid g;
    g.x_min = require_number(j, "x_min", "grid");
    g.x_max = require_number(j, "x_max", "grid");
    g.y_min = require_number(j, "y_min", "grid");
    g.y_max = require_number(j, "y_max", "grid");
    g.px_per_meter = require_number(j, "px_per_meter", "grid");
    g.tile_size = require_number(j, "tile_size", "grid");
    try {
        g.validate();
    } catch (const std::invalid_argument& e) {
        throw ValidationError(e.what());
    }
    return g;
}

json scene_config_to_json(const SceneConfig& c) {
    return {{"lane_count", {c.lane_count.lo, c.lane_count.hi}},
            {"lane_width_m", {c.lane_width_m.lo, c.lane_width_m.hi}},
            {"curvature", {c.curvature.lo, c.curvature.hi}},
            {"clothoid_blend", c.clothoid_blend},
            {"clothoid_ramp_m", c.clothoid_ramp_m},
            {"camera_height_m", {c.camera_height_m.lo, c.camera_height_m.hi}},
            {"camera_pitch_rad", {c.camera_pitch_rad.lo, c.camera_pitch_rad.hi}},
            {"camera_yaw_rad", {c.camera_yaw_rad.lo, c.camera_yaw_rad.hi}},
            {"dash_on_m", {c.dash_on_m.lo, c.dash_on_m.hi}},
            {"dash_gap_m", {c.dash_gap_m.lo, c.dash_gap_m.hi}},
            {"scene_length_m", c.scene_length_m},
            {"sample_spacing_m", c.sample_spacing_m}};
}

SceneConfig scene_config_from_json(const json& j) {
    SceneConfig c;
    if (j.contains("lane_count")) {
        const Range r = range_from_json(j, "lane_count", "scene config");
        c.lane_count = {static_cast<int>(r.lo), static_cast<int>(r.hi)};
    }
    auto opt_range = [&](const char* key, Range& dst) {
        if (j.contains(key)) dst = range_from_json(j, key, "scene config");
    };
    opt_range("lane_width_m", c.lane_width_m);
    opt_range("curvature", c.curvature);
    opt_range("camera_height_m", c.camera_height_m);
    opt_range("camera_pitch_rad", c.camera_pitch_rad);
    opt_range("camera_yaw_rad", c.camera_yaw_rad);
    opt_range("dash_on_m", c.dash_on_m);
    opt_range("dash_gap_m", c.dash_gap_m);
    if (j.contains("clothoid_blend")) c.clothoid_blend = j.at("clothoid_blend").get<bool>();
    if (j.contains("clothoid_ramp_m")) c.clothoid_ramp_m = require_number(j, "clothoid_ramp_m", "scene config");
    if (j.contains("scene_length_m")) c.scene_length_m = require_number(j, "scene_length_m", "scene config");
    if (j.contains("sample_spacing_m"))
        c.sample_spacing_m = require_number(j, "sample_spacing_m", "scene config");
    try {
        c.validate();
    } catch (const std::invalid_argument& e) {
        throw ValidationError(e.what());
    }
    return c;
}

namespace {

json polyline_to_json(const LanePolyline& lane) {
    json pts = json::array();
    for (const Vec2& p : lane.points) pts.push_back({p.x, p.y});
    return {{"points", pts}};
}

LanePolyline polyline_from_json(const json& j, const char* ctx) {
    const json& pts = require(j, "points", ctx);
    if (!pts.is_array()) throw ValidationError(std::string(ctx) + ": \"points\" must be an array");
    LanePolyline lane;
    for (const json& p : pts) {
        if (!p.is_array() || p.size() != 2)
            throw ValidationError(std::string(ctx) + ": point must be [x, y]");
        lane.points.push_back({p[0].get<double>(), p[1].get<double>()});
    }
    return lane;
}

}  // namespace

json scene_to_json(const std::string& id, const Scene& scene) {
    json lanes = json::array();
    for (const LanePolyline& l : scene.lanes) lanes.push_back(polyline_to_json(l));
    return {{"id", id},
            {"seed", scene.seed},
            {"camera", camera_to_json(scene.camera)},
            {"lanes", lanes}};
}

SceneRecord scene_from_json(const json& j) {
    SceneRecord rec;
    rec.id = require(j, "id", "scene").get<std::string>();
    rec.scene.seed = require(j, "seed", "scene").get<uint64_t>();
    rec.scene.camera = camera_from_json(require(j, "camera", "scene"));
    for (const json& l : require(j, "lanes", "scene"))
        rec.scene.lanes.push_back(polyline_from_json(l, "scene lane"));
    return rec;
}

json tilemap_to_json(const std::string& image_id, const TileMap& map) {
    json tiles = json::array();
    for (const TileEntry& e : map.entries) {
        json t = {{"row", e.row}, {"col", e.col},     {"conf", e.conf},
                  {"dx", e.dx},   {"dy", e.dy},       {"theta", e.theta}};
        bool any = false;
        for (double r : e.reserved) any |= r != 0.0;
        if (any) t["reserved"] = e.reserved;
        tiles.push_back(std::move(t));
    }
    return {{"image_id", image_id}, {"grid", grid_to_json(map.grid)}, {"tiles", tiles}};
}

TileRecord tilemap_from_json(const json& j) {
    TileRecord rec;
    rec.image_id = require(j, "image_id", "tile record").get<std::string>();
    rec.map.grid = grid_from_json(require(j, "grid", "tile record"));
    for (const json& t : require(j, "tiles", "tile record")) {
        TileEntry e;
        e.row = static_cast<int>(require_number(t, "row", "tile"));
        e.col = static_cast<int>(require_number(t, "col", "tile"));
        e.conf = require_number(t, "conf", "tile");
        e.dx = require_number(t, "dx", "tile");
        e.dy = require_number(t, "dy", "tile");
        e.theta = require_number(t, "theta", "tile");
        if (t.contains("reserved")) {
            const json& r = t.at("reserved");
            if (!r.is_array() || r.size() != e.reserved.size())
                throw ValidationError("tile: \"reserved\" must hold 6 numbers");
            for (size_t i = 0; i < e.reserved.size(); ++i) e.reserved[i] = r[i].get<double>();
        }
        rec.map.entries.push_back(e);
    }
    try {
        rec.map.validate();
    } catch (const std::invalid_argument& e) {
        throw ValidationError(std::string("tile record ") + rec.image_id + ": " + e.what());
    }
    return rec;
}

json segments_to_json(const SegmentRecord& rec) {
    json segs = json::array();
    for (const ScoredSegment& s : rec.segments)
        segs.push_back({{"x1", s.seg.p1.x},
                        {"y1", s.seg.p1.y},
                        {"x2", s.seg.p2.x},
                        {"y2", s.seg.p2.y},
                        {"conf", s.conf}});
    return {{"image_id", rec.image_id}, {"segments", segs}};
}

SegmentRecord segments_from_json(const json& j) {
    SegmentRecord rec;
    rec.image_id = require(j, "image_id", "segment record").get<std::string>();
    for (const json& s : require(j, "segments", "segment record")) {
        ScoredSegment seg;
        seg.seg.p1 = {require_number(s, "x1", "segment"), require_number(s, "y1", "segment")};
        seg.seg.p2 = {require_number(s, "x2", "segment"), require_number(s, "y2", "segment")};
        seg.conf = s.contains("conf") ? require_number(s, "conf", "segment") : 1.0;
        if (seg.seg.length() <= kMinSegmentLength)
            throw ValidationError("segment record " + rec.image_id + ": degenerate segment");
        rec.segments.push_back(seg);
    }
    return rec;
}

json lanes_to_json(const LaneRecord& rec) {
    json lanes = json::array();
    for (size_t i = 0; i < rec.lanes.size(); ++i) {
        json l = polyline_to_json(rec.lanes[i]);
        l["b_max"] = i < rec.b_max.size() ? rec.b_max[i] : 1.0;
        lanes.push_back(std::move(l));
    }
    return {{"image_id", rec.image_id}, {"lanes", lanes}};
}

LaneRecord lanes_from_json(const json& j) {
    LaneRecord rec;
    rec.image_id = require(j, "image_id", "lane record").get<std::string>();
    for (const json& l : require(j, "lanes", "lane record")) {
        rec.lanes.push_back(polyline_from_json(l, "lane"));
        rec.b_max.push_back(l.contains("b_max") ? l.at("b_max").get<double>() : 1.0);
    }
    return rec;
}

json map_report_to_json(const MapReport& report) {
    json ap = json::object();
    for (const auto& [t, a] : report.ap_per_threshold) {
        char key[16];
        std::snprintf(key, sizeof(key), "%.2f", t);
        ap[key] = a;
    }
    return {{"ap", ap}, {"map", report.map}};
}

std::vector<PixelBox> boxes_from_json(const json& j) {
    if (!j.is_array()) throw ValidationError("boxes: top level must be an array");
    std::vector<PixelBox> out;
    for (const json& b : j) {
        out.push_back({require_number(b, "x0", "box"), require_number(b, "y0", "box"),
                       require_number(b, "x1", "box"), require_number(b, "y1", "box")});
    }
    return out;
}

std::vector<json> read_jsonl(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path);
    std::vector<json> out;
    std::string line;
    size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        try {
            out.push_back(json::parse(line));
        } catch (const json::parse_error& e) {
            throw ValidationError(path + ":" + std::to_string(lineno) + ": " + e.what());
        }
    }
    return out;
}

void write_lines(const std::string& path, const std::vector<std::string>& lines) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write " + path);
    for (const std::string& l : lines) out << l << '\n';
    if (!out) throw IoError("write failed for " + path);
}

json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path);
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw ValidationError(path + ": " + e.what());
    }
}

void write_json_file(const std::string& path, const json& j) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write " + path);
    out << j.dump(2) << '\n';
    if (!out) throw IoError("write failed for " + path);
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

SampleSet read_samples_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path);
    SampleSet set;
    std::string line;
    size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        std::vector<double> row;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) {
            try {
                row.push_back(std::stod(cell));
            } catch (const std::exception&) {
                throw ValidationError(path + ":" + std::to_string(lineno) +
                                      ": non-numeric cell \"" + cell + "\"");
            }
        }
        if (row.empty()) continue;
        if (set.dim == 0) set.dim = row.size();
        if (row.size() != set.dim)
            throw ValidationError(path + ":" + std::to_string(lineno) +
                                  ": inconsistent sample dimension");
        set.data.insert(set.data.end(), row.begin(), row.end());
    }
    if (set.count() == 0) throw ValidationError(path + ": no samples");
    return set;
}

void write_pr_csv(const std::string& path, const PRCurve& curve) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write " + path);
    out << "confidence,precision,recall\n";
    char buf[96];
    for (const auto& p : curve.points) {
        std::snprintf(buf, sizeof(buf), "%.9g,%.9g,%.9g\n", p.confidence, p.precision, p.recall);
        out << buf;
    }
}

}  // namespace lanekit

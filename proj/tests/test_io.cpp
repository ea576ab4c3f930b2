#include <doctest.h>

#include <unistd.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "lanekit/io.hpp"
#include "lanekit/parallel.hpp"
#include "lanekit/pipeline.hpp"
#include "lanekit/png_io.hpp"
#include "lanekit/rng.hpp"

using namespace lanekit;

namespace {

struct TempDir {
    std::filesystem::path path;
    TempDir() {
        static int counter = 0;
        path = std::filesystem::temp_directory_path() /
               ("lanekit_test_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
        std::filesystem::create_directories(path);
    }
    ~TempDir() { std::filesystem::remove_all(path); }
    std::string file(const std::string& name) const { return (path / name).string(); }
};

}  // namespace

TEST_CASE("camera and grid JSON round trip") {
    CameraModel cam;
    cam.fx = 1000.0;
    cam.fy = 990.0;
    cam.cx = 640.0;
    cam.cy = 360.0;
    cam.height = 1.45;
    cam.pitch = 0.09;
    cam.yaw = -0.01;
    const CameraModel back = camera_from_json(camera_to_json(cam));
    CHECK(back.fx == cam.fx);
    CHECK(back.height == cam.height);
    CHECK(back.yaw == cam.yaw);

    TopViewGrid grid;
    grid.px_per_meter = 8.0;
    const TopViewGrid gback = grid_from_json(grid_to_json(grid));
    CHECK(gback.px_per_meter == 8.0);
    CHECK(gback.tile_size == grid.tile_size);

    CHECK_THROWS_AS(camera_from_json(json{{"fx", 100.0}}), ValidationError);
    CHECK_THROWS_AS(grid_from_json(json{{"x_min", 0.0}}), ValidationError);
}

TEST_CASE("scene and tile records round trip") {
    const SceneConfig cfg;
    const Scene scene = generate_scene(12, cfg);
    const SceneRecord rec = scene_from_json(scene_to_json("scene_000012", scene));
    CHECK(rec.id == "scene_000012");
    CHECK(rec.scene.seed == 12);
    REQUIRE(rec.scene.lanes.size() == scene.lanes.size());
    CHECK(rec.scene.lanes[0].points[0].x == scene.lanes[0].points[0].x);

    TopViewGrid grid;
    TileMap map = encode_tiles(scene.lanes, grid);
    const TileRecord tback = tilemap_from_json(tilemap_to_json("img0", map));
    CHECK(tback.image_id == "img0");
    REQUIRE(tback.map.entries.size() == map.entries.size());
    CHECK(tback.map.entries[3].theta == map.entries[3].theta);
    CHECK(tback.map.entries[3].reserved == map.entries[3].reserved);

    // reserved slots are omitted when zero, kept when used
    CHECK(tilemap_to_json("img0", map)["tiles"][0].contains("reserved") == false);
    map.entries[0].reserved[2] = 1.5;
    const TileRecord rback = tilemap_from_json(tilemap_to_json("img0", map));
    CHECK(rback.map.entries[0].reserved[2] == 1.5);
}

TEST_CASE("segment and lane records round trip") {
    SegmentRecord rec;
    rec.image_id = "i";
    rec.segments.push_back({{{0.5, 1.0}, {0.5, 2.0}}, 0.7});
    const SegmentRecord back = segments_from_json(segments_to_json(rec));
    CHECK(back.segments[0].conf == 0.7);
    CHECK(back.segments[0].seg.p2.y == 2.0);

    LaneRecord lanes;
    lanes.image_id = "i";
    lanes.lanes.push_back({{{0.0, 0.0}, {0.0, 5.0}}});
    lanes.b_max.push_back(0.9);
    const LaneRecord lback = lanes_from_json(lanes_to_json(lanes));
    CHECK(lback.b_max[0] == 0.9);
    CHECK(lback.lanes[0].points[1].y == 5.0);
}

TEST_CASE("jsonl reader reports the offending line") {
    TempDir tmp;
    {
        std::ofstream out(tmp.file("bad.jsonl"));
        out << R"({"ok": 1})" << "\n";
        out << "{not json\n";
    }
    try {
        read_jsonl(tmp.file("bad.jsonl"));
        CHECK(false);
    } catch (const ValidationError& e) {
        CHECK(std::string(e.what()).find(":2:") != std::string::npos);
    }
    CHECK_THROWS_AS(read_jsonl(tmp.file("missing.jsonl")), IoError);
}

TEST_CASE("malformed records carry context") {
    CHECK_THROWS_AS(tilemap_from_json(json{{"image_id", "x"}}), ValidationError);
    CHECK_THROWS_AS(segments_from_json(json{{"image_id", "x"}}), ValidationError);
    // a degenerate segment is data, not I/O
    json j = {{"image_id", "x"},
              {"segments", json::array({{{"x1", 0.0}, {"y1", 0.0}, {"x2", 0.0}, {"y2", 0.0}}})}};
    CHECK_THROWS_AS(segments_from_json(j), ValidationError);
}

TEST_CASE("samples CSV reader") {
    TempDir tmp;
    {
        std::ofstream out(tmp.file("z.csv"));
        out << "0.1,0.2\n0.3,0.4\n0.5,0.6\n";
    }
    const SampleSet z = read_samples_csv(tmp.file("z.csv"));
    CHECK(z.count() == 3);
    CHECK(z.dim == 2);
    CHECK(z.at(2, 1) == 0.6);
    {
        std::ofstream out(tmp.file("ragged.csv"));
        out << "0.1,0.2\n0.3\n";
    }
    CHECK_THROWS_AS(read_samples_csv(tmp.file("ragged.csv")), ValidationError);
}

TEST_CASE("png gray round trip is exact for quantized values") {
    TempDir tmp;
    Image img(33, 21);
    Rng rng(6);
    for (float& v : img.px) v = static_cast<float>(rng.uniform());
    write_png_gray(tmp.file("a.png"), img);
    const Image back = read_png_gray(tmp.file("a.png"));
    REQUIRE(back.width == img.width);
    REQUIRE(back.height == img.height);
    for (size_t i = 0; i < img.size(); ++i) {
        const float quantized = std::lround(std::clamp(img.px[i], 0.0f, 1.0f) * 255.0f) / 255.0f;
        CHECK(back.px[i] == doctest::Approx(quantized).epsilon(1e-6));
    }
    CHECK_THROWS_AS(read_png_gray(tmp.file("missing.png")), IoError);
}

TEST_CASE("map report JSON carries the five thresholds") {
    MapReport r;
    r.ap_per_threshold = {{0.1, 1.0}, {0.2, 0.9}, {0.3, 0.8}, {0.4, 0.7}, {0.5, 0.6}};
    r.map = 0.8;
    const json j = map_report_to_json(r);
    CHECK(j["ap"]["0.10"] == 1.0);
    CHECK(j["ap"]["0.50"] == 0.6);
    CHECK(j["map"] == 0.8);
}

TEST_CASE("pipeline produces byte-identical outputs across runs and thread counts") {
    TempDir tmp;
    PipelineConfig cfg;
    cfg.seed = 5;
    cfg.count = 6;
    cfg.perturb.lateral_sigma_m = 0.1;
    cfg.perturb.conf_sigma = 0.1;
    cfg.perturb.dropout = 0.05;
    cfg.perturb.spurious_rate = 1.0;
    cfg.perturb.seed = 5;

    auto run = [&](const std::string& name, int threads) {
        PipelineConfig c = cfg;
        c.threads = threads;
        std::ostringstream log;
        REQUIRE(run_pipeline(c, tmp.file(name), log) == 0);
    };
    run("a", 1);
    run("b", 1);
    run("c", 8);
    for (const char* f : {"scenes.jsonl", "gt_tiles.jsonl", "pred_tiles.jsonl",
                          "pred_lanes.jsonl", "seg_report.json", "lane_report.json"}) {
        const std::string a = read_text_file(tmp.file("a") + "/" + f);
        CHECK(a == read_text_file(tmp.file("b") + "/" + f));
        CHECK(a == read_text_file(tmp.file("c") + "/" + f));
        CHECK(!a.empty());
    }
}

TEST_CASE("thread count resolution honors flag then env then one") {
    ::unsetenv("LANEKIT_THREADS");
    CHECK(resolve_threads(0) == 1);
    CHECK(resolve_threads(3) == 3);
    ::setenv("LANEKIT_THREADS", "7", 1);
    CHECK(resolve_threads(0) == 7);
    CHECK(resolve_threads(2) == 2);
    ::unsetenv("LANEKIT_THREADS");
}

TEST_CASE("pipeline config parsing and exit codes") {
    const json j = {{"seed", 9},
                    {"count", 3},
                    {"perturb", {{"lateral_sigma_m", 0.2}, {"seed", 4}}},
                    {"eval", {{"lane_tol_m", 0.4}, {"paper_literal_overlap", true}}}};
    const PipelineConfig cfg = PipelineConfig::from_json(j);
    CHECK(cfg.seed == 9);
    CHECK(cfg.perturb.lateral_sigma_m == 0.2);
    CHECK(cfg.perturb.seed == 4);
    CHECK(cfg.lane_tol_m == 0.4);
    CHECK(cfg.overlap_rule == OverlapRule::paper_literal);

    // invalid scene config surfaces as a validation failure (exit code 1)
    json bad = j;
    bad["scene"] = {{"lane_width_m", {0.2, 0.4}}};
    CHECK_THROWS_AS(PipelineConfig::from_json(bad), ValidationError);

    // unwritable output directory surfaces as an I/O failure (exit code 2)
    PipelineConfig small;
    small.count = 1;
    std::ostringstream log;
    CHECK(run_pipeline(small, "/proc/definitely/not/writable", log) == 2);
}

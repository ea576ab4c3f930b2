#include <CLI11.hpp>

#include <filesystem>
#include <iostream>

#include "lanekit/clustering.hpp"
#include "lanekit/io.hpp"
#include "lanekit/parallel.hpp"
#include "lanekit/pipeline.hpp"
#include "lanekit/png_io.hpp"
#include "lanekit/warp.hpp"

namespace lk = lanekit;

namespace {

lk::TopViewGrid load_grid(const std::string& path) {
    if (path.empty()) return {};
    return lk::grid_from_json(lk::read_json_file(path));
}

lk::SceneConfig load_scene_config(const std::string& path) {
    if (path.empty()) return {};
    return lk::scene_config_from_json(lk::read_json_file(path));
}

/// Accepts either tile JSONL (decoded at `threshold`) or raw segment JSONL.
std::vector<lk::SegmentRecord> load_segment_dataset(const std::string& path, double threshold) {
    std::vector<lk::SegmentRecord> out;
    for (const lk::json& j : lk::read_jsonl(path)) {
        if (j.contains("tiles")) {
            const lk::TileRecord rec = lk::tilemap_from_json(j);
            out.push_back(
                {rec.image_id, lk::to_scored_segments(lk::decode_tiles(rec.map, threshold))});
        } else {
            out.push_back(lk::segments_from_json(j));
        }
    }
    return out;
}

std::pair<double, double> parse_range(const std::string& text) {
    const auto comma = text.find(',');
    if (comma == std::string::npos)
        throw lk::ValidationError("--range expects \"lo,hi\", got \"" + text + "\"");
    return {std::stod(text.substr(0, comma)), std::stod(text.substr(comma + 1))};
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"lanekit: top-view lane geometry, synthetic scenes and evaluation"};
    app.require_subcommand(1);
    app.fallthrough();  // global flags may appear after the subcommand

    uint64_t seed = 1;
    int threads = 0;
    std::string out;
    app.add_option("--seed", seed, "master random seed")->capture_default_str();
    app.add_option("--threads", threads, "worker threads (0: LANEKIT_THREADS or 1)");
    app.add_option("--out", out, "output file or directory");

    std::string grid_path, config_path, scenes_path, tiles_path, pred_path, gt_path;
    std::string image_path, camera_path, boxes_path, a_path, b_path, crop_text, range_text;

    auto* generate = app.add_subcommand("generate", "generate scenes and ground-truth tiles");
    size_t count = 10;
    generate->add_option("--count", count, "number of scenes")->capture_default_str();
    generate->add_option("--config", config_path, "scene config JSON");
    generate->add_option("--grid", grid_path, "grid JSON");

    auto* encode = app.add_subcommand("encode", "encode scene lanes into tile maps");
    encode->add_option("--scenes", scenes_path, "scenes JSONL")->required();
    encode->add_option("--grid", grid_path, "grid JSON");

    auto* decode = app.add_subcommand("decode", "decode tile maps into scored segments");
    double threshold = 0.5;
    decode->add_option("--tiles", tiles_path, "tiles JSONL")->required();
    decode->add_option("--threshold", threshold, "confidence threshold")->capture_default_str();

    auto* render = app.add_subcommand("render-lane-image", "render ground-truth lane images");
    double line_width = 0.15;
    int divisor = 4;
    render->add_option("--scenes", scenes_path, "scenes JSONL")->required();
    render->add_option("--grid", grid_path, "grid JSON");
    render->add_option("--width", line_width, "stroke width, meters")->capture_default_str();
    render->add_option("--divisor", divisor, "resolution divisor")->capture_default_str();

    auto* mask_cmd = app.add_subcommand("mask", "reconstruction ignore-mask from a lane image");
    double lane_threshold = 0.5, dilation = 2.0, ppm = 1.0;
    mask_cmd->add_option("--lane-image", image_path, "lane image PNG")->required();
    mask_cmd->add_option("--boxes", boxes_path, "vehicle boxes JSON");
    mask_cmd->add_option("--threshold", lane_threshold, "lane threshold")->capture_default_str();
    mask_cmd->add_option("--dilation", dilation, "hull dilation, meters")->capture_default_str();
    mask_cmd->add_option("--ppm", ppm, "pixels per meter of the lane image")->capture_default_str();

    auto* views = app.add_subcommand("views", "left/center/right self-supervision views");
    double pan_deg = 5.0;
    views->add_option("--image", image_path, "camera image PNG")->required();
    views->add_option("--camera", camera_path, "camera JSON")->required();
    views->add_option("--grid", grid_path, "grid JSON");
    views->add_option("--pan", pan_deg, "pan, degrees")->capture_default_str();
    views->add_option("--crop", crop_text, "crop rectangle x0,y0,x1,y1 in grid meters")->required();

    auto* cmd_cmd = app.add_subcommand("cmd", "central moment discrepancy of two sample CSVs");
    int order = 2;
    cmd_cmd->add_option("--a", a_path, "samples CSV, one sample per row")->required();
    cmd_cmd->add_option("--b", b_path, "samples CSV")->required();
    cmd_cmd->add_option("--order", order, "highest moment order")->capture_default_str();
    cmd_cmd->add_option("--range", range_text, "value range lo,hi (default 0,1)");

    auto* perturb_cmd = app.add_subcommand("perturb", "degrade ground-truth tiles into predictions");
    lk::PerturbSpec spec;
    perturb_cmd->add_option("--gt", gt_path, "ground-truth tiles JSONL")->required();
    perturb_cmd->add_option("--lateral-sigma", spec.lateral_sigma_m, "lateral noise sigma, m");
    perturb_cmd->add_option("--conf-sigma", spec.conf_sigma, "confidence noise sigma");
    perturb_cmd->add_option("--dropout", spec.dropout, "per-tile drop probability");
    perturb_cmd->add_option("--spurious", spec.spurious_rate, "spurious tiles per image");

    auto* eval_seg = app.add_subcommand("eval-seg", "segment-based mAP evaluation");
    bool paper_literal = false;
    double decode_threshold = 0.0;
    std::string pr_csv;
    eval_seg->add_option("--pred", pred_path, "prediction tiles or segments JSONL")->required();
    eval_seg->add_option("--gt", gt_path, "ground-truth tiles or segments JSONL")->required();
    eval_seg->add_flag("--paper-literal-overlap", paper_literal,
                       "use the literal overlap inequality direction");
    eval_seg->add_option("--decode-threshold", decode_threshold,
                         "decode threshold for tile inputs")->capture_default_str();
    eval_seg->add_option("--pr-csv", pr_csv, "write PR curves to <prefix><threshold>.csv");

    auto* cluster = app.add_subcommand("cluster", "cluster tiles into lanes");
    cluster->add_option("--pred", pred_path, "prediction tiles JSONL")->required();

    auto* eval_lane = app.add_subcommand("eval-lane", "lane-based point accuracy");
    double tol = 0.5;
    eval_lane->add_option("--pred", pred_path, "predicted lanes JSONL")->required();
    eval_lane->add_option("--gt", gt_path, "ground-truth scenes JSONL")->required();
    eval_lane->add_option("--grid", grid_path, "grid JSON");
    eval_lane->add_option("--tol", tol, "lateral tolerance, meters")->capture_default_str();

    auto* pipeline = app.add_subcommand("pipeline", "full generate/perturb/evaluate run");
    pipeline->add_option("--config", config_path, "pipeline config JSON")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (*generate) {
            if (out.empty()) throw lk::ValidationError("generate: --out directory required");
            std::filesystem::create_directories(out);
            const lk::SceneConfig cfg = load_scene_config(config_path);
            const lk::TopViewGrid grid = load_grid(grid_path);
            std::vector<std::string> scene_lines, tile_lines;
            lk::generate_dataset(
                seed, count, cfg, grid,
                [&](const lk::DatasetItem& item) {
                    scene_lines.push_back(lk::scene_to_json(item.id, item.scene).dump());
                    tile_lines.push_back(lk::tilemap_to_json(item.id, item.labels.tiles).dump());
                },
                threads);
            lk::write_lines(out + "/scenes.jsonl", scene_lines);
            lk::write_lines(out + "/gt_tiles.jsonl", tile_lines);
            std::cout << "wrote " << count << " scenes to " << out << "\n";
        } else if (*encode) {
            if (out.empty()) throw lk::ValidationError("encode: --out file required");
            const lk::TopViewGrid grid = load_grid(grid_path);
            std::vector<std::string> lines;
            for (const lk::json& j : lk::read_jsonl(scenes_path)) {
                const lk::SceneRecord rec = lk::scene_from_json(j);
                lines.push_back(
                    lk::tilemap_to_json(rec.id, lk::encode_tiles(rec.scene.lanes, grid)).dump());
            }
            lk::write_lines(out, lines);
        } else if (*decode) {
            if (out.empty()) throw lk::ValidationError("decode: --out file required");
            std::vector<std::string> lines;
            int skipped = 0;
            for (const lk::json& j : lk::read_jsonl(tiles_path)) {
                const lk::TileRecord rec = lk::tilemap_from_json(j);
                const lk::DecodedTiles dec = lk::decode_tiles(rec.map, threshold);
                skipped += dec.skipped;
                lines.push_back(
                    lk::segments_to_json({rec.image_id, lk::to_scored_segments(dec)}).dump());
            }
            lk::write_lines(out, lines);
            if (skipped > 0)
                std::cerr << "decode: " << skipped << " entries missed their tile square\n";
        } else if (*render) {
            if (out.empty()) throw lk::ValidationError("render-lane-image: --out directory required");
            std::filesystem::create_directories(out);
            const lk::TopViewGrid grid = load_grid(grid_path);
            for (const lk::json& j : lk::read_jsonl(scenes_path)) {
                const lk::SceneRecord rec = lk::scene_from_json(j);
                lk::write_png_gray(out + "/" + rec.id + ".png",
                                   lk::render_lane_image(rec.scene.lanes, grid, line_width, divisor));
            }
        } else if (*mask_cmd) {
            if (out.empty()) throw lk::ValidationError("mask: --out file required");
            const lk::Image lane_image = lk::read_png_gray(image_path);
            std::vector<lk::PixelBox> boxes;
            if (!boxes_path.empty()) boxes = lk::boxes_from_json(lk::read_json_file(boxes_path));
            lk::write_png_mask(
                out, lk::reconstruction_mask(lane_image, boxes, lane_threshold, dilation, ppm));
        } else if (*views) {
            if (out.empty()) throw lk::ValidationError("views: --out directory required");
            std::filesystem::create_directories(out);
            const lk::Image image = lk::read_png_gray(image_path);
            const lk::CameraModel camera = lk::camera_from_json(lk::read_json_file(camera_path));
            const lk::TopViewGrid grid = load_grid(grid_path);
            double cx0, cy0, cx1, cy1;
            if (std::sscanf(crop_text.c_str(), "%lf,%lf,%lf,%lf", &cx0, &cy0, &cx1, &cy1) != 4)
                throw lk::ValidationError("views: --crop expects x0,y0,x1,y1");
            const lk::CropRect crop{cx0, cy0, cx1, cy1};
            for (lk::Orientation o :
                 {lk::Orientation::left, lk::Orientation::center, lk::Orientation::right}) {
                const lk::OrientedView v =
                    lk::make_oriented_view(image, camera, grid, o, crop, pan_deg, threads);
                lk::write_png_gray(out + "/" + lk::orientation_name(o) + ".png", v.image);
            }
        } else if (*cmd_cmd) {
            const lk::SampleSet za = lk::read_samples_csv(a_path);
            const lk::SampleSet zb = lk::read_samples_csv(b_path);
            lk::ValueRange range{0.0, 1.0};
            if (!range_text.empty()) {
                const auto [lo, hi] = parse_range(range_text);
                range = {lo, hi};
            }
            std::cout << lk::cmd(za, zb, order, range) << "\n";
        } else if (*perturb_cmd) {
            if (out.empty()) throw lk::ValidationError("perturb: --out file required");
            spec.seed = seed;
            std::vector<std::string> lines;
            uint64_t index = 0;
            for (const lk::json& j : lk::read_jsonl(gt_path)) {
                const lk::TileRecord rec = lk::tilemap_from_json(j);
                lines.push_back(
                    lk::tilemap_to_json(rec.image_id, lk::perturb_tiles(rec.map, spec, index))
                        .dump());
                ++index;
            }
            lk::write_lines(out, lines);
        } else if (*eval_seg) {
            const auto preds = load_segment_dataset(pred_path, decode_threshold);
            const auto gts = load_segment_dataset(gt_path, 0.5);
            lk::MapEvalOptions opts;
            opts.rule = paper_literal ? lk::OverlapRule::paper_literal
                                      : lk::OverlapRule::insufficient_overlap;
            opts.threads = threads;
            std::vector<lk::PRCurve> curves;
            const lk::MapReport report = lk::map_eval(preds, gts, opts, &curves);
            const lk::json rj = lk::map_report_to_json(report);
            if (!pr_csv.empty()) {
                for (size_t i = 0; i < curves.size(); ++i) {
                    char suffix[16];
                    std::snprintf(suffix, sizeof(suffix), "%.2f",
                                  report.ap_per_threshold[i].first);
                    lk::write_pr_csv(pr_csv + suffix + ".csv", curves[i]);
                }
            }
            if (!out.empty()) lk::write_json_file(out, rj);
            std::cout << rj.dump(2) << "\n";
        } else if (*cluster) {
            if (out.empty()) throw lk::ValidationError("cluster: --out file required");
            std::vector<std::string> lines;
            for (const lk::json& j : lk::read_jsonl(pred_path)) {
                const lk::TileRecord rec = lk::tilemap_from_json(j);
                lk::LaneRecord lanes;
                lanes.image_id = rec.image_id;
                for (const lk::LaneCluster& c : lk::cluster_tiles(rec.map)) {
                    lanes.lanes.push_back(lk::cluster_polyline(c));
                    lanes.b_max.push_back(c.b_max);
                }
                lines.push_back(lk::lanes_to_json(lanes).dump());
            }
            lk::write_lines(out, lines);
        } else if (*eval_lane) {
            const lk::TopViewGrid grid = load_grid(grid_path);
            std::map<std::string, std::vector<lk::LanePolyline>> gt_by_id;
            for (const lk::json& j : lk::read_jsonl(gt_path)) {
                const lk::SceneRecord rec = lk::scene_from_json(j);
                gt_by_id[rec.id] = rec.scene.lanes;
            }
            double sum = 0.0;
            size_t n = 0;
            for (const lk::json& j : lk::read_jsonl(pred_path)) {
                const lk::LaneRecord rec = lk::lanes_from_json(j);
                const auto it = gt_by_id.find(rec.image_id);
                if (it == gt_by_id.end())
                    throw lk::ValidationError("eval-lane: no ground truth for image " +
                                              rec.image_id);
                sum += lk::lane_point_metric(rec.lanes, it->second, grid, tol);
                ++n;
            }
            if (n == 0) throw lk::ValidationError("eval-lane: no predictions");
            const lk::json rj = {{"accuracy", sum / n}, {"images", n}, {"lateral_tol_m", tol}};
            if (!out.empty()) lk::write_json_file(out, rj);
            std::cout << rj.dump(2) << "\n";
        } else if (*pipeline) {
            lk::PipelineConfig cfg = lk::PipelineConfig::from_json(lk::read_json_file(config_path));
            if (threads > 0) cfg.threads = threads;
            if (out.empty()) out = "lanekit_out";
            return lk::run_pipeline(cfg, out, std::cerr);
        }
        return 0;
    } catch (const lk::IoError& e) {
        std::cerr << "I/O error: " << e.what() << "\n";
        return 2;
    } catch (const lk::ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::domain_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}

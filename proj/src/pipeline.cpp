#include "lanekit/pipeline.hpp"

#include <filesystem>

#include "lanekit/clustering.hpp"
#include "lanekit/parallel.hpp"

namespace lanekit {

PipelineConfig PipelineConfig::from_json(const json& j) {
    PipelineConfig c;
    if (j.contains("seed")) c.seed = j.at("seed").get<uint64_t>();
    if (j.contains("count")) c.count = j.at("count").get<size_t>();
    if (j.contains("grid")) c.grid = grid_from_json(j.at("grid"));
    if (j.contains("scene")) c.scene = scene_config_from_json(j.at("scene"));
    c.perturb.seed = c.seed;
    if (j.contains("perturb")) {
        const json& p = j.at("perturb");
        if (p.contains("lateral_sigma_m")) c.perturb.lateral_sigma_m = p.at("lateral_sigma_m").get<double>();
        if (p.contains("conf_sigma")) c.perturb.conf_sigma = p.at("conf_sigma").get<double>();
        if (p.contains("dropout")) c.perturb.dropout = p.at("dropout").get<double>();
        if (p.contains("spurious_rate")) c.perturb.spurious_rate = p.at("spurious_rate").get<double>();
        if (p.contains("seed")) c.perturb.seed = p.at("seed").get<uint64_t>();
    }
    if (j.contains("eval")) {
        const json& e = j.at("eval");
        if (e.contains("decode_threshold")) c.decode_threshold = e.at("decode_threshold").get<double>();
        if (e.contains("lane_tol_m")) c.lane_tol_m = e.at("lane_tol_m").get<double>();
        if (e.contains("paper_literal_overlap") && e.at("paper_literal_overlap").get<bool>())
            c.overlap_rule = OverlapRule::paper_literal;
    }
    if (j.contains("threads")) c.threads = j.at("threads").get<int>();
    try {
        c.grid.validate();
        c.scene.validate();
        c.perturb.validate();
    } catch (const std::invalid_argument& e) {
        throw ValidationError(e.what());
    }
    return c;
}

int run_pipeline(const PipelineConfig& config, const std::string& out_dir, std::ostream& log) {
    const int threads = resolve_threads(config.threads);
    std::string stage = "setup";
    try {
        std::filesystem::create_directories(out_dir);
        auto path = [&](const char* name) { return out_dir + "/" + name; };

        stage = "generate";
        std::vector<std::string> scene_lines, gt_lines;
        std::vector<TileRecord> gt_tiles;
        std::vector<LaneRecord> gt_lanes;
        generate_dataset(
            config.seed, config.count, config.scene, config.grid,
            [&](const DatasetItem& item) {
                scene_lines.push_back(scene_to_json(item.id, item.scene).dump());
                gt_lines.push_back(tilemap_to_json(item.id, item.labels.tiles).dump());
                gt_tiles.push_back({item.id, item.labels.tiles});
                LaneRecord lanes;
                lanes.image_id = item.id;
                lanes.lanes = item.scene.lanes;
                gt_lanes.push_back(std::move(lanes));
            },
            threads);
        write_lines(path("scenes.jsonl"), scene_lines);
        write_lines(path("gt_tiles.jsonl"), gt_lines);

        stage = "perturb";
        std::vector<TileRecord> pred_tiles(gt_tiles.size());
        parallel_for(gt_tiles.size(), threads, [&](size_t i) {
            pred_tiles[i] = {gt_tiles[i].image_id,
                             perturb_tiles(gt_tiles[i].map, config.perturb, i)};
        });
        std::vector<std::string> pred_lines;
        for (const TileRecord& r : pred_tiles)
            pred_lines.push_back(tilemap_to_json(r.image_id, r.map).dump());
        write_lines(path("pred_tiles.jsonl"), pred_lines);

        stage = "eval-seg";
        std::vector<SegmentRecord> pred_segs, gt_segs;
        for (const TileRecord& r : pred_tiles)
            pred_segs.push_back(
                {r.image_id, to_scored_segments(decode_tiles(r.map, config.decode_threshold))});
        for (const TileRecord& r : gt_tiles)
            gt_segs.push_back({r.image_id, to_scored_segments(decode_tiles(r.map, 0.5))});
        MapEvalOptions opts;
        opts.rule = config.overlap_rule;
        opts.threads = threads;
        const MapReport report = map_eval(pred_segs, gt_segs, opts);
        write_json_file(path("seg_report.json"), map_report_to_json(report));

        stage = "cluster";
        std::vector<LaneRecord> pred_lanes(pred_tiles.size());
        parallel_for(pred_tiles.size(), threads, [&](size_t i) {
            LaneRecord rec;
            rec.image_id = pred_tiles[i].image_id;
            for (const LaneCluster& c : cluster_tiles(pred_tiles[i].map)) {
                rec.lanes.push_back(cluster_polyline(c));
                rec.b_max.push_back(c.b_max);
            }
            pred_lanes[i] = std::move(rec);
        });
        std::vector<std::string> lane_lines;
        for (const LaneRecord& r : pred_lanes) lane_lines.push_back(lanes_to_json(r).dump());
        write_lines(path("pred_lanes.jsonl"), lane_lines);

        stage = "eval-lane";
        double acc_sum = 0.0;
        size_t acc_n = 0;
        for (size_t i = 0; i < pred_lanes.size(); ++i) {
            try {
                acc_sum += lane_point_metric(pred_lanes[i].lanes, gt_lanes[i].lanes, config.grid,
                                             config.lane_tol_m);
                ++acc_n;
            } catch (const std::invalid_argument& e) {
                throw ValidationError("item " + gt_lanes[i].image_id + ": " + e.what());
            }
        }
        json lane_report = {{"accuracy", acc_n ? acc_sum / acc_n : 0.0},
                            {"images", acc_n},
                            {"lateral_tol_m", config.lane_tol_m}};
        write_json_file(path("lane_report.json"), lane_report);
        return 0;
    } catch (const IoError& e) {
        log << "pipeline stage '" << stage << "' I/O error: " << e.what() << "\n";
        return 2;
    } catch (const ValidationError& e) {
        log << "pipeline stage '" << stage << "' failed validation: " << e.what() << "\n";
        return 1;
    } catch (const std::invalid_argument& e) {
        log << "pipeline stage '" << stage << "' failed validation: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        log << "pipeline stage '" << stage << "' failed: " << e.what() << "\n";
        return 2;
    }
}

}  // namespace lanekit

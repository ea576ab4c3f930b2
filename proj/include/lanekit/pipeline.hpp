#pragma once

#include <ostream>
#include <string>

#include "lanekit/io.hpp"
#include "lanekit/perturb.hpp"

namespace lanekit {

/// Everything one end-to-end run needs: generation, perturbation, and both
/// evaluations. All randomness comes from the seeds in here.
struct PipelineConfig {
    uint64_t seed = 1;
    size_t count = 10;
    TopViewGrid grid;
    SceneConfig scene;
    PerturbSpec perturb;
    double decode_threshold = 0.0;  // prediction decode threshold for eval
    double lane_tol_m = 0.5;
    OverlapRule overlap_rule = OverlapRule::insufficient_overlap;
    int threads = 0;  // 0: resolve via flag / LANEKIT_THREADS / 1

    static PipelineConfig from_json(const json& j);
};

/// generate -> labels -> perturb -> eval-seg / cluster / eval-lane.
/// Writes scenes.jsonl, gt_tiles.jsonl, pred_tiles.jsonl, pred_lanes.jsonl,
/// seg_report.json and lane_report.json under out_dir. Returns 0 on
/// success, 1 on validation errors, 2 on I/O errors; failures name the
/// stage (and item) on `log`.
int run_pipeline(const PipelineConfig& config, const std::string& out_dir, std::ostream& log);

}  // namespace lanekit

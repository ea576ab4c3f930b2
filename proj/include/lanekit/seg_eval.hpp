#pragma once

#include <limits>
#include <map>
#include <string>
#include <vector>

#include "lanekit/geometry.hpp"

namespace lanekit {

constexpr double kInfCost = std::numeric_limits<double>::infinity();

/// Elimination rule for the overlap test inside seg_dist. The default
/// eliminates pairs whose projections do not sufficiently overlap; the
/// literal variant keeps the opposite inequality direction for comparison.
enum class OverlapRule { insufficient_overlap, paper_literal };

/// Symmetric geometric distance between two lane segments: each endpoint is
/// projected onto the opposite segment's infinite line; pairs whose
/// projections overlap the opposite segment by less than half its length
/// are eliminated (infinity), otherwise the max of the four
/// endpoint-to-projection distances.
double seg_dist(const Segment& p, const Segment& q,
                OverlapRule rule = OverlapRule::insufficient_overlap);

struct Assignment {
    std::vector<std::pair<int, int>> pairs;  // (row, col), finite-cost only
    double total_cost = 0.0;
};

/// Minimum-cost assignment over an n x m matrix that may contain infinity.
/// Result is one-to-one, of maximum cardinality among finite-cost partial
/// assignments, and of minimal total cost among those.
Assignment hungarian(const std::vector<std::vector<double>>& cost);

struct Matching {
    struct Pair {
        int pred = 0;
        int gt = 0;
        double dist = 0.0;
    };
    std::vector<Pair> pairs;
    std::vector<int> unmatched_pred;
    std::vector<int> unmatched_gt;
};

/// Hungarian matching over the seg_dist cost matrix with entries at or
/// above seg_dist_max treated as forbidden.
Matching match_segments(const std::vector<ScoredSegment>& preds, const std::vector<Segment>& gts,
                        double seg_dist_max, OverlapRule rule = OverlapRule::insufficient_overlap);

struct PRCurve {
    struct Point {
        double confidence = 0.0;
        double precision = 0.0;
        double recall = 0.0;
    };
    std::vector<Point> points;  // one per detection, descending confidence
    long tp = 0;                // totals at confidence threshold 0
    long fp = 0;
    long fn = 0;
    long total_gt = 0;
};

/// One evaluated image: which detections matched, at which confidence.
struct ImageDetections {
    std::vector<double> confidences;
    std::vector<bool> matched;
    long gt_count = 0;
};

/// Aggregate detections of all images into one PR curve by sweeping the
/// confidence values in descending order. Ties keep input order. Throws when
/// the ground truth is empty overall (recall undefined).
PRCurve pr_curve(const std::vector<ImageDetections>& images);

/// Area under the precision envelope versus recall (all-points
/// interpolation).
double average_precision(const PRCurve& curve);

/// The five matching thresholds of the segment metric, meters.
inline const std::vector<double>& default_seg_dist_thresholds() {
    static const std::vector<double> t{0.10, 0.20, 0.30, 0.40, 0.50};
    return t;
}

struct MapReport {
    std::vector<std::pair<double, double>> ap_per_threshold;  // (seg_dist_max, AP)
    double map = 0.0;
};

struct SegmentRecord {
    std::string image_id;
    std::vector<ScoredSegment> segments;
};

struct MapEvalOptions {
    std::vector<double> thresholds = default_seg_dist_thresholds();
    OverlapRule rule = OverlapRule::insufficient_overlap;
    int threads = 1;
};

/// Full segment-based evaluation: per-image Hungarian matching at every
/// threshold, image ids aligned one-to-one. Optionally returns the
/// per-threshold PR curves through `curves_out`.
MapReport map_eval(const std::vector<SegmentRecord>& preds, const std::vector<SegmentRecord>& gts,
                   const MapEvalOptions& options = {},
                   std::vector<PRCurve>* curves_out = nullptr);

}  // namespace lanekit

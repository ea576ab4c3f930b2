#pragma once

#include <vector>

#include "lanekit/geometry.hpp"
#include "lanekit/tile_codec.hpp"

namespace lanekit {

/// A chain of tile segments belonging to one lane, ordered bottom row to
/// top row, at most one member per row.
struct LaneCluster {
    std::vector<TileSegment> members;
    double b_max = 0.0;
    int first_row = 0;
    int last_row = 0;
};

/// 1D non-maxima suppression over segments of one tile row: within any
/// lateral window of kernel_m only the max-confidence segment survives.
/// Lateral position is the segment midpoint x; ties keep input order.
std::vector<TileSegment> row_nms(const std::vector<TileSegment>& row_segments,
                                 double kernel_m = 0.2);

/// Likelihood that two segments from consecutive rows belong to one lane:
///   b_curr * b_prev * cos(theta) * (8 - d_min) / 8
/// with theta the orientation difference (zero above 45 degrees) and d_min
/// the minimum endpoint distance in meters (zero at 8 m or more). Clamped
/// to [0, 1].
double affinity(const ScoredSegment& curr, const ScoredSegment& prev);

struct ClusterParams {
    double decode_threshold = 0.0;
    double nms_kernel_m = 0.2;
    int neighbor_candidates = 3;
    int min_members = 4;
    double min_b_max = 1e-2;
};

/// Heuristic bottom-up clustering of a tile map into lanes: decode, per-row
/// NMS, greedy best-affinity linking to the row below, filtering of short
/// or low-confidence clusters, and iterative merging of clusters that butt
/// against each other on horizontally adjacent tiles of one row.
std::vector<LaneCluster> cluster_tiles(const TileMap& map, const ClusterParams& params = {});

/// Cluster centerline: member segment midpoints, bottom to top.
LanePolyline cluster_polyline(const LaneCluster& cluster);

/// Lane-based accuracy in the top view: ground-truth lanes are sampled at
/// the tile-row center anchors; prediction lanes are assigned by Hungarian
/// matching on mean lateral distance; a ground-truth point counts as hit
/// when its assigned prediction passes within lateral_tol_m. Throws when
/// there are no ground-truth lanes.
double lane_point_metric(const std::vector<LanePolyline>& pred_lanes,
                         const std::vector<LanePolyline>& gt_lanes, const TopViewGrid& grid,
                         double lateral_tol_m = 0.5);

}  // namespace lanekit

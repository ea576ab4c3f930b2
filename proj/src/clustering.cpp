#include "lanekit/clustering.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>

#include "lanekit/seg_eval.hpp"

namespace lanekit {

namespace {

double midpoint_x(const TileSegment& t) {
    return 0.5 * (t.scored.seg.p1.x + t.scored.seg.p2.x);
}

/// Orientation difference between undirected segments, degrees in [0, 90].
double orientation_diff_deg(const Segment& a, const Segment& b) {
    const Vec2 da = a.p2 - a.p1, db = b.p2 - b.p1;
    double d = std::abs(std::atan2(da.y, da.x) - std::atan2(db.y, db.x)) * 180.0 / M_PI;
    d = std::fmod(d, 180.0);
    if (d > 90.0) d = 180.0 - d;
    return d;
}

double min_endpoint_distance(const Segment& a, const Segment& b) {
    double d = distance(a.p1, b.p1);
    d = std::min(d, distance(a.p1, b.p2));
    d = std::min(d, distance(a.p2, b.p1));
    return std::min(d, distance(a.p2, b.p2));
}

}  // namespace

std::vector<TileSegment> row_nms(const std::vector<TileSegment>& row_segments, double kernel_m) {
    // confidence-descending pass, stable on ties
    std::vector<size_t> order(row_segments.size());
    for (size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(), [&](size_t a, size_t b) {
        return row_segments[a].scored.conf > row_segments[b].scored.conf;
    });
    std::vector<bool> kept(row_segments.size(), false);
    std::vector<double> kept_x;
    for (size_t i : order) {
        const double x = midpoint_x(row_segments[i]);
        bool suppressed = false;
        for (double kx : kept_x) {
            if (std::abs(x - kx) <= kernel_m) {
                suppressed = true;
                break;
            }
        }
        if (!suppressed) {
            kept[i] = true;
            kept_x.push_back(x);
        }
    }
    std::vector<TileSegment> out;
    for (size_t i = 0; i < row_segments.size(); ++i)
        if (kept[i]) out.push_back(row_segments[i]);
    return out;
}

double affinity(const ScoredSegment& curr, const ScoredSegment& prev) {
    const double theta = orientation_diff_deg(curr.seg, prev.seg);
    if (theta > 45.0) return 0.0;
    const double d_min = min_endpoint_distance(curr.seg, prev.seg);
    if (d_min >= 8.0) return 0.0;
    const double a =
        curr.conf * prev.conf * std::cos(theta * M_PI / 180.0) * (8.0 - d_min) / 8.0;
    return std::clamp(a, 0.0, 1.0);
}

std::vector<LaneCluster> cluster_tiles(const TileMap& map, const ClusterParams& params) {
    const DecodedTiles decoded = decode_tiles(map, params.decode_threshold);

    std::map<int, std::vector<TileSegment>> by_row;
    for (const TileSegment& t : decoded.segments) by_row[t.row].push_back(t);

    struct Member {
        TileSegment seg;
        size_t cluster;
    };
    std::vector<std::vector<TileSegment>> chains;
    std::vector<Member> prev_row;

    const int rows = map.grid.tile_rows();
    for (int row = 0; row < rows; ++row) {
        auto it = by_row.find(row);
        if (it == by_row.end()) {
            prev_row.clear();
            continue;
        }
        std::vector<TileSegment> segs = it->second;
        std::sort(segs.begin(), segs.end(),
                  [](const TileSegment& a, const TileSegment& b) { return a.col < b.col; });
        segs = row_nms(segs, params.nms_kernel_m);

        std::vector<Member> current_row;
        for (const TileSegment& seg : segs) {
            // the 3 laterally closest segments of the row below, by tile
            // center distance, ties toward smaller column
            std::vector<size_t> cand(prev_row.size());
            for (size_t i = 0; i < cand.size(); ++i) cand[i] = i;
            std::stable_sort(cand.begin(), cand.end(), [&](size_t a, size_t b) {
                return std::abs(prev_row[a].seg.col - seg.col) <
                       std::abs(prev_row[b].seg.col - seg.col);
            });
            if (static_cast<int>(cand.size()) > params.neighbor_candidates)
                cand.resize(params.neighbor_candidates);

            // join the cluster of the highest-affinity neighbor; a tilted
            // lane may legally contribute several segments of one row to
            // the same cluster
            double best_a = 0.0;
            size_t best_cluster = 0;
            bool found = false;
            for (size_t ci : cand) {
                const double a = affinity(seg.scored, prev_row[ci].seg.scored);
                if (a > best_a) {
                    best_a = a;
                    best_cluster = prev_row[ci].cluster;
                    found = true;
                }
            }
            size_t cluster_idx;
            if (found) {
                cluster_idx = best_cluster;
            } else {
                cluster_idx = chains.size();
                chains.emplace_back();
            }
            chains[cluster_idx].push_back(seg);
            current_row.push_back({seg, cluster_idx});
        }
        prev_row = std::move(current_row);
    }

    auto finalize = [](std::vector<TileSegment> members) {
        LaneCluster c;
        c.members = std::move(members);
        c.first_row = c.members.front().row;
        c.last_row = c.members.back().row;
        for (const TileSegment& m : c.members) c.b_max = std::max(c.b_max, m.scored.conf);
        return c;
    };

    // filtering precedes merging; the size filter counts distinct
    // rows so the one-member-per-row reduction below cannot shrink a
    // surviving cluster under the minimum
    std::vector<LaneCluster> result;
    for (auto& members : chains) {
        std::set<int> rows_used;
        for (const TileSegment& m : members) rows_used.insert(m.row);
        if (static_cast<int>(rows_used.size()) < params.min_members) continue;
        LaneCluster c = finalize(std::move(members));
        if (c.b_max < params.min_b_max) continue;
        result.push_back(std::move(c));
    }

    // merge clusters that butt against each other on one row, on
    // horizontally adjacent tiles; every merge lowers the count, so the
    // fixpoint terminates
    auto boundary_adjacent = [](const LaneCluster& lo, const LaneCluster& hi) {
        for (auto it = lo.members.rbegin(); it != lo.members.rend() && it->row == lo.last_row;
             ++it)
            for (auto jt = hi.members.begin(); jt != hi.members.end() && jt->row == hi.first_row;
                 ++jt)
                if (std::abs(it->col - jt->col) == 1) return true;
        return false;
    };
    auto try_merge = [&](LaneCluster& lo, LaneCluster& hi) -> bool {
        if (lo.last_row != hi.first_row || hi.last_row <= lo.last_row) return false;
        if (!boundary_adjacent(lo, hi)) return false;
        std::vector<TileSegment> merged = lo.members;
        merged.insert(merged.end(), hi.members.begin(), hi.members.end());
        std::stable_sort(merged.begin(), merged.end(),
                         [](const TileSegment& a, const TileSegment& b) { return a.row < b.row; });
        lo = finalize(std::move(merged));
        return true;
    };

    bool changed = true;
    while (changed) {
        changed = false;
        for (size_t i = 0; i < result.size() && !changed; ++i) {
            for (size_t j = 0; j < result.size() && !changed; ++j) {
                if (i == j) continue;
                if (try_merge(result[i], result[j])) {
                    result.erase(result.begin() + static_cast<long>(j));
                    changed = true;
                }
            }
        }
    }

    // one member per row: keep the strongest segment, ties toward the
    // smaller column
    for (LaneCluster& c : result) {
        std::map<int, TileSegment> per_row;
        for (const TileSegment& m : c.members) {
            auto it = per_row.find(m.row);
            if (it == per_row.end() || m.scored.conf > it->second.scored.conf ||
                (m.scored.conf == it->second.scored.conf && m.col < it->second.col))
                per_row[m.row] = m;
        }
        c.members.clear();
        for (const auto& [row, seg] : per_row) c.members.push_back(seg);
    }

    // deterministic output order independent of chain creation order
    std::sort(result.begin(), result.end(), [](const LaneCluster& a, const LaneCluster& b) {
        if (a.first_row != b.first_row) return a.first_row < b.first_row;
        return a.members.front().col < b.members.front().col;
    });
    return result;
}

LanePolyline cluster_polyline(const LaneCluster& cluster) {
    LanePolyline line;
    line.points.reserve(cluster.members.size());
    for (const TileSegment& m : cluster.members) {
        line.points.push_back((m.scored.seg.p1 + m.scored.seg.p2) * 0.5);
    }
    return line;
}

namespace {

/// Lateral position of a polyline at a given forward anchor, if it crosses.
std::optional<double> lateral_at(const LanePolyline& lane, double y) {
    for (size_t i = 0; i + 1 < lane.points.size(); ++i) {
        const Vec2 a = lane.points[i], b = lane.points[i + 1];
        const double lo = std::min(a.y, b.y), hi = std::max(a.y, b.y);
        if (y < lo || y > hi) continue;
        if (hi - lo < 1e-12) return 0.5 * (a.x + b.x);
        const double t = (y - a.y) / (b.y - a.y);
        if (t < 0.0 || t > 1.0) continue;
        return a.x + t * (b.x - a.x);
    }
    return std::nullopt;
}

}  // namespace

double lane_point_metric(const std::vector<LanePolyline>& pred_lanes,
                         const std::vector<LanePolyline>& gt_lanes, const TopViewGrid& grid,
                         double lateral_tol_m) {
    if (lateral_tol_m <= 0.0) throw std::invalid_argument("lane_point_metric: tolerance <= 0");
    if (gt_lanes.empty()) throw std::invalid_argument("lane_point_metric: no ground-truth lanes");
    grid.validate();

    std::vector<double> anchors;
    for (int r = 0; r < grid.tile_rows(); ++r)
        anchors.push_back(grid.y_min + (r + 0.5) * grid.tile_size);

    // per-lane lateral profiles at the anchors; crossings outside the grid's
    // lateral extent are not part of the top view and don't count
    auto profile = [&](const LanePolyline& lane) {
        std::vector<std::optional<double>> xs(anchors.size());
        for (size_t i = 0; i < anchors.size(); ++i) {
            auto x = lateral_at(lane, anchors[i]);
            if (x && (*x < grid.x_min || *x > grid.x_max)) x = std::nullopt;
            xs[i] = x;
        }
        return xs;
    };
    std::vector<std::vector<std::optional<double>>> gt_prof, pred_prof;
    for (const auto& l : gt_lanes) gt_prof.push_back(profile(l));
    for (const auto& l : pred_lanes) pred_prof.push_back(profile(l));

    long total = 0;
    for (const auto& gp : gt_prof)
        for (const auto& x : gp) total += x.has_value();
    if (total == 0) throw std::invalid_argument("lane_point_metric: no ground-truth points in grid");

    // assignment by mean lateral distance over common anchors
    std::vector<std::vector<double>> cost(pred_prof.size(),
                                          std::vector<double>(gt_prof.size(), kInfCost));
    for (size_t i = 0; i < pred_prof.size(); ++i) {
        for (size_t j = 0; j < gt_prof.size(); ++j) {
            double sum = 0.0;
            int n = 0;
            for (size_t k = 0; k < anchors.size(); ++k) {
                if (pred_prof[i][k] && gt_prof[j][k]) {
                    sum += std::abs(*pred_prof[i][k] - *gt_prof[j][k]);
                    ++n;
                }
            }
            if (n > 0) cost[i][j] = sum / n;
        }
    }
    const Assignment assign = hungarian(cost);

    long hits = 0;
    for (const auto& [pi, gj] : assign.pairs) {
        for (size_t k = 0; k < anchors.size(); ++k) {
            if (!gt_prof[gj][k] || !pred_prof[pi][k]) continue;
            if (std::abs(*gt_prof[gj][k] - *pred_prof[pi][k]) <= lateral_tol_m) ++hits;
        }
    }
    return static_cast<double>(hits) / static_cast<double>(total);
}

}  // namespace lanekit
